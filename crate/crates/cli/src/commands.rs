use riccati_core::abel::{
    bridge_ode_residual, bridge_start, bridge_track, pair_sum, RiccatiAbelProblem,
};
use riccati_core::gc2::{
    g2_eval, riccati2_coth, riccati2_eval_with, riccati2_sum, Riccati2Solution,
};
use riccati_core::gc3::{expected_determinant, g3_eval, PhasePoint};
use riccati_core::poly::{
    multiply_pairs_reduced, solve_cubic_with_separation, CubicCoefficients, PairState,
    QuadraticCoefficients,
};
use riccati_core::{parse_complex, Complex, Error, DEFAULT_POLE_EPS};
use serde_json::{json, Value};

use crate::args::{
    BridgeArgs, CubicArg, Eval2Args, Eval3Args, G2Args, G3Args, OutputFormat, PolyArgs,
    QuadraticArg, Sum2Args, Sum3Args,
};
use crate::output::{cx, render_scalar, Cell, Table};
use crate::{CliError, Context, Report};

/// Largest phase increment between Newton solves when marching the log-map.
const CONTINUATION_STEP: f64 = 0.01;
const DEFAULT_FD_STEP: f64 = 1e-6;

fn complex(flag: &str, text: &str) -> Result<Complex, CliError> {
    parse_complex(text).map_err(|e| CliError::Usage(format!("--{flag}: {e}")))
}

fn complexes(flag: &str, texts: &[String]) -> Result<Vec<Complex>, CliError> {
    texts.iter().map(|t| complex(flag, t)).collect()
}

fn quadratic(ctx: &Context, arg: &QuadraticArg) -> Result<QuadraticCoefficients, CliError> {
    match &arg.quadratic {
        Some(texts) => {
            let c = complexes("quadratic", texts)?;
            Ok(QuadraticCoefficients::new(c[0], c[1]))
        }
        None => ctx.config.quadratic(),
    }
}

fn cubic(ctx: &Context, arg: &CubicArg) -> Result<CubicCoefficients, CliError> {
    match &arg.cubic {
        Some(texts) => {
            let c = complexes("cubic", texts)?;
            Ok(CubicCoefficients::new(c[0], c[1], c[2]))
        }
        None => ctx.config.cubic(),
    }
}

/// `n` evenly spaced points from `a` to `b` inclusive.
fn linspace(a: Complex, b: Complex, n: usize) -> Vec<Complex> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|k| a + (b - a) * (k as f64 / (n - 1) as f64))
            .collect(),
    }
}

fn scalar(ctx: &Context, value: &Value) -> Report {
    Report::ok(render_scalar(value, ctx.out))
}

pub fn roots(ctx: &Context, args: &PolyArgs) -> Result<Report, CliError> {
    let order = match (&args.quadratic.quadratic, &args.cubic.cubic) {
        (Some(_), Some(_)) => {
            return Err(CliError::Usage(
                "give --quadratic or --cubic, not both".into(),
            ))
        }
        (Some(_), None) => 2,
        (None, Some(_)) => 3,
        (None, None) => ctx.config.order.unwrap_or(3),
    };
    let value = if order == 2 {
        let q = quadratic(ctx, &args.quadratic)?;
        let sol = Riccati2Solution::with_separation(q, ctx.sep_min)?;
        json!({
            "order": 2,
            "coefficients": {"a1": cx(q.a1), "a0": cx(q.a0)},
            "roots": [cx(sol.x1), cx(sol.x2)],
            "m12": cx(sol.m12),
        })
    } else {
        let c = cubic(ctx, &args.cubic)?;
        let r = solve_cubic_with_separation(&c, ctx.sep_min)?;
        json!({
            "order": 3,
            "coefficients": {"a2": cx(c.a2), "a1": cx(c.a1), "a0": cx(c.a0)},
            "roots": r.roots().map(cx),
            "differences": {"m12": cx(r.m12), "m13": cx(r.m13), "m23": cx(r.m23)},
            "vandermonde": cx(r.vandermonde),
            "min_separation": r.min_separation(),
        })
    };
    Ok(scalar(ctx, &value))
}

pub fn g2(ctx: &Context, args: &G2Args) -> Result<Report, CliError> {
    let q = quadratic(ctx, &args.quadratic)?;
    let phi = complex("phi", &args.phi)?;
    let g = g2_eval(&q, phi);
    Ok(scalar(
        ctx,
        &json!({
            "phi": cx(phi),
            "g0": cx(g.g0),
            "g1": cx(g.g1),
            "determinant": cx(g.determinant(&q)),
            "expected_determinant": cx((q.a1 * phi).exp()),
        }),
    ))
}

pub fn g3(ctx: &Context, args: &G3Args) -> Result<Report, CliError> {
    let c = cubic(ctx, &args.cubic)?;
    let psi = PhasePoint::new(complex("phi1", &args.phi1)?, complex("phi2", &args.phi2)?);
    let g = g3_eval(&c, &psi);
    Ok(scalar(
        ctx,
        &json!({
            "phi1": cx(psi.phi1),
            "phi2": cx(psi.phi2),
            "g0": cx(g.g0),
            "g1": cx(g.g1),
            "g2": cx(g.g2),
            "determinant": cx(g.determinant(&c)),
            "expected_determinant": cx(expected_determinant(&c, &psi)),
        }),
    ))
}

pub fn eval2(ctx: &Context, args: &Eval2Args) -> Result<Report, CliError> {
    let q = quadratic(ctx, &args.quadratic)?;
    let sol = Riccati2Solution::with_separation(q, ctx.sep_min)?;
    let (from, to) = (complex("from", &args.from)?, complex("to", &args.to)?);
    let phi0 = args
        .phi0
        .as_deref()
        .map(|t| complex("phi0", t))
        .transpose()?;
    let pole_eps = positive("pole-eps", args.pole_eps.or(ctx.config.tolerances.pole_eps))?
        .unwrap_or(DEFAULT_POLE_EPS);
    let mut table = Table::new(&["phi_re", "phi_im", "u_re", "u_im", "status"]);
    for phi in linspace(from, to, args.points) {
        let u = match phi0 {
            Some(p0) => riccati2_coth(&sol, phi, p0),
            None => riccati2_eval_with(&sol, phi, pole_eps),
        };
        match u {
            Ok(u) => table.push(vec![
                phi.re.into(),
                phi.im.into(),
                u.re.into(),
                u.im.into(),
                Cell::Text("ok"),
            ]),
            Err(Error::NearPole(_)) => table.push(vec![
                phi.re.into(),
                phi.im.into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Text("near_pole"),
            ]),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Report::ok(
        table.render(ctx.out.unwrap_or(OutputFormat::Csv)),
    ))
}

pub fn eval3(ctx: &Context, args: &Eval3Args) -> Result<Report, CliError> {
    let c = cubic(ctx, &args.cubic)?;
    let prob = RiccatiAbelProblem::with_separation(c, ctx.sep_min)?;
    let u0 = complex("u0", &args.u0)?;
    let v = prob.roots.vandermonde;
    let anchor = prob.log_map(u0)? / v;
    let (from, to) = (complex("from", &args.from)?, complex("to", &args.to)?);
    let mut table = Table::new(&["phi_re", "phi_im", "u_re", "u_im", "residual"]);
    let (mut phi, mut u) = (anchor, u0);
    let mut failure = None;
    for target in linspace(anchor + from, anchor + to, args.points) {
        let substeps = ((target - phi).norm() / CONTINUATION_STEP).ceil().max(1.0) as usize;
        let phis: Vec<Complex> = linspace(phi, target, substeps + 1)
            .into_iter()
            .skip(1)
            .collect();
        match prob.continuation(&phis, u) {
            Ok(path) => {
                u = *path.last().expect("at least one substep");
                phi = target;
            }
            Err(e) => {
                failure = Some(CliError::Numeric(format!(
                    "eval3 stopped at phi = {target}: {e}"
                )));
                break;
            }
        }
        let residual = (prob.log_map(u)? - v * phi).norm() / (1.0 + (v * phi).norm());
        table.push(vec![
            phi.re.into(),
            phi.im.into(),
            u.re.into(),
            u.im.into(),
            residual.into(),
        ]);
    }
    Ok(Report {
        text: table.render(ctx.out.unwrap_or(OutputFormat::Csv)),
        failure,
    })
}

pub fn sum2(ctx: &Context, args: &Sum2Args) -> Result<Report, CliError> {
    let q = quadratic(ctx, &args.quadratic)?;
    let (u, v) = (complex("u", &args.u)?, complex("v", &args.v)?);
    let w = riccati2_sum(u, v, &q)?;
    Ok(scalar(ctx, &json!({"u": cx(u), "v": cx(v), "w": cx(w)})))
}

pub fn sum3(ctx: &Context, args: &Sum3Args) -> Result<Report, CliError> {
    let c = cubic(ctx, &args.cubic)?;
    if args.pair.len() != 4 {
        return Err(CliError::Usage("give --pair exactly twice".into()));
    }
    let p = complexes("pair", &args.pair)?;
    let (pa, pb) = (PairState::new(p[0], p[1]), PairState::new(p[2], p[3]));
    let reduced = multiply_pairs_reduced(&pa, &pb, &c);
    let sum = pair_sum(&pa, &pb, &c)?;
    Ok(scalar(
        ctx,
        &json!({
            "pairs": [{"t": cx(pa.t), "s": cx(pa.s)}, {"t": cx(pb.t), "s": cx(pb.s)}],
            "reduced": {"a": cx(reduced.a), "b": cx(reduced.b), "c": cx(reduced.c)},
            "r": cx(sum.t),
            "w": cx(sum.s),
        }),
    ))
}

pub fn bridge(ctx: &Context, args: &BridgeArgs) -> Result<Report, CliError> {
    let c = cubic(ctx, &args.cubic)?;
    let phi1_start = complex("phi1-start", &args.phi1_start)?;
    let step = complex("step", &args.step)?;
    let h = positive("fd-step", args.fd_step.or(ctx.config.tolerances.fd_step))?
        .unwrap_or(DEFAULT_FD_STEP);
    let start = bridge_start(&c, phi1_start)?;
    let targets: Vec<Complex> = (1..=args.steps)
        .map(|k| start.phi2 + step * k as f64)
        .collect();
    let path = bridge_track(&c, &start, &targets)?;
    let mut table = Table::new(&[
        "phi2_re",
        "phi2_im",
        "phi1_re",
        "phi1_im",
        "u_re",
        "u_im",
        "ode_residual",
    ]);
    for state in std::iter::once(&start).chain(&path.states) {
        let residual = match bridge_ode_residual(&c, state, h) {
            Ok(r) => Cell::Num(r),
            Err(_) => Cell::Empty,
        };
        table.push(vec![
            state.phi2.re.into(),
            state.phi2.im.into(),
            state.phi1.re.into(),
            state.phi1.im.into(),
            state.u.re.into(),
            state.u.im.into(),
            residual,
        ]);
    }
    let failure = path.stopped.as_ref().map(|e| {
        CliError::Numeric(format!(
            "bridge stopped after {} of {} steps: {e}",
            path.states.len(),
            args.steps
        ))
    });
    Ok(Report {
        text: table.render(ctx.out.unwrap_or(OutputFormat::Csv)),
        failure,
    })
}

/// Rejects non-positive or non-finite overrides.
pub fn positive(flag: &str, value: Option<f64>) -> Result<Option<f64>, CliError> {
    match value {
        Some(v) if !(v > 0.0 && v.is_finite()) => Err(CliError::Usage(format!(
            "--{flag} must be positive, got {v}"
        ))),
        v => Ok(v),
    }
}
