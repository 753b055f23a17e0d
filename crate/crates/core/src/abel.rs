//! The Riccati-Abel equation `du/dφ = u³ − a₂u² + a₁u − a₀ = f(u)`.
//!
//! With distinct roots `x₁, x₂, x₃` the equation integrates to the implicit
//! log-map
//!
//! ```text
//! F(u) = m₃₂ Log(u − x₁) + m₁₃ Log(u − x₂) + m₂₁ Log(u − x₃) = V φ
//! ```
//!
//! where `m_ij = x_i − x_j` and `V` is the Vandermonde determinant, so that
//! `dF/du = V/f(u)`. All logarithms are principal. Solutions are recovered
//! by Newton's method on `F(u) − Vφ`.
//!
//! Two solution values `u, v` are packed into the monic quadratic
//! `x² + tx + s` ([`PairState`]); the pair summation `⊕` composes such pairs
//! through the reduction of quartic products modulo the cubic.
//!
//! A second route to solutions runs through the order-3 g-functions: on the
//! constraint curve `g₂(φ₁, φ₂) = 0` the ratio `u = −g₀/g₁`, seen as a
//! function of `φ₂`, solves the same equation ([`bridge_start`],
//! [`bridge_track`]).

use crate::error::{Error, Result};
use crate::gc3::{g3_eval, GVector3, PhasePoint};
use crate::poly::{
    multiply_pairs_reduced, solve_cubic, solve_cubic_with_separation, CubicCoefficients, PairState,
    RootSet3,
};
use crate::Complex;

/// Iteration cap for every Newton loop in this module.
pub const MAX_NEWTON_ITER: usize = 64;

const ROOT_EPS: f64 = 1e-12;
const PAIR_SUM_EPS: f64 = 1e-12;
/// Largest φ₂ increment accepted by [`bridge_track`].
pub const MAX_BRIDGE_STEP: f64 = 0.05;
/// `|u|` above which a bridge path is reported as hitting a pole.
pub const BRIDGE_POLE_MAGNITUDE: f64 = 1e8;
const BRIDGE_G1_EPS: f64 = 1e-10;
const BRIDGE_CONSTRAINT_TOL: f64 = 1e-9;

/// A Riccati-Abel equation with its (distinct) roots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiAbelProblem {
    pub coeffs: CubicCoefficients,
    pub roots: RootSet3,
}

impl RiccatiAbelProblem {
    pub fn new(coeffs: CubicCoefficients) -> Result<Self> {
        Ok(Self {
            coeffs,
            roots: solve_cubic(&coeffs)?,
        })
    }

    pub fn with_separation(coeffs: CubicCoefficients, sep_min: f64) -> Result<Self> {
        Ok(Self {
            coeffs,
            roots: solve_cubic_with_separation(&coeffs, sep_min)?,
        })
    }

    /// `f(u)`.
    pub fn rhs(&self, u: Complex) -> Complex {
        self.coeffs.eval(u)
    }

    fn check_off_roots(&self, u: Complex) -> Result<()> {
        for (k, x) in self.roots.roots().into_iter().enumerate() {
            if !((u - x).norm() > ROOT_EPS) {
                return Err(Error::AtSingularity(format!(
                    "u = {u} coincides with x{}",
                    k + 1
                )));
            }
        }
        Ok(())
    }

    /// `F(u) = m₃₂ Log(u − x₁) + m₁₃ Log(u − x₂) + m₂₁ Log(u − x₃)`.
    pub fn log_map(&self, u: Complex) -> Result<Complex> {
        self.check_off_roots(u)?;
        let r = &self.roots;
        Ok(r.m32 * (u - r.x1).ln() + r.m13 * (u - r.x2).ln() + r.m21 * (u - r.x3).ln())
    }

    /// `φ₀ = F(0)/V`, the phase at which the canonical solution vanishes.
    pub fn phi_zero(&self) -> Result<Complex> {
        if self.coeffs.a0.norm() == 0.0 {
            return Err(Error::AtSingularity("a0 = 0, so zero is a root".into()));
        }
        Ok(self.log_map(Complex::new(0.0, 0.0))? / self.roots.vandermonde)
    }

    /// Solves `F(u) = Vφ` by Newton's method from `seed`, using the exact
    /// derivative `V/f(u)`.
    pub fn invert_log_map(&self, phi: Complex, seed: Complex) -> Result<Complex> {
        let v = self.roots.vandermonde;
        let target = v * phi;
        let tol = 1e-12 * (1.0 + target.norm());
        let mut u = seed;
        let mut residual = f64::INFINITY;
        for _ in 0..MAX_NEWTON_ITER {
            let g = self.log_map(u)? - target;
            residual = g.norm();
            if residual < tol {
                return Ok(u);
            }
            u -= g * self.rhs(u) / v;
            if !u.is_finite() {
                break;
            }
        }
        Err(Error::NoConvergence {
            iterations: MAX_NEWTON_ITER,
            residual,
        })
    }

    /// Solutions along `phis`, each Newton solve seeded by the previous value.
    pub fn continuation(&self, phis: &[Complex], seed: Complex) -> Result<Vec<Complex>> {
        let mut out = Vec::with_capacity(phis.len());
        let mut current = seed;
        for &phi in phis {
            current = self.invert_log_map(phi, current)?;
            out.push(current);
        }
        Ok(out)
    }
}

/// Pair summation `(t, s) ⊕ (v, u) = (B/A, C/A)`, where `A x² + B x + C`
/// is `(x² + tx + s)(x² + vx + u)` reduced modulo the cubic.
pub fn pair_sum(pa: &PairState, pb: &PairState, c: &CubicCoefficients) -> Result<PairState> {
    let reduced = multiply_pairs_reduced(pa, pb, c);
    let scale = 1f64
        .max(c.a2.norm_sqr())
        .max(c.a1.norm())
        .max(c.a2.norm() * (pa.t + pb.t).norm())
        .max(pa.s.norm() + pb.s.norm() + pa.t.norm() * pb.t.norm());
    if !(reduced.a.norm() > PAIR_SUM_EPS * scale) {
        return Err(Error::Indeterminate(format!(
            "leading reduced coefficient A = {} vanishes",
            reduced.a
        )));
    }
    Ok(PairState::new(reduced.b / reduced.a, reduced.c / reduced.a))
}

/// A point on the constraint curve `g₂(φ₁, φ₂) = 0` with `u = −g₀/g₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BridgeState {
    pub phi2: Complex,
    pub phi1: Complex,
    pub g: GVector3,
    pub u: Complex,
}

impl BridgeState {
    /// `dφ₁/dφ₂ = −(g₀ + a₂g₁)/g₁` along the constraint curve.
    pub fn slope(&self, c: &CubicCoefficients) -> Complex {
        -(self.g.g0 + c.a2 * self.g.g1) / self.g.g1
    }

    pub fn constraint_residual(&self) -> f64 {
        self.g.g2.norm() / 1f64.max(self.g.g0.norm()).max(self.g.g1.norm())
    }
}

fn bridge_state(c: &CubicCoefficients, phi1: Complex, phi2: Complex) -> Result<BridgeState> {
    let g = g3_eval(c, &PhasePoint::new(phi1, phi2));
    if !(g.g1.norm() >= BRIDGE_G1_EPS) {
        return Err(Error::NearPole(format!(
            "g1 = {} on the constraint curve",
            g.g1
        )));
    }
    let u = -g.g0 / g.g1;
    if !(u.norm() <= BRIDGE_POLE_MAGNITUDE) {
        return Err(Error::NearPole(format!(
            "|u| = {:e} at phi2 = {phi2}",
            u.norm()
        )));
    }
    let state = BridgeState { phi2, phi1, g, u };
    if !(state.constraint_residual() <= BRIDGE_CONSTRAINT_TOL) {
        return Err(Error::NoConvergence {
            iterations: MAX_NEWTON_ITER,
            residual: state.constraint_residual(),
        });
    }
    Ok(state)
}

/// Newton iteration on one phase of `g₂ = 0` with the other held fixed.
/// `derivative` maps the current g-vector to `∂g₂` in the moving phase.
fn solve_constraint<P, D>(
    c: &CubicCoefficients,
    mut unknown: Complex,
    phase: P,
    derivative: D,
) -> Result<Complex>
where
    P: Fn(Complex) -> PhasePoint,
    D: Fn(&GVector3) -> Complex,
{
    let mut residual = f64::INFINITY;
    for _ in 0..MAX_NEWTON_ITER {
        let g = g3_eval(c, &phase(unknown));
        residual = g.g2.norm() / 1f64.max(g.g0.norm()).max(g.g1.norm());
        let d = derivative(&g);
        if g.g2.norm() == 0.0 {
            return Ok(unknown);
        }
        if !(d.norm() > 0.0) {
            break;
        }
        let step = g.g2 / d;
        unknown -= step;
        if !unknown.is_finite() {
            break;
        }
        if step.norm() <= 1e-15 * (1.0 + unknown.norm()) {
            return Ok(unknown);
        }
    }
    if residual <= BRIDGE_CONSTRAINT_TOL {
        // Stagnated at rounding level.
        return Ok(unknown);
    }
    Err(Error::NoConvergence {
        iterations: MAX_NEWTON_ITER,
        residual,
    })
}

/// Solves `g₂(φ₁, φ₂) = 0` for `φ₁` at fixed `φ₂`, starting from `phi1_guess`.
pub fn bridge_refine(
    c: &CubicCoefficients,
    phi1_guess: Complex,
    phi2: Complex,
) -> Result<BridgeState> {
    let a2 = c.a2;
    // ∂g₂/∂φ₁ = g₁ + a₂g₂
    let phi1 = solve_constraint(
        c,
        phi1_guess,
        |phi1| PhasePoint::new(phi1, phi2),
        |g| g.g1 + a2 * g.g2,
    )?;
    bridge_state(c, phi1, phi2)
}

/// First point of the constraint curve with `φ₁ = phi1_start`, on the
/// branch through the origin.
///
/// Near the origin the curve is `φ₂ ≈ −φ₁²/2`; from there `φ₁` is walked to
/// `phi1_start` in steps of at most [`MAX_BRIDGE_STEP`], predicting with
/// `dφ₂/dφ₁ = −g₁/(g₀ + a₂g₁)` and correcting by Newton's method in `φ₂`.
/// The origin itself is a pole of `u = −g₀/g₁`, so `phi1_start` must be nonzero.
pub fn bridge_start(c: &CubicCoefficients, phi1_start: Complex) -> Result<BridgeState> {
    if !(phi1_start.norm() > ROOT_EPS) {
        return Err(Error::Domain(
            "phi1_start must be nonzero: u = -g0/g1 has a pole at the origin".into(),
        ));
    }
    let (a2, a1) = (c.a2, c.a1);
    let solve = |phi1: Complex, guess: Complex| {
        // ∂g₂/∂φ₂ = g₀ + a₂g₁ + (a₂² − a₁)g₂
        solve_constraint(
            c,
            guess,
            |phi2| PhasePoint::new(phi1, phi2),
            |g| g.g0 + a2 * g.g1 + (a2 * a2 - a1) * g.g2,
        )
    };
    let steps = (phi1_start.norm() / MAX_BRIDGE_STEP).ceil().max(1.0) as usize;
    let mut phi1 = phi1_start / steps as f64;
    let mut phi2 = solve(phi1, -phi1 * phi1 * 0.5)?;
    for k in 2..=steps {
        let g = g3_eval(c, &PhasePoint::new(phi1, phi2));
        let next = phi1_start * (k as f64 / steps as f64);
        let slope = -g.g1 / (g.g0 + a2 * g.g1);
        let guess = if slope.is_finite() {
            phi2 + slope * (next - phi1)
        } else {
            phi2
        };
        phi2 = solve(next, guess)?;
        phi1 = next;
    }
    bridge_state(c, phi1_start, phi2)
}

/// States along a tracked constraint curve. `stopped` carries the error
/// that ended the path early, if any; `states` then holds the prefix that
/// was computed.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgePath {
    pub states: Vec<BridgeState>,
    pub stopped: Option<Error>,
}

impl BridgePath {
    pub fn is_complete(&self) -> bool {
        self.stopped.is_none()
    }
}

/// Follows the constraint curve from `start` through the `φ₂` values in
/// `targets`: an Euler predictor on `dφ₁/dφ₂`, then Newton in `φ₁`.
///
/// Consecutive targets (and the first target relative to `start`) must be
/// at most [`MAX_BRIDGE_STEP`] apart.
pub fn bridge_track(
    c: &CubicCoefficients,
    start: &BridgeState,
    targets: &[Complex],
) -> Result<BridgePath> {
    let mut previous = start.phi2;
    for &target in targets {
        let step = (target - previous).norm();
        if !(step <= MAX_BRIDGE_STEP * (1.0 + 1e-12)) {
            return Err(Error::Domain(format!(
                "bridge step {step} from phi2 = {previous} exceeds {MAX_BRIDGE_STEP}"
            )));
        }
        previous = target;
    }

    let mut states = Vec::with_capacity(targets.len());
    let mut current = *start;
    for &target in targets {
        let predicted = current.phi1 + current.slope(c) * (target - current.phi2);
        match bridge_refine(c, predicted, target) {
            Ok(next) => {
                states.push(next);
                current = next;
            }
            Err(err) => {
                return Ok(BridgePath {
                    states,
                    stopped: Some(err),
                })
            }
        }
    }
    Ok(BridgePath {
        states,
        stopped: None,
    })
}

/// Central difference `du/dφ₂` at a bridge state, re-solving the constraint
/// at `φ₂ ± h`.
pub fn bridge_derivative(c: &CubicCoefficients, state: &BridgeState, h: f64) -> Result<Complex> {
    let slope = state.slope(c);
    let plus = bridge_refine(c, state.phi1 + slope * h, state.phi2 + h)?;
    let minus = bridge_refine(c, state.phi1 - slope * h, state.phi2 - h)?;
    Ok((plus.u - minus.u) / (2.0 * h))
}

/// `|du/dφ₂ − f(u)|` at a bridge state by central differences with step `h`.
pub fn bridge_ode_residual(c: &CubicCoefficients, state: &BridgeState, h: f64) -> Result<f64> {
    Ok((bridge_derivative(c, state, h)? - c.eval(state.u)).norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn one_two_three() -> RiccatiAbelProblem {
        RiccatiAbelProblem::new(CubicCoefficients::real(6.0, 11.0, 6.0)).unwrap()
    }

    #[test]
    fn log_map_at_zero() {
        let prob = one_two_three();
        let f0 = prob.log_map(c(0.0, 0.0)).unwrap();
        let expected = 3f64.ln() - 2.0 * 2f64.ln();
        assert!((f0 - c(expected, 0.0)).norm() < 1e-14);
        assert!((expected + 0.28768).abs() < 1e-5);
    }

    #[test]
    fn log_map_rejects_roots() {
        let prob = one_two_three();
        for x in prob.roots.roots() {
            assert!(matches!(prob.log_map(x), Err(Error::AtSingularity(_))));
        }
    }

    #[test]
    fn log_map_derivative() {
        let prob = RiccatiAbelProblem::new(CubicCoefficients::new(
            c(0.5, 1.0),
            c(-2.0, 0.3),
            c(1.0, -1.5),
        ))
        .unwrap();
        let u = c(0.8, 2.7);
        let h = 1e-6;
        let fd = (prob.log_map(u + h).unwrap() - prob.log_map(u - h).unwrap()) / (2.0 * h);
        let exact = prob.roots.vandermonde / prob.rhs(u);
        assert!((fd - exact).norm() < 1e-6);
    }

    #[test]
    fn phi_zero_for_one_two_three() {
        let prob = one_two_three();
        let phi0 = prob.phi_zero().unwrap();
        assert!((phi0 - c(0.5 * (0.75f64).ln(), 0.0)).norm() < 1e-12);
        assert!((phi0.re + 0.14384).abs() < 1e-5);
        let u = prob.invert_log_map(phi0, c(0.1, 0.0)).unwrap();
        assert!(u.norm() < 1e-9);
    }

    #[test]
    fn phi_zero_requires_nonzero_a0() {
        let prob = RiccatiAbelProblem::new(CubicCoefficients::real(3.0, 2.0, 0.0)).unwrap();
        assert!(matches!(prob.phi_zero(), Err(Error::AtSingularity(_))));
    }

    #[test]
    fn invert_rejects_seed_on_root() {
        let prob = one_two_three();
        let phi0 = prob.phi_zero().unwrap();
        assert!(matches!(
            prob.invert_log_map(phi0, c(2.0, 0.0)),
            Err(Error::AtSingularity(_))
        ));
    }

    #[test]
    fn invert_residual_and_flow() {
        let prob = RiccatiAbelProblem::new(CubicCoefficients::new(
            c(1.0, 0.5),
            c(0.2, -1.0),
            c(-0.7, 0.4),
        ))
        .unwrap();
        let seed = c(1.5, 1.5);
        let phi = prob.log_map(seed).unwrap() / prob.roots.vandermonde + 0.01;
        let u = prob.invert_log_map(phi, seed).unwrap();
        let target = prob.roots.vandermonde * phi;
        assert!((prob.log_map(u).unwrap() - target).norm() < 1e-12 * (1.0 + target.norm()));
        let delta = 1e-7;
        let shifted = prob.invert_log_map(phi + delta, u).unwrap();
        let predicted = delta * prob.rhs(u);
        assert!(((shifted - u) - predicted).norm() <= 1e-5 * predicted.norm());
    }

    #[test]
    fn pair_sum_example() {
        let cubic = CubicCoefficients::real(6.0, 11.0, 6.0);
        let zero = PairState::new(c(0.0, 0.0), c(0.0, 0.0));
        let sum = pair_sum(&zero, &zero, &cubic).unwrap();
        assert!((sum.t - c(-2.4, 0.0)).norm() < 1e-15);
        assert!((sum.s - c(1.44, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn pair_sum_per_root_identity() {
        let cubic = CubicCoefficients::new(c(0.9, -0.2), c(1.3, 0.8), c(-0.4, 0.6));
        let roots = solve_cubic(&cubic).unwrap();
        let pa = PairState::new(c(0.3, 0.7), c(-1.1, 0.2));
        let pb = PairState::new(c(-0.5, 0.1), c(0.6, -0.9));
        let reduced = multiply_pairs_reduced(&pa, &pb, &cubic);
        let sum = pair_sum(&pa, &pb, &cubic).unwrap();
        for x in roots.roots() {
            let lhs = pa.eval(x) * pb.eval(x);
            let rhs = reduced.a * sum.eval(x);
            assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        }
    }

    #[test]
    fn pair_sum_indeterminate() {
        // A = (a₂² − a₁) + a₂(v + t) + (s + u + tv) = 0 with a₂ = 0, a₁ = 1.
        let cubic = CubicCoefficients::real(0.0, 1.0, 2.0);
        let pa = PairState::new(c(0.0, 0.0), c(0.5, 0.0));
        let pb = PairState::new(c(0.0, 0.0), c(0.5, 0.0));
        assert!(matches!(
            pair_sum(&pa, &pb, &cubic),
            Err(Error::Indeterminate(_))
        ));
    }

    #[test]
    fn bridge_start_example() {
        let cubic = CubicCoefficients::real(6.0, 11.0, 6.0);
        let state = bridge_start(&cubic, c(0.5, 0.0)).unwrap();
        assert!(state.g.g2.norm() < 1e-10);
        assert!(state.u.is_finite());
        assert!((state.u + state.g.g0 / state.g.g1).norm() < 1e-15);

        // Perturbing φ₁ and re-solving returns to the same point.
        for kick in [c(0.01, 0.0), c(-0.02, 0.01)] {
            let again = bridge_refine(&cubic, state.phi1 + kick, state.phi2).unwrap();
            assert!((again.phi1 - state.phi1).norm() < 1e-12);
            assert!((again.u - state.u).norm() < 1e-10);
        }
    }

    #[test]
    fn bridge_start_rejects_origin() {
        let cubic = CubicCoefficients::real(6.0, 11.0, 6.0);
        assert!(matches!(
            bridge_start(&cubic, c(0.0, 0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn bridge_track_rejects_large_steps() {
        let cubic = CubicCoefficients::real(6.0, 11.0, 6.0);
        let state = bridge_start(&cubic, c(0.5, 0.0)).unwrap();
        let targets = [state.phi2 - 0.01, state.phi2 - 0.2];
        assert!(matches!(
            bridge_track(&cubic, &state, &targets),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn bridge_track_stops_at_pole() {
        // Moving up in φ₂ from this start, u blows up at φ₂ = 0.
        let cubic = CubicCoefficients::real(6.0, 11.0, 6.0);
        let state = bridge_start(&cubic, c(0.5, 0.0)).unwrap();
        let targets: Vec<Complex> = (1..=20).map(|k| state.phi2 + 0.005 * k as f64).collect();
        let path = bridge_track(&cubic, &state, &targets).unwrap();
        assert!(!path.is_complete());
        assert!(path.states.len() < targets.len());
        assert!(matches!(
            path.stopped,
            Some(Error::NearPole(_)) | Some(Error::NoConvergence { .. })
        ));
    }
}
