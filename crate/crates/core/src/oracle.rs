//! Independent numerical ground truth.
//!
//! [`integrate`] advances `du/dφ = f(u)` for a complex state along a real
//! parameter interval with the Dormand-Prince 5(4) embedded pair, and
//! [`quadrature_phi`] evaluates `∫ dx/f(x)` along a straight segment with
//! adaptive Gauss-Kronrod (7, 15). Neither uses roots, logarithms or
//! g-functions; only the polynomial coefficients enter.

use crate::abel::RiccatiAbelProblem;
use crate::error::{Error, Result};
use crate::poly::{CubicCoefficients, QuadraticCoefficients};
use crate::Complex;

/// `|u|` above which integration reports [`Error::PoleEncountered`].
pub const POLE_MAGNITUDE: f64 = 1e8;
/// Smallest step, relative to the span length.
pub const STEP_FLOOR: f64 = 1e-12;
/// Smallest tolerance accepted by [`integrate`].
pub const MIN_TOL: f64 = 1e-13;
/// Minimum distance from the quadrature segment to any root.
pub const SEGMENT_ROOT_CLEARANCE: f64 = 0.05;

const MAX_STEPS: usize = 1_000_000;
const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Polynomial right-hand side of an autonomous scalar ODE.
pub trait Rhs {
    fn rhs(&self, u: Complex) -> Complex;
}

impl Rhs for QuadraticCoefficients {
    fn rhs(&self, u: Complex) -> Complex {
        self.eval(u)
    }
}

impl Rhs for CubicCoefficients {
    fn rhs(&self, u: Complex) -> Complex {
        self.eval(u)
    }
}

impl<F: Fn(Complex) -> Complex> Rhs for F {
    fn rhs(&self, u: Complex) -> Complex {
        self(u)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationResult {
    pub u_end: Complex,
    pub steps: usize,
    /// Largest accepted local error estimate, scaled by `1 + |u|`.
    pub est_error: f64,
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand-Prince step; returns the fifth-order update and the
/// difference to the embedded fourth-order one.
fn dopri_step<R: Rhs + ?Sized>(f: &R, u: Complex, h: f64) -> (Complex, Complex) {
    debug_assert_eq!(C[0], 0.0);
    let mut k = [Complex::new(0.0, 0.0); 7];
    for s in 0..7 {
        let mut acc = u;
        for j in 0..s {
            acc += k[j] * (h * A[s][j]);
        }
        k[s] = f.rhs(acc);
    }
    let mut high = Complex::new(0.0, 0.0);
    let mut diff = Complex::new(0.0, 0.0);
    for s in 0..7 {
        high += k[s] * B5[s];
        diff += k[s] * (B5[s] - B4[s]);
    }
    (u + high * h, diff * h)
}

/// Fixed-step Dormand-Prince (fifth-order solution) with `steps` equal steps.
pub fn integrate_fixed<R: Rhs + ?Sized>(
    f: &R,
    u0: Complex,
    span: (f64, f64),
    steps: usize,
) -> Complex {
    let h = (span.1 - span.0) / steps.max(1) as f64;
    let mut u = u0;
    for _ in 0..steps.max(1) {
        u = dopri_step(f, u, h).0;
    }
    u
}

/// Adaptive integration of `du/dφ = f(u)` from `span.0` to `span.1` (either
/// direction) with local error per step at most `tol·(1 + |u|)`.
pub fn integrate<R: Rhs + ?Sized>(
    f: &R,
    u0: Complex,
    span: (f64, f64),
    tol: f64,
) -> Result<IntegrationResult> {
    if !(tol >= MIN_TOL) {
        return Err(Error::Domain(format!(
            "tolerance {tol:e} below {MIN_TOL:e}"
        )));
    }
    let (start, end) = span;
    if !(start.is_finite() && end.is_finite()) {
        return Err(Error::Domain("integration span must be finite".into()));
    }
    let length = (end - start).abs();
    if length == 0.0 {
        return Ok(IntegrationResult {
            u_end: u0,
            steps: 0,
            est_error: 0.0,
        });
    }
    let direction = (end - start).signum();
    let floor = STEP_FLOOR * length;

    let mut phi = start;
    let mut u = u0;
    let mut h = initial_step(f, u0, length, tol);
    let mut est_error: f64 = 0.0;
    let mut steps = 0;

    for _ in 0..MAX_STEPS {
        let remaining = (end - phi).abs();
        if remaining <= floor * 1e-3 {
            return Ok(IntegrationResult {
                u_end: u,
                steps,
                est_error,
            });
        }
        let last = h >= remaining;
        let hh = if last { remaining } else { h };
        let (next, diff) = dopri_step(f, u, direction * hh);
        let scale = 1.0 + u.norm().max(next.norm());
        let local = diff.norm() / scale;
        let ratio = local / tol;
        if ratio <= 1.0 && next.is_finite() {
            phi = if last { end } else { phi + direction * hh };
            u = next;
            steps += 1;
            est_error = est_error.max(local);
            if u.norm() > POLE_MAGNITUDE {
                return Err(Error::PoleEncountered {
                    phi,
                    magnitude: u.norm(),
                });
            }
            if last {
                return Ok(IntegrationResult {
                    u_end: u,
                    steps,
                    est_error,
                });
            }
        }
        let factor = if ratio == 0.0 {
            MAX_FACTOR
        } else if ratio.is_finite() {
            (SAFETY * ratio.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
        } else {
            MIN_FACTOR
        };
        h = hh * factor;
        if h < floor {
            if u.norm() > POLE_MAGNITUDE * 1e-2 || !next.is_finite() {
                return Err(Error::PoleEncountered {
                    phi,
                    magnitude: u.norm(),
                });
            }
            return Err(Error::StepUnderflow { phi, step: h });
        }
    }
    Err(Error::StepUnderflow { phi, step: h })
}

fn initial_step<R: Rhs + ?Sized>(f: &R, u0: Complex, length: f64, tol: f64) -> f64 {
    let slope = f.rhs(u0).norm();
    let guess = if slope > 0.0 {
        0.1 * tol.powf(0.2) * (1.0 + u0.norm()) / slope
    } else {
        length
    };
    guess.clamp(length * 1e-6, length)
}

// Gauss-Kronrod (7, 15) nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const QUAD_ABS_TOL: f64 = 1e-13;
const QUAD_MAX_DEPTH: u32 = 40;

fn gauss_kronrod<G: Fn(f64) -> Complex>(g: &G, a: f64, b: f64) -> (Complex, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = g(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = g(center - dx) + g(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).norm())
}

fn adaptive<G: Fn(f64) -> Complex>(g: &G, a: f64, b: f64, tol: f64, depth: u32) -> Complex {
    let (value, error) = gauss_kronrod(g, a, b);
    if error <= tol || depth >= QUAD_MAX_DEPTH {
        return value;
    }
    let mid = 0.5 * (a + b);
    adaptive(g, a, mid, 0.5 * tol, depth + 1) + adaptive(g, mid, b, 0.5 * tol, depth + 1)
}

fn distance_to_segment(p: Complex, a: Complex, b: Complex) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * d.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + d * t)).norm()
}

/// `∫_w^u dx/f(x)` along the straight segment from `w` to `u`, which is
/// `φ(u) − φ(w)` for the Riccati-Abel flow.
pub fn quadrature_phi(prob: &RiccatiAbelProblem, w: Complex, u: Complex) -> Result<Complex> {
    if w == u {
        return Ok(Complex::new(0.0, 0.0));
    }
    let distance = prob
        .roots
        .roots()
        .into_iter()
        .map(|x| distance_to_segment(x, w, u))
        .fold(f64::INFINITY, f64::min);
    if !(distance > SEGMENT_ROOT_CLEARANCE) {
        return Err(Error::SegmentNearRoot { distance });
    }
    let cubic = prob.coeffs;
    let d = u - w;
    let integrand = |t: f64| d / cubic.eval(w + d * t);
    Ok(adaptive(&integrand, 0.0, 1.0, QUAD_ABS_TOL, 0))
}
