//! Order-3 general complex algebra.
//!
//! The generator is the companion matrix of `x³ − a₂x² + a₁x − a₀`,
//!
//! ```text
//!     | 0  0   a₀ |
//! E = | 1  0  −a₁ |
//!     | 0  1   a₂ |
//! ```
//!
//! and the g-functions of a phase point `ψ = (φ₁, φ₂)` are the coordinates
//! of `exp(Eφ₁ + E²φ₂) = g₀ I + g₁ E + g₂ E²`. Since `E e₁ = e₂` and
//! `E² e₁ = e₃`, they are also the first column of that exponential. At an
//! eigenvalue `x_k` the expansion reads `exp(x_kφ₁ + x_k²φ₂) = g₀ + x_k g₁ + x_k² g₂`.

use std::ops::{Add, Neg, Sub};

use nalgebra::{Matrix3, Vector3};

use crate::dd::Cdd;
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::poly::{solve_cubic_with_separation, CubicCoefficients, PairState, RootSet3};
use crate::Complex;

/// Minimum root separation for the spectral (Vandermonde) evaluation. Below
/// it the second divided differences lose too many digits and the matrix
/// series is used instead.
pub const SPECTRAL_MIN_SEPARATION: f64 = 1e-3;

const G2_POLE_EPS: f64 = 1e-12;
const TANGENT_DEN_EPS: f64 = 1e-12;

/// The two phases `(φ₁, φ₂)` of the order-3 algebra.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PhasePoint {
    pub phi1: Complex,
    pub phi2: Complex,
}

impl PhasePoint {
    pub fn new(phi1: Complex, phi2: Complex) -> Self {
        Self { phi1, phi2 }
    }

    pub fn real(phi1: f64, phi2: f64) -> Self {
        Self::new(phi1.into(), phi2.into())
    }
}

impl Add for PhasePoint {
    type Output = PhasePoint;
    fn add(self, rhs: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.phi1 + rhs.phi1, self.phi2 + rhs.phi2)
    }
}

impl Sub for PhasePoint {
    type Output = PhasePoint;
    fn sub(self, rhs: PhasePoint) -> PhasePoint {
        PhasePoint::new(self.phi1 - rhs.phi1, self.phi2 - rhs.phi2)
    }
}

impl Neg for PhasePoint {
    type Output = PhasePoint;
    fn neg(self) -> PhasePoint {
        PhasePoint::new(-self.phi1, -self.phi2)
    }
}

/// `(g₀, g₁, g₂)` at a phase point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GVector3 {
    pub g0: Complex,
    pub g1: Complex,
    pub g2: Complex,
    pub phase: PhasePoint,
}

impl GVector3 {
    pub fn identity() -> Self {
        Self {
            g0: Complex::new(1.0, 0.0),
            g1: Complex::new(0.0, 0.0),
            g2: Complex::new(0.0, 0.0),
            phase: PhasePoint::default(),
        }
    }

    pub fn components(&self) -> [Complex; 3] {
        [self.g0, self.g1, self.g2]
    }

    fn from_vector(v: Vector3<Complex>, phase: PhasePoint) -> Self {
        Self {
            g0: v[0],
            g1: v[1],
            g2: v[2],
            phase,
        }
    }

    /// `g₀ + x g₁ + x² g₂`.
    pub fn eval(&self, x: Complex) -> Complex {
        (self.g2 * x + self.g1) * x + self.g0
    }

    /// The algebra element `g₀ I + g₁ E + g₂ E²` as a matrix. Its action on
    /// another g-vector is the addition law.
    pub fn algebra_matrix(&self, c: &CubicCoefficients) -> Matrix3<Complex> {
        let (a2, a1, a0) = (c.a2, c.a1, c.a0);
        let (g0, g1, g2) = (self.g0, self.g1, self.g2);
        Matrix3::new(
            g0,
            g2 * a0,
            g1 * a0 + g2 * a0 * a2,
            g1,
            g0 - g2 * a1,
            -g1 * a1 + g2 * (a0 - a1 * a2),
            g2,
            g1 + g2 * a2,
            g0 + g1 * a2 + g2 * (a2 * a2 - a1),
        )
    }

    /// `det(g₀ I + g₁ E + g₂ E²)`, equal to `exp(a₂φ₁ + (a₂² − 2a₁)φ₂)`.
    pub fn determinant(&self, c: &CubicCoefficients) -> Complex {
        self.algebra_matrix(c).determinant()
    }

    /// The largest component modulus.
    pub fn max_norm(&self) -> f64 {
        self.g0.norm().max(self.g1.norm()).max(self.g2.norm())
    }
}

/// `det exp(Eφ₁ + E²φ₂)` from the trace identities.
pub fn expected_determinant(c: &CubicCoefficients, psi: &PhasePoint) -> Complex {
    (c.a2 * psi.phi1 + (c.a2 * c.a2 - c.a1 * 2.0) * psi.phi2).exp()
}

/// Tangent ratios `T₁ = g₁/g₂` and `T₀ = g₀/g₂`.
///
/// As a [`PairState`] `(t, s) = (T₁, T₀)` it encodes the quadratic
/// `y² + T₁ y + T₀` proportional to `g₂y² + g₁y + g₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentPair {
    pub t1: Complex,
    pub t0: Complex,
}

impl TangentPair {
    pub fn from_g(g: &GVector3) -> Result<Self> {
        if !(g.g2.norm() > G2_POLE_EPS) {
            return Err(Error::NearPole(format!("g2 = {} at {:?}", g.g2, g.phase)));
        }
        Ok(Self {
            t1: g.g1 / g.g2,
            t0: g.g0 / g.g2,
        })
    }

    pub fn to_pair(self) -> PairState {
        PairState::new(self.t1, self.t0)
    }

    pub fn from_pair(pair: &PairState) -> Self {
        Self {
            t1: pair.t,
            t0: pair.s,
        }
    }
}

/// Companion matrix of the cubic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompanionMatrix3(pub Matrix3<Complex>);

impl CompanionMatrix3 {
    pub fn matrix(&self) -> &Matrix3<Complex> {
        &self.0
    }

    /// Largest entry of `E³ − a₂E² + a₁E − a₀I`.
    pub fn characteristic_residual(&self, c: &CubicCoefficients) -> f64 {
        let e = &self.0;
        let e2 = e * e;
        let e3 = e2 * e;
        let residual = e3 - e2 * c.a2 + e * c.a1 - Matrix3::identity() * c.a0;
        residual.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub fn companion3(c: &CubicCoefficients) -> CompanionMatrix3 {
    let zero = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    CompanionMatrix3(Matrix3::new(
        zero, zero, c.a0, //
        one, zero, -c.a1, //
        zero, one, c.a2,
    ))
}

/// g-functions from the Vandermonde system `exp(x_kφ₁ + x_k²φ₂) = g₀ + x_k g₁ + x_k² g₂`,
/// solved by Lagrange interpolation through the three roots.
pub fn g3_eval_spectral(roots: &RootSet3, psi: &PhasePoint) -> GVector3 {
    let xs = roots.roots();
    let weights = [
        1.0 / (roots.m12 * roots.m13),
        1.0 / (roots.m21 * roots.m23),
        1.0 / (roots.m31 * roots.m32),
    ];
    let mut g = [Complex::new(0.0, 0.0); 3];
    for k in 0..3 {
        let (xi, xj) = (xs[(k + 1) % 3], xs[(k + 2) % 3]);
        let x = xs[k];
        let ek = (x * psi.phi1 + x * x * psi.phi2).exp() * weights[k];
        // L_k(x) = w_k (x² − (x_i + x_j) x + x_i x_j)
        g[0] += ek * xi * xj;
        g[1] -= ek * (xi + xj);
        g[2] += ek;
    }
    GVector3 {
        g0: g[0],
        g1: g[1],
        g2: g[2],
        phase: *psi,
    }
}

/// g-functions from the first column of `exp(Eφ₁ + E²φ₂)`.
pub fn g3_eval_series(c: &CubicCoefficients, psi: &PhasePoint) -> GVector3 {
    let e = companion3(c).0;
    let m = e * psi.phi1 + e * e * psi.phi2;
    let exp = expm(&m);
    GVector3::from_vector(exp.column(0).into_owned(), *psi)
}

/// g-functions at `psi`: spectral when the roots are separated by at least
/// [`SPECTRAL_MIN_SEPARATION`], series otherwise.
pub fn g3_eval(c: &CubicCoefficients, psi: &PhasePoint) -> GVector3 {
    match solve_cubic_with_separation(c, SPECTRAL_MIN_SEPARATION) {
        Ok(roots) => g3_eval_spectral(&roots, psi),
        Err(_) => g3_eval_series(c, psi),
    }
}

/// Partial derivatives of `(g₀, g₁, g₂)` in `φ₁` and `φ₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GPartials {
    pub dphi1: [Complex; 3],
    pub dphi2: [Complex; 3],
}

/// `∂/∂φ₁ g = E g` and `∂/∂φ₂ g = E² g` at an already evaluated g-vector.
pub fn g3_partials_at(g: &GVector3, c: &CubicCoefficients) -> GPartials {
    let e = companion3(c).0;
    let v = Vector3::new(g.g0, g.g1, g.g2);
    let d1 = e * v;
    let d2 = e * d1;
    GPartials {
        dphi1: [d1[0], d1[1], d1[2]],
        dphi2: [d2[0], d2[1], d2[2]],
    }
}

pub fn g3_partials(c: &CubicCoefficients, psi: &PhasePoint) -> GPartials {
    g3_partials_at(&g3_eval(c, psi), c)
}

/// Addition law: `g(ψa + ψb) = M(g(ψa)) g(ψb)` with `M` the algebra matrix.
pub fn g3_add(ga: &GVector3, gb: &GVector3, c: &CubicCoefficients) -> GVector3 {
    let v = ga.algebra_matrix(c) * Vector3::new(gb.g0, gb.g1, gb.g2);
    GVector3::from_vector(v, ga.phase + gb.phase)
}

/// Summation of tangent pairs, the ratio form of [`g3_add`].
pub fn tangent_add(
    ta: &TangentPair,
    tb: &TangentPair,
    c: &CubicCoefficients,
) -> Result<TangentPair> {
    let [a2, a1, a0] = [c.a2, c.a1, c.a0].map(Cdd::from);
    let [t0, t1, r0, r1] = [ta.t0, ta.t1, tb.t0, tb.t1].map(Cdd::from);
    let den = (r0 + (t1 + a2) * r1 + t0 + t1 * a2 + (a2 * a2 - a1)).round();
    if !(den.norm() > TANGENT_DEN_EPS) {
        return Err(Error::Indeterminate(format!(
            "tangent sum denominator {den} vanishes (g2 of the sum is zero)"
        )));
    }
    Ok(TangentPair {
        t1: (t1 * r0 + t0 * r1 - a1 * (r1 + t1) + (a0 - a1 * a2)).round() / den,
        t0: (t0 * r0 + a0 * (r1 + t1) + a0 * a2).round() / den,
    })
}

/// Pair state of a phase point and the two roots `u, v` of
/// `g₀ + g₁y + g₂y² = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhasePair {
    pub pair: PairState,
    pub u: Complex,
    pub v: Complex,
}

pub fn pair_from_phase(c: &CubicCoefficients, psi: &PhasePoint) -> Result<PhasePair> {
    let g = g3_eval(c, psi);
    let pair = TangentPair::from_g(&g)?.to_pair();
    let (u, v) = pair.solutions();
    Ok(PhasePair { pair, u, v })
}
