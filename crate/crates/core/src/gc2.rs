//! Order-2 general complex algebra and the Riccati equation
//! `du/dφ = u² − a₁u + a₀` with constant complex coefficients.
//!
//! The generator is the companion matrix `E = [[0, −a₀], [1, a₁]]`, which
//! satisfies `E² − a₁E + a₀ = 0`. Its exponential splits as
//! `exp(Eφ) = g₀(φ) I + g₁(φ) E`; the pair `(g₀, g₁)` plays the role of
//! cosine and sine, and `−g₀/g₁` solves the Riccati equation.

use nalgebra::Matrix2;

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::poly::{solve_quadratic, QuadraticCoefficients};
use crate::{Complex, DEFAULT_POLE_EPS, DEFAULT_SEP_MIN};

const G1_POLE_EPS: f64 = 1e-12;

/// `(g₀, g₁)` evaluated at phase `phi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GVector2 {
    pub g0: Complex,
    pub g1: Complex,
    pub phi: Complex,
}

impl GVector2 {
    pub fn identity() -> Self {
        Self {
            g0: Complex::new(1.0, 0.0),
            g1: Complex::new(0.0, 0.0),
            phi: Complex::new(0.0, 0.0),
        }
    }

    /// `det(g₀ I + g₁ E) = g₀² + a₁g₀g₁ + a₀g₁²`, which equals `exp(a₁φ)`.
    pub fn determinant(&self, q: &QuadraticCoefficients) -> Complex {
        self.g0 * self.g0 + q.a1 * self.g0 * self.g1 + q.a0 * self.g1 * self.g1
    }
}

/// Roots of the quadratic and their difference `m₁₂ = x₁ − x₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Riccati2Solution {
    pub coeffs: QuadraticCoefficients,
    pub x1: Complex,
    pub x2: Complex,
    pub m12: Complex,
}

impl Riccati2Solution {
    pub fn new(coeffs: QuadraticCoefficients) -> Result<Self> {
        Self::with_separation(coeffs, DEFAULT_SEP_MIN)
    }

    pub fn with_separation(coeffs: QuadraticCoefficients, sep_min: f64) -> Result<Self> {
        let (x1, x2) = solve_quadratic(&coeffs);
        let m12 = x1 - x2;
        let separation = m12.norm();
        if !(separation >= sep_min) {
            return Err(Error::DegenerateRoots {
                separation,
                sep_min,
            });
        }
        Ok(Self {
            coeffs,
            x1,
            x2,
            m12,
        })
    }

    /// Principal phase `φ₀` with `exp(m₁₂φ₀) = x₁/x₂`, where the canonical
    /// solution vanishes.
    pub fn zero_phase(&self) -> Result<Complex> {
        if self.x1.norm() == 0.0 || self.x2.norm() == 0.0 {
            return Err(Error::AtSingularity(
                "zero is a root of the quadratic".into(),
            ));
        }
        Ok((self.x1 / self.x2).ln() / self.m12)
    }

    /// `u² − a₁u + a₀`.
    pub fn rhs(&self, u: Complex) -> Complex {
        self.coeffs.eval(u)
    }
}

/// `exp(z) − 1` without cancellation near zero.
pub(crate) fn exp_m1(z: Complex) -> Complex {
    if z.norm() > 0.5 {
        return z.exp() - 1.0;
    }
    let half_sin = (z.im * 0.5).sin();
    let em1 = z.re.exp_m1();
    Complex::new(
        em1 * z.im.cos() - 2.0 * half_sin * half_sin,
        z.re.exp() * z.im.sin(),
    )
}

/// `1 / (exp(z) − 1)`, reporting [`Error::NearPole`] when `|exp(z) − 1| ≤ pole_eps`.
fn inv_exp_m1(z: Complex, pole_eps: f64) -> Result<Complex> {
    if z.re > 1.0 {
        // exp(z) may overflow; rewrite with w = exp(−z), |w| < 1.
        let w = (-z).exp();
        return Ok(w / (1.0 - w));
    }
    let d = exp_m1(z);
    if !(d.norm() > pole_eps) {
        return Err(Error::NearPole(format!(
            "|exp(m12*phi) - 1| = {:e} at m12*phi = {z}",
            d.norm()
        )));
    }
    Ok(1.0 / d)
}

/// Companion matrix `[[0, −a₀], [1, a₁]]`.
pub fn companion2(q: &QuadraticCoefficients) -> Matrix2<Complex> {
    let zero = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    Matrix2::new(zero, -q.a0, one, q.a1)
}

/// g-functions by the spectral formula `exp(x_k φ) = x_k g₁ + g₀`.
pub fn g2_eval_spectral(q: &QuadraticCoefficients, phi: Complex) -> Result<GVector2> {
    let sol = Riccati2Solution::new(*q)?;
    let e2 = (sol.x2 * phi).exp();
    let g1 = e2 * exp_m1(sol.m12 * phi) / sol.m12;
    Ok(GVector2 {
        g0: e2 - sol.x2 * g1,
        g1,
        phi,
    })
}

/// g-functions from the first column of `exp(Eφ)`.
pub fn g2_eval_series(q: &QuadraticCoefficients, phi: Complex) -> GVector2 {
    let e = expm(&(companion2(q) * phi));
    GVector2 {
        g0: e[(0, 0)],
        g1: e[(1, 0)],
        phi,
    }
}

/// g-functions at `phi`, spectral when the roots are separated and by the
/// matrix series otherwise.
pub fn g2_eval(q: &QuadraticCoefficients, phi: Complex) -> GVector2 {
    g2_eval_spectral(q, phi).unwrap_or_else(|_| g2_eval_series(q, phi))
}

/// Addition law `g(a + b)` from `g(a)` and `g(b)`.
pub fn g2_add(ga: &GVector2, gb: &GVector2, q: &QuadraticCoefficients) -> GVector2 {
    GVector2 {
        g0: ga.g0 * gb.g0 - q.a0 * ga.g1 * gb.g1,
        g1: ga.g1 * gb.g0 + ga.g0 * gb.g1 + q.a1 * ga.g1 * gb.g1,
        phi: ga.phi + gb.phi,
    }
}

/// `(dg₀/dφ, dg₁/dφ) = (−a₀g₁, g₀ + a₁g₁)`.
pub fn g2_derivative(g: &GVector2, q: &QuadraticCoefficients) -> (Complex, Complex) {
    (-q.a0 * g.g1, g.g0 + q.a1 * g.g1)
}

/// Canonical solution `u` with `exp(m₁₂φ) = (u − x₁)/(u − x₂)`.
pub fn riccati2_eval(sol: &Riccati2Solution, phi: Complex) -> Result<Complex> {
    riccati2_eval_with(sol, phi, DEFAULT_POLE_EPS)
}

pub fn riccati2_eval_with(sol: &Riccati2Solution, phi: Complex, pole_eps: f64) -> Result<Complex> {
    // (x₁ − x₂E)/(1 − E) with E = exp(m₁₂φ) simplifies to x₂ − m₁₂/(E − 1).
    Ok(sol.x2 - sol.m12 * inv_exp_m1(sol.m12 * phi, pole_eps)?)
}

/// `½m₁₂ coth(m₁₂φ₀/2) − ½m₁₂ coth(m₁₂φ/2)`, the solution vanishing at `φ₀`.
///
/// It solves the Riccati equation when `φ₀` is a zero of the canonical
/// solution (see [`Riccati2Solution::zero_phase`]); then it coincides with
/// [`riccati2_eval`].
pub fn riccati2_coth(sol: &Riccati2Solution, phi: Complex, phi0: Complex) -> Result<Complex> {
    // ½m coth(mz/2) = m/2 + m/(exp(mz) − 1); the m/2 terms cancel.
    let at_phi0 = inv_exp_m1(sol.m12 * phi0, DEFAULT_POLE_EPS)?;
    let at_phi = inv_exp_m1(sol.m12 * phi, DEFAULT_POLE_EPS)?;
    Ok(sol.m12 * (at_phi0 - at_phi))
}

/// Summation formula `w = (uv − a₀)/(u + v − a₁)`.
pub fn riccati2_sum(u: Complex, v: Complex, q: &QuadraticCoefficients) -> Result<Complex> {
    let den = u + v - q.a1;
    if !(den.norm() > 1e-12 * (1.0 + u.norm() + v.norm())) {
        return Err(Error::Indeterminate(format!(
            "u + v - a1 = {den} (sum is the point at infinity)"
        )));
    }
    Ok((u * v - q.a0) / den)
}

/// `−g₀(φ)/g₁(φ)`.
pub fn riccati2_tangent(q: &QuadraticCoefficients, phi: Complex) -> Result<Complex> {
    let g = g2_eval(q, phi);
    if !(g.g1.norm() > G1_POLE_EPS) {
        return Err(Error::NearPole(format!("g1({phi}) = {}", g.g1)));
    }
    Ok(-g.g0 / g.g1)
}
