//! Complex polynomial machinery for the monic quadratic `x² − a₁x + a₀` and
//! the monic cubic `x³ − a₂x² + a₁x − a₀`.
//!
//! Root sets are always labeled by lexicographic order on `(re, im)`. The
//! root differences `m_ij` and the Vandermonde determinant depend on that
//! labeling (an odd permutation flips the sign of `V`), so a deterministic
//! order keeps every downstream quantity reproducible.

use std::cmp::Ordering;

use crate::dd::Cdd;
use crate::error::{Error, Result};
use crate::{Complex, DEFAULT_SEP_MIN};

const NEWTON_POLISH_STEPS: usize = 4;

/// `x² − a₁x + a₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticCoefficients {
    pub a1: Complex,
    pub a0: Complex,
}

impl QuadraticCoefficients {
    pub fn new(a1: Complex, a0: Complex) -> Self {
        Self { a1, a0 }
    }

    pub fn eval(&self, x: Complex) -> Complex {
        (x - self.a1) * x + self.a0
    }
}

/// `x³ − a₂x² + a₁x − a₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicCoefficients {
    pub a2: Complex,
    pub a1: Complex,
    pub a0: Complex,
}

impl CubicCoefficients {
    pub fn new(a2: Complex, a1: Complex, a0: Complex) -> Self {
        Self { a2, a1, a0 }
    }

    /// Real coefficients, mostly for tests and examples.
    pub fn real(a2: f64, a1: f64, a0: f64) -> Self {
        Self::new(a2.into(), a1.into(), a0.into())
    }

    pub fn eval(&self, x: Complex) -> Complex {
        ((x - self.a2) * x + self.a1) * x - self.a0
    }

    pub fn derivative(&self, x: Complex) -> Complex {
        (x * 3.0 - self.a2 * 2.0) * x + self.a1
    }

    /// Largest coefficient modulus, at least 1. Used to scale tolerances.
    pub fn scale(&self) -> f64 {
        1f64.max(self.a2.norm())
            .max(self.a1.norm())
            .max(self.a0.norm())
    }
}

/// Three distinct roots of a cubic with their differences and Vandermonde
/// determinant `V = (x₁−x₂)(x₂−x₃)(x₃−x₁)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootSet3 {
    pub x1: Complex,
    pub x2: Complex,
    pub x3: Complex,
    pub m12: Complex,
    pub m13: Complex,
    pub m21: Complex,
    pub m23: Complex,
    pub m31: Complex,
    pub m32: Complex,
    pub vandermonde: Complex,
}

impl RootSet3 {
    /// Builds the set from roots in the given labeling (no sorting).
    pub fn from_roots(x1: Complex, x2: Complex, x3: Complex) -> Self {
        let m12 = x1 - x2;
        let m23 = x2 - x3;
        let m31 = x3 - x1;
        Self {
            x1,
            x2,
            x3,
            m12,
            m13: -m31,
            m21: -m12,
            m23,
            m31,
            m32: -m23,
            vandermonde: m12 * m23 * m31,
        }
    }

    pub fn roots(&self) -> [Complex; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn min_separation(&self) -> f64 {
        self.m12.norm().min(self.m23.norm()).min(self.m31.norm())
    }

    /// Coefficients reconstructed by Vieta's formulas.
    pub fn coefficients(&self) -> CubicCoefficients {
        let (x1, x2, x3) = (self.x1, self.x2, self.x3);
        CubicCoefficients::new(x1 + x2 + x3, x1 * x2 + x2 * x3 + x3 * x1, x1 * x2 * x3)
    }

    /// `(x − x₁)(x − x₂)(x − x₃)`.
    pub fn eval(&self, x: Complex) -> Complex {
        (x - self.x1) * (x - self.x2) * (x - self.x3)
    }
}

/// Monic quadratic `x² + tx + s`. Built from two solution values `u, v` it
/// has `t = −(u+v)`, `s = uv`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairState {
    pub t: Complex,
    pub s: Complex,
}

impl PairState {
    pub fn new(t: Complex, s: Complex) -> Self {
        Self { t, s }
    }

    pub fn from_solutions(u: Complex, v: Complex) -> Self {
        Self {
            t: -(u + v),
            s: u * v,
        }
    }

    /// The two roots of `x² + tx + s`, ordered as by [`solve_quadratic`].
    pub fn solutions(&self) -> (Complex, Complex) {
        solve_quadratic(&QuadraticCoefficients::new(-self.t, self.s))
    }

    pub fn eval(&self, x: Complex) -> Complex {
        (x + self.t) * x + self.s
    }
}

/// `A x² + B x + C`, the remainder of a polynomial modulo the cubic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedQuadratic {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
}

impl ReducedQuadratic {
    pub fn new(a: Complex, b: Complex, c: Complex) -> Self {
        Self { a, b, c }
    }

    pub fn eval(&self, x: Complex) -> Complex {
        (self.a * x + self.b) * x + self.c
    }
}

/// Right-hand side `r z + (q − 2rs) z² + (p − qs + rs²) z³` obtained from
/// Abel's equation `(y + s) y' + p + q y + r y² = 0` by `y + s = 1/z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbelCubicRhs {
    pub linear: Complex,
    pub quadratic: Complex,
    pub cubic: Complex,
}

impl AbelCubicRhs {
    pub fn eval(&self, z: Complex) -> Complex {
        ((self.cubic * z + self.quadratic) * z + self.linear) * z
    }
}

fn lexicographic(a: &Complex, b: &Complex) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Roots of `x² − a₁x + a₀`, ordered lexicographically on `(re, im)`.
///
/// A double root is returned twice; separation is the caller's concern.
pub fn solve_quadratic(q: &QuadraticCoefficients) -> (Complex, Complex) {
    let sq = (q.a1 * q.a1 - q.a0 * 4.0).sqrt();
    // Pick the sign that avoids cancellation, then recover the other root
    // from the product.
    let plus = q.a1 + sq;
    let minus = q.a1 - sq;
    let big = if plus.norm() >= minus.norm() {
        plus
    } else {
        minus
    } * 0.5;
    let (r1, r2) = if big == Complex::new(0.0, 0.0) {
        (big, big)
    } else {
        (big, q.a0 / big)
    };
    if lexicographic(&r1, &r2) == Ordering::Greater {
        (r2, r1)
    } else {
        (r1, r2)
    }
}

/// Roots of the cubic with the default separation threshold.
pub fn solve_cubic(c: &CubicCoefficients) -> Result<RootSet3> {
    solve_cubic_with_separation(c, DEFAULT_SEP_MIN)
}

/// Roots of the cubic by Cardano's formula followed by Newton polishing.
///
/// Fails with [`Error::DegenerateRoots`] when two roots are closer than
/// `sep_min`.
pub fn solve_cubic_with_separation(c: &CubicCoefficients, sep_min: f64) -> Result<RootSet3> {
    let mut roots = cubic_roots(c);
    roots.sort_by(lexicographic);
    let set = RootSet3::from_roots(roots[0], roots[1], roots[2]);
    let separation = set.min_separation();
    if !(separation >= sep_min) {
        return Err(Error::DegenerateRoots {
            separation,
            sep_min,
        });
    }
    Ok(set)
}

fn cubic_roots(c: &CubicCoefficients) -> [Complex; 3] {
    let shift = c.a2 / 3.0;
    // x = y + a₂/3 gives y³ + p y + q = 0.
    let p = c.a1 - c.a2 * c.a2 / 3.0;
    let q = -c.a0 + c.a1 * c.a2 / 3.0 - c.a2 * c.a2 * c.a2 * (2.0 / 27.0);
    let half_q = q * 0.5;
    let sq = (half_q * half_q + p * p * p / 27.0).sqrt();
    let w = {
        let plus = -half_q + sq;
        let minus = -half_q - sq;
        if plus.norm() >= minus.norm() {
            plus
        } else {
            minus
        }
    };

    let mut roots = [shift; 3];
    if w.norm() > 0.0 {
        let (r, theta) = w.to_polar();
        let cbrt = Complex::from_polar(r.cbrt(), theta / 3.0);
        let omega = Complex::new(-0.5, 3f64.sqrt() * 0.5);
        let mut ck = cbrt;
        for root in roots.iter_mut() {
            *root = ck - p / (ck * 3.0) + shift;
            ck *= omega;
        }
    }
    for root in roots.iter_mut() {
        *root = polish(c, *root);
    }
    roots
}

fn polish(c: &CubicCoefficients, mut x: Complex) -> Complex {
    let mut fx = c.eval(x);
    for _ in 0..NEWTON_POLISH_STEPS {
        let d = c.derivative(x);
        if fx.norm() == 0.0 || d.norm() == 0.0 {
            break;
        }
        let candidate = x - fx / d;
        let fc = c.eval(candidate);
        if !(fc.norm() < fx.norm()) {
            break;
        }
        x = candidate;
        fx = fc;
    }
    x
}

/// Weights `w_k` of `1/f(x) = Σ w_k/(x − x_k)`:
/// `w₁ = (x₃−x₂)/V`, `w₂ = (x₁−x₃)/V`, `w₃ = (x₂−x₁)/V`.
pub fn partial_fraction_weights(r: &RootSet3) -> Result<[Complex; 3]> {
    let separation = r.min_separation();
    if !(separation >= DEFAULT_SEP_MIN) {
        return Err(Error::DegenerateRoots {
            separation,
            sep_min: DEFAULT_SEP_MIN,
        });
    }
    let v = r.vandermonde;
    Ok([r.m32 / v, r.m13 / v, r.m21 / v])
}

/// Coefficients `(A, B, C)` with `x^k ≡ A x² + B x + C` modulo the cubic.
pub fn reduce_monomial(k: u32, c: &CubicCoefficients) -> Result<ReducedQuadratic> {
    let zero = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    let (a2, a1, a0) = (c.a2, c.a1, c.a0);
    let reduced = match k {
        0 => ReducedQuadratic::new(zero, zero, one),
        1 => ReducedQuadratic::new(zero, one, zero),
        2 => ReducedQuadratic::new(one, zero, zero),
        3 => ReducedQuadratic::new(a2, -a1, a0),
        // x⁴ = a₂x³ − a₁x² + a₀x, then substitute x³.
        4 => ReducedQuadratic::new(a2 * a2 - a1, a0 - a1 * a2, a0 * a2),
        _ => {
            return Err(Error::Domain(format!(
                "monomial degree {k} outside the supported range 0..=4"
            )))
        }
    };
    Ok(reduced)
}

/// Reduces `(x² + t x + s)(x² + v x + u)` modulo the cubic, with
/// `p = (t, s)` and `q = (v, u)`. Coefficients are evaluated in
/// double-double and rounded once.
pub fn multiply_pairs_reduced(
    p: &PairState,
    q: &PairState,
    c: &CubicCoefficients,
) -> ReducedQuadratic {
    let [t, s, v, u] = [p.t, p.s, q.t, q.s].map(Cdd::from);
    let [a2, a1, a0] = [c.a2, c.a1, c.a0].map(Cdd::from);
    let tv_sum = v + t;
    ReducedQuadratic::new(
        ((a2 * a2 - a1) + a2 * tv_sum + (s + u + t * v)).round(),
        ((a0 - a1 * a2) - a1 * tv_sum + (t * u + v * s)).round(),
        (a0 * a2 + a0 * tv_sum + s * u).round(),
    )
}

/// Coefficients of the Riccati-Abel form of Abel's equation with constant `s`.
pub fn abel_transform(p: Complex, q: Complex, r: Complex, s: Complex) -> AbelCubicRhs {
    AbelCubicRhs {
        linear: r,
        quadratic: q - r * s * 2.0,
        cubic: p - q * s + r * s * s,
    }
}
