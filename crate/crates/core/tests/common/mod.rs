#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use riccati_core::poly::{CubicCoefficients, PairState, QuadraticCoefficients};
use riccati_core::Complex;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform sample from the closed disk of radius `r`.
pub fn complex_in_disk(rng: &mut ChaCha8Rng, r: f64) -> Complex {
    let radius = r * rng.random::<f64>().sqrt();
    let angle = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    Complex::from_polar(radius, angle)
}

pub fn quadratic_in_disk(rng: &mut ChaCha8Rng, r: f64) -> QuadraticCoefficients {
    QuadraticCoefficients::new(complex_in_disk(rng, r), complex_in_disk(rng, r))
}

pub fn cubic_in_disk(rng: &mut ChaCha8Rng, r: f64) -> CubicCoefficients {
    CubicCoefficients::new(
        complex_in_disk(rng, r),
        complex_in_disk(rng, r),
        complex_in_disk(rng, r),
    )
}

/// `|a − b| / max(|b|, floor)`.
pub fn rel_err(a: Complex, b: Complex, floor: f64) -> f64 {
    (a - b).norm() / b.norm().max(floor)
}

/// Max-norm relative distance between two vectors.
pub fn rel_err_vec(a: &[Complex], b: &[Complex]) -> f64 {
    let scale = b.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let diff = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max);
    diff / scale.max(f64::MIN_POSITIVE)
}

/// Residual of `P_a(x)·P_b(x) = rhs` relative to the size of the product
/// terms (the pair polynomials with coefficients and `x` replaced by moduli).
pub fn product_residual(
    pa: &PairState,
    pb: &PairState,
    x: Complex,
    lhs: Complex,
    rhs: Complex,
) -> f64 {
    let ax = x.norm();
    let scale = |p: &PairState| ax * ax + p.t.norm() * ax + p.s.norm();
    let magnitude = (scale(pa) * scale(pb)).max(lhs.norm());
    (lhs - rhs).norm() / magnitude.max(f64::MIN_POSITIVE)
}
