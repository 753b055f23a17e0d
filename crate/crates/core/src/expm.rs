//! Matrix exponential of small dense complex matrices by scaling and squaring
//! with a truncated Taylor series.

use nalgebra::SMatrix;

use crate::Complex;

const MAX_TERMS: usize = 64;
const TERM_RTOL: f64 = 1e-16;

fn one_norm<const N: usize>(m: &SMatrix<Complex, N, N>) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// `exp(m)`.
///
/// The argument is scaled by `2^-s` until its 1-norm is at most 1, the
/// series is summed until the next term drops below `1e-16` of the running
/// sum, and the result is squared `s` times.
pub fn expm<const N: usize>(m: &SMatrix<Complex, N, N>) -> SMatrix<Complex, N, N> {
    let norm = one_norm(m);
    let squarings = if norm > 1.0 {
        norm.log2().ceil() as i32
    } else {
        0
    };
    let scaled = m * Complex::new(0.5f64.powi(squarings), 0.0);

    let mut sum = SMatrix::<Complex, N, N>::identity();
    let mut term = SMatrix::<Complex, N, N>::identity();
    for k in 1..=MAX_TERMS {
        term = term * scaled * Complex::new(1.0 / k as f64, 0.0);
        sum += term;
        if one_norm(&term) <= TERM_RTOL * one_norm(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{Matrix2, Matrix3};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn zero_gives_identity() {
        let e = expm(&Matrix3::<Complex>::zeros());
        assert_eq!(e, Matrix3::identity());
    }

    #[test]
    fn rotation_generator() {
        let theta = 1.3;
        let m = Matrix2::new(c(0.0, 0.0), c(-theta, 0.0), c(theta, 0.0), c(0.0, 0.0));
        let e = expm(&m);
        assert!((e[(0, 0)] - c(theta.cos(), 0.0)).norm() < 1e-15);
        assert!((e[(1, 0)] - c(theta.sin(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn diagonal_large_norm() {
        let m = Matrix3::from_diagonal(&nalgebra::Vector3::new(
            c(5.0, 1.0),
            c(-3.0, 0.0),
            c(0.5, -7.0),
        ));
        let e = expm(&m);
        for i in 0..3 {
            let expected = m[(i, i)].exp();
            assert!((e[(i, i)] - expected).norm() <= 1e-13 * expected.norm());
        }
    }

    #[test]
    fn agrees_with_nalgebra_pade() {
        let m = Matrix3::new(
            c(0.1, 0.2),
            c(-1.0, 0.5),
            c(2.0, 0.0),
            c(0.7, -0.3),
            c(0.0, 1.0),
            c(-0.4, 0.4),
            c(1.5, 0.0),
            c(0.2, -0.9),
            c(-0.6, 0.1),
        ) * c(1.7, 0.0);
        let ours = expm(&m);
        let reference = m.exp();
        let scale = one_norm(&reference);
        assert!(one_norm(&(ours - reference)) <= 1e-12 * scale);
    }
}
