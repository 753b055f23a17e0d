//! Generalized complex algebras of orders 2 and 3, and the closed-form
//! solutions and addition formulas of the Riccati equation
//! `u' = u² − a₁u + a₀` and the Riccati-Abel equation
//! `u' = u³ − a₂u² + a₁u − a₀` with constant complex coefficients.
//!
//! Module map:
//!
//! - [`poly`]: complex polynomial machinery (roots, Vandermonde, partial
//!   fractions, reduction of products modulo the cubic).
//! - [`gc2`]: order-2 g-functions and the Riccati closed form and summation law.
//! - [`gc3`]: order-3 two-phase g-functions, their addition laws and the
//!   tangent-pair addition.
//! - [`abel`]: the Riccati-Abel log-map, Newton inversion, the pair summation
//!   `⊕`, and the solution carried along the constraint curve `g₂ = 0`.
//! - [`oracle`]: adaptive Runge-Kutta integration and Gauss-Kronrod quadrature
//!   used as independent ground truth.
//! - [`expm`]: small dense matrix exponential (scaling and squaring).
//!
//! The supported numeric envelope is coefficient magnitudes up to 10 and
//! phases up to 2 in modulus; tolerances documented on each function assume it.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod abel;
mod dd;
pub mod error;
pub mod expm;
pub mod gc2;
pub mod gc3;
pub mod oracle;
pub mod poly;

pub use num_complex::Complex64 as Complex;

pub use error::{Error, Result};

/// Minimum pairwise root separation for formulas that divide by root differences.
pub const DEFAULT_SEP_MIN: f64 = 1e-6;

/// Distance to a pole below which evaluation reports [`Error::NearPole`].
pub const DEFAULT_POLE_EPS: f64 = 1e-8;

/// Parses `re,im` (or a bare real `re`) into a complex number.
pub fn parse_complex(text: &str) -> std::result::Result<Complex, String> {
    let text = text.trim();
    let (re, im) = match text.split_once(',') {
        Some((re, im)) => (re.trim(), im.trim()),
        None => (text, "0"),
    };
    let re: f64 = re
        .parse()
        .map_err(|_| format!("invalid real part {re:?} in complex literal {text:?}"))?;
    let im: f64 = im
        .parse()
        .map_err(|_| format!("invalid imaginary part {im:?} in complex literal {text:?}"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err(format!("complex literal {text:?} is not finite"));
    }
    Ok(Complex::new(re, im))
}
