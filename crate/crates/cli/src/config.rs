use std::path::Path;

use riccati_core::poly::{CubicCoefficients, QuadraticCoefficients};
use riccati_core::Complex;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    /// 2 for the Riccati equation, 3 for Riccati-Abel.
    pub order: Option<u8>,
    /// Highest coefficient first: `[a1, a0]` or `[a2, a1, a0]`, each `[re, im]`.
    pub coefficients: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub tolerances: Tolerances,
    pub sep_min: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Overrides every verify property's tolerance.
    pub verify: Option<f64>,
    pub pole_eps: Option<f64>,
    pub fd_step: Option<f64>,
}

impl ProblemConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let config: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        match (self.order, &self.coefficients) {
            (None, None) => {}
            (Some(order), Some(coeffs)) => {
                if !(order == 2 || order == 3) {
                    return Err(CliError::Usage(format!(
                        "config order must be 2 or 3, got {order}"
                    )));
                }
                if coeffs.len() != order as usize {
                    return Err(CliError::Usage(format!(
                        "config order {order} needs {order} coefficients, got {}",
                        coeffs.len()
                    )));
                }
                if coeffs.iter().flatten().any(|x| !x.is_finite()) {
                    return Err(CliError::Usage("config coefficients must be finite".into()));
                }
            }
            _ => {
                return Err(CliError::Usage(
                    "config needs both `order` and `coefficients`, or neither".into(),
                ))
            }
        }
        if self.trials.is_some_and(|t| t > 0) && self.seed.is_none() {
            return Err(CliError::Usage(
                "config with trials > 0 must also set seed".into(),
            ));
        }
        let positive = [
            ("sep_min", self.sep_min),
            ("tolerances.verify", self.tolerances.verify),
            ("tolerances.pole_eps", self.tolerances.pole_eps),
            ("tolerances.fd_step", self.tolerances.fd_step),
        ];
        for (name, value) in positive {
            if value.is_some_and(|v| !(v > 0.0 && v.is_finite())) {
                return Err(CliError::Usage(format!("config {name} must be positive")));
            }
        }
        Ok(())
    }

    fn coefficients_for(&self, order: u8) -> Result<Vec<Complex>, CliError> {
        match (self.order, &self.coefficients) {
            (Some(o), Some(coeffs)) if o == order => Ok(coeffs
                .iter()
                .map(|[re, im]| Complex::new(*re, *im))
                .collect()),
            (Some(o), Some(_)) => Err(CliError::Usage(format!(
                "this command needs an order-{order} problem but the config has order {o}"
            ))),
            _ => Err(CliError::Usage(format!(
                "no coefficients: pass --{} or a config with order {order}",
                if order == 2 { "quadratic" } else { "cubic" }
            ))),
        }
    }

    pub fn quadratic(&self) -> Result<QuadraticCoefficients, CliError> {
        let c = self.coefficients_for(2)?;
        Ok(QuadraticCoefficients::new(c[0], c[1]))
    }

    pub fn cubic(&self) -> Result<CubicCoefficients, CliError> {
        let c = self.coefficients_for(3)?;
        Ok(CubicCoefficients::new(c[0], c[1], c[2]))
    }
}
