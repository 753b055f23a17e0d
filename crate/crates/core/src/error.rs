use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Two roots are closer than the configured separation, so formulas that
    /// divide by root differences are not usable.
    #[error("degenerate roots: minimum separation {separation:e} is below {sep_min:e}")]
    DegenerateRoots { separation: f64, sep_min: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// The requested value is unbounded (or numerically so) at this argument.
    #[error("near pole: {0}")]
    NearPole(String),

    /// A summation formula has a vanishing denominator; the result is the
    /// point at infinity.
    #[error("indeterminate: {0}")]
    Indeterminate(String),

    #[error("argument coincides with a root of the cubic: {0}")]
    AtSingularity(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("pole encountered at phi = {phi} (|u| = {magnitude:e})")]
    PoleEncountered { phi: f64, magnitude: f64 },

    #[error("step size underflow at phi = {phi} (h = {step:e})")]
    StepUnderflow { phi: f64, step: f64 },

    #[error("integration segment passes within {distance:e} of a root")]
    SegmentNearRoot { distance: f64 },
}

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numeric(&self) -> bool {
        !matches!(self, Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
