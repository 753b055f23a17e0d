use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "riccati",
    version,
    about = "Closed forms, summation laws and verification for the Riccati and Riccati-Abel equations"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON problem configuration (order, coefficients, tolerances, seed).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output format. Scalar commands default to json, grids and paths to csv.
    #[arg(long, global = true, value_enum)]
    pub out: Option<OutputFormat>,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// RNG seed for `verify`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Pass/fail tolerance applied to every `verify` property.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Minimum root separation for the spectral formulas.
    #[arg(long, global = true)]
    pub sep_min: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Roots, root differences and Vandermonde determinant.
    Roots(PolyArgs),
    /// Order-2 g-functions (g0, g1) at a phase.
    G2(G2Args),
    /// Order-3 g-functions (g0, g1, g2) at a phase point.
    G3(G3Args),
    /// Riccati solution along a phase grid.
    Eval2(Eval2Args),
    /// Riccati-Abel solution along a phase grid by log-map continuation.
    Eval3(Eval3Args),
    /// Riccati summation w = (uv - a0)/(u + v - a1).
    Sum2(Sum2Args),
    /// Pair summation of two quadratic pairs modulo the cubic.
    Sum3(Sum3Args),
    /// Riccati-Abel solution tracked along the constraint curve g2 = 0.
    Bridge(BridgeArgs),
    /// Seeded property suites; exit 1 if any property fails.
    Verify(VerifyArgs),
    /// Printed versus corrected formulas, with the checks that decide them.
    Errata,
}

#[derive(Debug, Args)]
pub struct QuadraticArg {
    /// Quadratic coefficients a1 a0 of u' = u^2 - a1 u + a0, each `re,im`.
    #[arg(long, num_args = 2, value_names = ["A1", "A0"], allow_hyphen_values = true)]
    pub quadratic: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct CubicArg {
    /// Cubic coefficients a2 a1 a0 of u' = u^3 - a2 u^2 + a1 u - a0, each `re,im`.
    #[arg(long, num_args = 3, value_names = ["A2", "A1", "A0"], allow_hyphen_values = true)]
    pub cubic: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[command(flatten)]
    pub quadratic: QuadraticArg,
    #[command(flatten)]
    pub cubic: CubicArg,
}

#[derive(Debug, Args)]
pub struct G2Args {
    #[command(flatten)]
    pub quadratic: QuadraticArg,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: String,
}

#[derive(Debug, Args)]
pub struct G3Args {
    #[command(flatten)]
    pub cubic: CubicArg,
    #[arg(long, allow_hyphen_values = true)]
    pub phi1: String,
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub phi2: String,
}

#[derive(Debug, Args)]
pub struct Eval2Args {
    #[command(flatten)]
    pub quadratic: QuadraticArg,
    /// First grid phase.
    #[arg(long, allow_hyphen_values = true)]
    pub from: String,
    /// Last grid phase.
    #[arg(long, allow_hyphen_values = true)]
    pub to: String,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Evaluate the family through phase phi0 instead of the canonical branch.
    #[arg(long, allow_hyphen_values = true)]
    pub phi0: Option<String>,
    /// Distance to a pole reported as near_pole.
    #[arg(long)]
    pub pole_eps: Option<f64>,
}

#[derive(Debug, Args)]
pub struct Eval3Args {
    #[command(flatten)]
    pub cubic: CubicArg,
    /// Solution value at the anchor phase F(u0)/V.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub u0: String,
    /// First grid phase, as an offset from the anchor phase.
    #[arg(long, allow_hyphen_values = true, default_value = "0")]
    pub from: String,
    /// Last grid phase, as an offset from the anchor phase.
    #[arg(long, allow_hyphen_values = true, default_value = "-0.5")]
    pub to: String,
    #[arg(long, default_value_t = 51)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct Sum2Args {
    #[command(flatten)]
    pub quadratic: QuadraticArg,
    #[arg(long, allow_hyphen_values = true)]
    pub u: String,
    #[arg(long, allow_hyphen_values = true)]
    pub v: String,
}

#[derive(Debug, Args)]
pub struct Sum3Args {
    #[command(flatten)]
    pub cubic: CubicArg,
    /// A pair `t s` for x^2 + t x + s; give exactly two.
    #[arg(
        long,
        num_args = 2,
        value_names = ["T", "S"],
        allow_hyphen_values = true,
        action = clap::ArgAction::Append
    )]
    pub pair: Vec<String>,
}

#[derive(Debug, Args)]
pub struct BridgeArgs {
    #[command(flatten)]
    pub cubic: CubicArg,
    /// Nonzero phi1 at which the path starts.
    #[arg(long, allow_hyphen_values = true, default_value = "0.5")]
    pub phi1_start: String,
    /// Increment in phi2 per step (at most 0.05 in modulus).
    #[arg(long, allow_hyphen_values = true, default_value = "-0.01")]
    pub step: String,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    /// Central-difference step for the ode_residual column.
    #[arg(long)]
    pub fd_step: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Polynomial,
    Order2,
    Order3,
    Abel,
    Oracle,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    /// Random draws per property.
    #[arg(long)]
    pub trials: Option<usize>,
}
