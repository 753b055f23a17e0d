mod args;
mod commands;
mod config;
mod errata;
mod output;
mod verify;

use std::process::ExitCode;

use clap::Parser;
use riccati_core::{Error, DEFAULT_SEP_MIN};

use args::{Cli, Command, OutputFormat};
use config::ProblemConfig;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, config or input values. Exit 2.
    Usage(String),
    /// A verification property failed. Exit 1.
    Verification(String),
    /// A numerical procedure failed (no convergence, pole, ...). Exit 3.
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verification(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numeric() {
            CliError::Numeric(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

/// Settings shared by every command after merging flags over the config file.
pub struct Context {
    pub config: ProblemConfig,
    pub out: Option<OutputFormat>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub sep_min: f64,
}

/// Command output plus an optional failure to report after it is written,
/// so partial paths still reach the user.
pub struct Report {
    pub text: String,
    pub failure: Option<CliError>,
}

impl Report {
    pub fn ok(text: String) -> Self {
        Self {
            text,
            failure: None,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config = match &cli.global.config {
        Some(path) => ProblemConfig::load(path)?,
        None => ProblemConfig::default(),
    };
    if cli.global.tol.is_some() && !matches!(cli.command, Command::Verify(_)) {
        return Err(CliError::Usage("--tol only applies to verify".into()));
    }
    let sep_min = commands::positive("sep-min", cli.global.sep_min.or(config.sep_min))?
        .unwrap_or(DEFAULT_SEP_MIN);
    let ctx = Context {
        out: cli.global.out,
        seed: cli.global.seed,
        tol: commands::positive("tol", cli.global.tol)?,
        sep_min,
        config,
    };
    let report = match &cli.command {
        Command::Roots(a) => commands::roots(&ctx, a)?,
        Command::G2(a) => commands::g2(&ctx, a)?,
        Command::G3(a) => commands::g3(&ctx, a)?,
        Command::Eval2(a) => commands::eval2(&ctx, a)?,
        Command::Eval3(a) => commands::eval3(&ctx, a)?,
        Command::Sum2(a) => commands::sum2(&ctx, a)?,
        Command::Sum3(a) => commands::sum3(&ctx, a)?,
        Command::Bridge(a) => commands::bridge(&ctx, a)?,
        Command::Verify(a) => verify::run(&ctx, a)?,
        Command::Errata => errata::run(&ctx)?,
    };
    output::emit(&report.text, cli.global.output.as_deref())?;
    match report.failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("riccati: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
