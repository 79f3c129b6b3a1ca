//! Command-line front end for `annulus-energy`.
//!
//! Every subcommand builds a [`Report`](output::Report) and an exit
//! [`Status`]; `main` only parses flags and prints.

pub mod args;
pub mod commands;
pub mod export;
pub mod output;
pub mod sweep;

use std::fmt;

use annulus_energy::{validate, AnnulusPair, Config, EnergyParams, Error};

pub use args::{Cli, Command, Format};
pub use commands::run;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    CheckFailed,
    Validation,
    Infeasible,
    Numerical,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::CheckFailed => 1,
            Status::Validation => 2,
            Status::Infeasible => 3,
            Status::Numerical => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(String),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Usage(_) => Status::Validation,
            CliError::Io(_) => Status::Numerical,
            CliError::Core(e) => classify(e),
        }
    }
}

/// Map a library error onto the exit status contract.
pub fn classify(e: &Error) -> Status {
    match e {
        Error::DegenerateAnnulus { .. }
        | Error::NonPositiveWeight { .. }
        | Error::NonFinite { .. }
        | Error::NearLambdaOne { .. }
        | Error::InvalidGrid(_) => Status::Validation,
        Error::Infeasible { .. } => Status::Infeasible,
        _ => Status::Numerical,
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "invalid arguments: {msg}"),
            CliError::Core(e) => e.fmt(f),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Validated parameters of a single-configuration run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub config: Config,
    pub n: usize,
    pub tol: f64,
    pub seed: u64,
    pub format: Format,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let p = &cli.params;
        let missing = |name: &str| CliError::Usage(format!("--{name} is required"));
        let r = p.r.ok_or_else(|| missing("r"))?;
        let big_r = p.big_r.ok_or_else(|| missing("R"))?;
        let lambda = p.lambda.ok_or_else(|| missing("lambda"))?;
        if p.n < 8 {
            return Err(CliError::Usage(format!(
                "--n must be at least 8, got {}",
                p.n
            )));
        }
        if !(p.tol > 0.0 && p.tol <= 1e-2) {
            return Err(CliError::Usage(format!(
                "--tol must lie in (0, 1e-2], got {}",
                p.tol
            )));
        }
        let config = validate(
            AnnulusPair::new(r, big_r),
            EnergyParams::new(p.a, p.b, lambda),
        )?;
        Ok(Self {
            command: cli.command.clone(),
            config,
            n: p.n,
            tol: p.tol,
            seed: p.seed,
            format: p.format.unwrap_or(Format::Json),
        })
    }
}
