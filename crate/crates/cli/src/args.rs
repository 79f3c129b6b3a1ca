use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "annulus-energy",
    version,
    about = "Extremal radial maps between annuli: feasibility, solving, energies and verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub params: ParamArgs,
}

/// Configuration shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Outer radius of the domain annulus
    #[arg(long, global = true)]
    pub r: Option<f64>,
    /// Outer radius of the target annulus
    #[arg(long = "R", global = true)]
    pub big_r: Option<f64>,
    /// Normal weight
    #[arg(long, global = true, default_value_t = 1.0)]
    pub a: f64,
    /// Tangential weight
    #[arg(long, global = true, default_value_t = 1.0)]
    pub b: f64,
    /// Exponent of the modulus weight
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    /// Oracle grid size, or number of exported samples
    #[arg(long, global = true, default_value_t = 513)]
    pub n: usize,
    /// Relative tolerance of the alpha solver
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// Seed of the perturbation generator
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// Output format (sweep defaults to csv, everything else to json)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, PartialEq, Subcommand)]
pub enum Command {
    /// Test r against the feasibility bound
    Check,
    /// Solve for alpha and report the endpoint error
    Solve,
    /// Closed-form and quadrature energies of the extremal map
    Energy,
    /// Residual, conservation, shooting and duality checks
    Verify,
    /// Brute-force minimization and random perturbations
    Oracle(OracleArgs),
    /// Evaluate a grid or a JSON Lines file of configurations
    Sweep(SweepArgs),
    /// Write the sampled profile or a shot trajectory as CSV
    Export(ExportArgs),
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct OracleArgs {
    /// Number of random perturbations
    #[arg(long, default_value_t = 100)]
    pub perturbations: usize,
    /// Perturbation amplitude relative to R - 1
    #[arg(long, default_value_t = 1e-3)]
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct SweepArgs {
    /// JSON Lines file, one object with r, R, a, b, lambda per line
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Domain radii of the grid
    #[arg(long = "r-values", value_delimiter = ',')]
    pub r_values: Vec<f64>,
    /// Target radii of the grid
    #[arg(long = "R-values", value_delimiter = ',')]
    pub big_r_values: Vec<f64>,
    /// Normal weights of the grid
    #[arg(long = "a-values", value_delimiter = ',')]
    pub a_values: Vec<f64>,
    /// Tangential weights of the grid
    #[arg(long = "b-values", value_delimiter = ',')]
    pub b_values: Vec<f64>,
    /// Exponents of the grid
    #[arg(
        long = "lambda-values",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub lambda_values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportKind {
    /// Columns t, H, Hdot on a log-spaced grid
    Profile,
    /// Columns x, y, zeta, omega of the shot trajectory
    Trajectory,
}

#[derive(Debug, Clone, PartialEq, Args)]
pub struct ExportArgs {
    #[arg(long, value_enum, default_value_t = ExportKind::Profile)]
    pub kind: ExportKind,
    /// Destination file; stdout when omitted
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}
