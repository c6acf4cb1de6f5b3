//! Argument definitions for the `halfway` binary.

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "halfway",
    version,
    about = "Distribution of Brownian motion observed at a fraction of its first hitting time of zero"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the halfway density, its CDF, or its quantiles.
    Density(DensityArgs),
    /// Draw samples and write them as CSV plus a JSON metadata sidecar.
    Sample(SampleArgs),
    /// Path-simulation sampling; identical to `sample --method path`.
    Simulate(SimulateArgs),
    /// Run the validation suite and emit a JSON report.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Exact,
    Path,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Time fraction u in (0, 1).
    #[arg(long)]
    pub u: f64,
    /// Start point x > 0.
    #[arg(long)]
    pub x: f64,
    /// Evaluation grid min:max:count[:lin|:log].
    #[arg(long, conflicts_with = "quantile")]
    pub y: Option<String>,
    /// Tabulate the CDF instead of the density.
    #[arg(long, requires = "y", conflicts_with = "quantile")]
    pub cdf: bool,
    /// Comma-separated probabilities; tabulate quantiles instead.
    #[arg(long, value_delimiter = ',')]
    pub quantile: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    #[command(flatten)]
    pub common: SampleCommon,
    #[command(flatten)]
    pub path: PathFlags,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: SampleCommon,
    #[command(flatten)]
    pub path: PathFlags,
}

#[derive(Debug, Args)]
pub struct SampleCommon {
    /// Time fraction u in (0, 1).
    #[arg(long)]
    pub u: f64,
    /// Start point x > 0.
    #[arg(long)]
    pub x: f64,
    /// Number of draws to attempt.
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub seed: u64,
    /// Number of independent streams the draws are split across.
    #[arg(long, default_value_t = 1)]
    pub streams: u64,
    /// Write the draws here as CSV (stdout when omitted).
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Write the JSON sidecar here (defaults to <out>.json when --out is
    /// given; omitted otherwise).
    #[arg(long)]
    pub meta: Option<std::path::PathBuf>,
}

#[derive(Debug, Args)]
pub struct PathFlags {
    /// Euler step size (path method).
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    /// Censoring horizon (path method); defaults to 1e6 * x^2.
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    /// Disable the Brownian-bridge crossing correction.
    #[arg(long = "no-bridge")]
    pub no_bridge: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Analytic and oracle-grid checks only (default).
    #[arg(long, conflicts_with = "full")]
    pub quick: bool,
    /// Add all sampler Kolmogorov-Smirnov runs.
    #[arg(long)]
    pub full: bool,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads for the check suite; never auto-detected.
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Write the JSON report here (stdout when omitted).
    #[arg(long)]
    pub report: Option<std::path::PathBuf>,
}
