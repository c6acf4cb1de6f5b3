//! Implementation of the `halfway` command-line tool.
//!
//! Subcommands:
//!
//! * `density` — tabulate the halfway density, CDF or quantiles;
//! * `sample` — draw reproducible samples (exact or path simulation),
//!   writing a CSV of values and a JSON metadata sidecar;
//! * `simulate` — alias for `sample --method path`;
//! * `validate` — run the check suite against the analytic laws and
//!   emit a JSON [`report::ValidationReport`].
//!
//! Exit codes: 0 success, 1 validation failure (or a sample run that
//! censored every path), 2 usage errors.

pub mod checks;
pub mod cli;
pub mod commands;
pub mod grid;
pub mod output;
pub mod report;

/// Error carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or arguments: exit 2.
    Usage(String),
    /// The command ran but failed (validation of sampling): exit 1.
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }
}

impl From<halfway::Error> for CliError {
    fn from(e: halfway::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(format!("io error: {e}"))
    }
}
