//! The JSON validation report.

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// One executed check. `pass` reflects the accuracy comparison only;
/// `runtime_seconds` is informational and excluded from determinism
/// comparisons.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// Echo of the exact parameters the check ran with.
    pub params: String,
    pub observed: f64,
    pub threshold: f64,
    pub pass: bool,
    pub runtime_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub schema_version: u32,
    /// Tool version.
    pub version: String,
    pub seed: u64,
    /// "quick" or "full".
    pub mode: String,
    pub overall_pass: bool,
    pub checks: Vec<CheckRecord>,
}

impl ValidationReport {
    pub fn new(seed: u64, mode: &str, checks: Vec<CheckRecord>) -> Self {
        let overall_pass = checks.iter().all(|c| c.pass);
        Self {
            schema_version: SCHEMA_VERSION,
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            mode: mode.to_string(),
            overall_pass,
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The report with timing zeroed, for content comparisons.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for c in &mut r.checks {
            c.runtime_seconds = 0.0;
        }
        r
    }
}
