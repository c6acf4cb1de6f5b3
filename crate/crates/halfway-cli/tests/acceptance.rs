//! Acceptance suite: every release criterion at its stated tolerance,
//! one pass/fail line per criterion. Criteria 1-11 run the same check
//! implementations the `validate` subcommand uses; criterion 12 runs the
//! installed binary twice and compares reports.

use std::process::Command;

use halfway_cli::checks;
use halfway_cli::report::{CheckRecord, ValidationReport};

const SEED: u64 = 42;

fn assert_check(criterion: &str, c: &CheckRecord) {
    println!(
        "{criterion}: {} observed {:.6e} threshold {:.3e} -> {}",
        c.name,
        c.observed,
        c.threshold,
        if c.pass { "PASS" } else { "FAIL" }
    );
    assert!(
        c.pass,
        "{criterion} failed: {} observed {:.6e} vs threshold {:.3e}",
        c.name, c.observed, c.threshold
    );
}

#[test]
fn c01_three_way_density_agreement() {
    let c = checks::check_three_way_agreement();
    assert_check("criterion 01", &c);
    println!(
        "criterion 01: runtime {:.2}s (limit 60s)",
        c.runtime_seconds
    );
    assert!(
        c.runtime_seconds <= 60.0,
        "grid took {:.1}s",
        c.runtime_seconds
    );
}

#[test]
fn c02_normalization() {
    assert_check("criterion 02", &checks::check_normalization());
}

#[test]
fn c03_scale_invariance() {
    assert_check("criterion 03", &checks::check_scale_invariance());
}

#[test]
fn c04_tail_law() {
    assert_check("criterion 04", &checks::check_tail_law());
}

#[test]
fn c05_hitting_time_sampler() {
    assert_check("criterion 05", &checks::check_hitting_sampler(SEED));
}

#[test]
fn c06_excursion_sampler() {
    assert_check("criterion 06", &checks::check_excursion_sampler(SEED));
}

#[test]
fn c07_exact_sampler_grid() {
    let c = checks::check_exact_sampler_grid(SEED);
    assert_check("criterion 07", &c);
    println!(
        "criterion 07: runtime {:.2}s (limit 300s)",
        c.runtime_seconds
    );
    assert!(
        c.runtime_seconds <= 300.0,
        "grid took {:.1}s",
        c.runtime_seconds
    );
}

#[test]
fn c08_path_simulator() {
    for c in checks::check_path_suite(SEED) {
        assert_check("criterion 08", &c);
    }
}

#[test]
fn c09_censoring_calibration() {
    assert_check("criterion 09", &checks::check_censoring(SEED));
}

#[test]
fn c10_cdf_quantile_roundtrip() {
    assert_check("criterion 10", &checks::check_cdf_quantile_roundtrip());
}

#[test]
fn c11_ks_p_value_sanity() {
    assert_check("criterion 11", &checks::check_ks_p_value());
}

#[test]
fn c12_validate_full_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for threads in ["2", "8"] {
        let path = dir.path().join(format!("report_t{threads}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_halfway"))
            .args([
                "validate",
                "--full",
                "--seed",
                "42",
                "--threads",
                threads,
                "--report",
            ])
            .arg(&path)
            .status()
            .expect("binary runs");
        assert!(
            status.success(),
            "validate --full failed with {threads} threads"
        );
        let text = std::fs::read_to_string(&path).unwrap();
        let report: ValidationReport = serde_json::from_str(&text).unwrap();
        assert!(report.overall_pass);
        reports.push(report.without_timing());
    }
    assert_eq!(
        reports[0], reports[1],
        "reports differ across thread counts (timing excluded)"
    );
    println!("criterion 12: two full validate runs identical across thread counts -> PASS");
}
