//! Command implementations.

use std::io::Write;
use std::path::{Path, PathBuf};

use halfway::analytic::{halfway_cdf, halfway_density, halfway_quantile, HalfwayParams};
use halfway::samplers::{default_t_max, sample_batch, PathConfig, SampleMethod};
use serde::Serialize;

use crate::cli::{Cli, Command, DensityArgs, Method, OutputFormat, PathFlags, SampleCommon};
use crate::grid::GridSpec;
use crate::output::{csv_table, json_table};
use crate::report::ValidationReport;
use crate::{checks, CliError};

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Density(args) => cmd_density(args),
        Command::Sample(args) => cmd_sample(args.method, &args.common, &args.path),
        Command::Simulate(args) => cmd_sample(Method::Path, &args.common, &args.path),
        Command::Validate(args) => cmd_validate(args),
    }
}

fn cmd_density(args: DensityArgs) -> Result<(), CliError> {
    let params = HalfwayParams::new(args.x, args.u)?;

    let (header, rows): (Vec<&str>, Vec<Vec<f64>>) = if let Some(qs) = &args.quantile {
        let mut rows = Vec::with_capacity(qs.len());
        for &q in qs {
            rows.push(vec![q, halfway_quantile(&params, q)?]);
        }
        (vec!["q", "quantile"], rows)
    } else {
        let spec = args
            .y
            .as_deref()
            .ok_or_else(|| CliError::Usage("either --y or --quantile is required".to_string()))?;
        let grid = GridSpec::parse(spec).map_err(CliError::Usage)?;
        let mut rows = Vec::with_capacity(grid.count);
        for y in grid.points() {
            let value = if args.cdf {
                halfway_cdf(&params, y)?
            } else {
                halfway_density(&params, y)?.value()
            };
            rows.push(vec![y, value]);
        }
        (vec!["y", if args.cdf { "cdf" } else { "p" }], rows)
    };

    let text = match args.format {
        OutputFormat::Csv => csv_table(&header, &rows),
        OutputFormat::Json => json_table(&header, &rows),
    };
    print!("{text}");
    Ok(())
}

#[derive(Debug, Serialize)]
struct SampleMeta {
    schema_version: u32,
    version: String,
    u: f64,
    x: f64,
    method: String,
    n_requested: u64,
    n_censored: u64,
    seed: u64,
    streams: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    dt: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bridge_correction: Option<bool>,
}

fn cmd_sample(method: Method, common: &SampleCommon, path: &PathFlags) -> Result<(), CliError> {
    let params = HalfwayParams::new(common.x, common.u)?;

    let sample_method = match method {
        Method::Exact => SampleMethod::Exact,
        Method::Path => {
            let t_max = path.t_max.unwrap_or_else(|| default_t_max(common.x));
            let config = PathConfig::new(path.dt, t_max)?.with_bridge_correction(!path.no_bridge);
            SampleMethod::Path(config)
        }
    };

    let batch = sample_batch(
        &params,
        common.n,
        &sample_method,
        common.seed,
        common.streams,
    )?;
    if batch.values.is_empty() {
        return Err(CliError::Failure(format!(
            "all {} draws were censored at the configured horizon; nothing to write",
            batch.n_requested
        )));
    }

    let rows: Vec<Vec<f64>> = batch.values.iter().map(|v| vec![*v]).collect();
    let csv = csv_table(&["value"], &rows);
    match &common.out {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }

    let meta = SampleMeta {
        schema_version: crate::report::SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION").to_string(),
        u: common.u,
        x: common.x,
        method: match method {
            Method::Exact => "exact".to_string(),
            Method::Path => "path".to_string(),
        },
        n_requested: batch.n_requested,
        n_censored: batch.n_censored,
        seed: batch.seed,
        streams: batch.n_streams,
        dt: match &sample_method {
            SampleMethod::Path(c) => Some(c.dt()),
            SampleMethod::Exact => None,
        },
        t_max: match &sample_method {
            SampleMethod::Path(c) => Some(c.t_max()),
            SampleMethod::Exact => None,
        },
        bridge_correction: match &sample_method {
            SampleMethod::Path(c) => Some(c.bridge_correction()),
            SampleMethod::Exact => None,
        },
    };
    let meta_json = serde_json::to_string_pretty(&meta).expect("metadata serializes");

    match (&common.meta, &common.out) {
        (Some(meta_path), _) => write_file(meta_path, &meta_json)?,
        (None, Some(out_path)) => write_file(&default_meta_path(out_path), &meta_json)?,
        (None, None) => {}
    }
    Ok(())
}

/// Sidecar path when only --out was given: the output path with a json
/// extension, or `.meta.json` appended if that would collide.
fn default_meta_path(out: &Path) -> PathBuf {
    let candidate = out.with_extension("json");
    if candidate == out {
        let mut s = out.as_os_str().to_owned();
        s.push(".meta.json");
        PathBuf::from(s)
    } else {
        candidate
    }
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", path.display())))?;
    f.write_all(content.as_bytes())?;
    Ok(())
}

fn cmd_validate(args: crate::cli::ValidateArgs) -> Result<(), CliError> {
    if args.threads == 0 {
        return Err(CliError::Usage("--threads must be at least 1".to_string()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?;

    let mode = if args.full { "full" } else { "quick" };
    let mut progress = |c: &crate::report::CheckRecord| {
        eprintln!(
            "{:32} observed {:>13.6e}  threshold {:>9.3e}  {}  ({:.2}s)",
            c.name,
            c.observed,
            c.threshold,
            if c.pass { "PASS" } else { "FAIL" },
            c.runtime_seconds
        );
    };
    let records = pool.install(|| {
        if args.full {
            checks::run_full(args.seed, &mut progress)
        } else {
            checks::run_quick(&mut progress)
        }
    });

    let report = ValidationReport::new(args.seed, mode, records);
    let json = report.to_json();
    match &args.report {
        Some(path) => write_file(path, &json)?,
        None => println!("{json}"),
    }

    if report.overall_pass {
        Ok(())
    } else {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        Err(CliError::Failure(format!(
            "validation failed: {}",
            failed.join(", ")
        )))
    }
}
