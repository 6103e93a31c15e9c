use std::path::Path;

use beamwave::timesteppers::{benchmark, BenchScenario};
use serde::Serialize;

use crate::config::{self, FileConfig, DEFAULT_GRID};
use crate::output::{write_json, write_records};
use crate::CliError;

#[derive(Debug, Serialize)]
struct SummaryRow {
    formulation: &'static str,
    #[serde(rename = "N")]
    n: usize,
    dt: f64,
    error: Option<f64>,
    wall_ms: f64,
    stable: bool,
}

pub fn run(cfg: &FileConfig, out: &Path) -> Result<(), CliError> {
    let p = cfg.params()?;
    let length = cfg.grid.length.unwrap_or(DEFAULT_GRID.0);
    config::positive("L", length)?;
    let sizes = cfg.bench_sizes()?;
    let policy = cfg.policy()?;
    match cfg.bench.scenario {
        BenchScenario::Random { kmax_fraction, .. } => config::check_fraction("kmax_fraction", kmax_fraction)?,
        BenchScenario::SingleMode { mode, .. } => {
            if let Some(&n) = sizes.iter().find(|&&n| mode.unsigned_abs() as usize >= n / 2) {
                return Err(CliError::config("mode", format!("|mode| must stay below N/2 = {}", n / 2)));
            }
        }
        BenchScenario::Zero => {}
    }
    let out = config::out_dir(out)?;

    let report = benchmark(&cfg.bench.scenario, length, &sizes, &policy, &p)?;
    let rows: Vec<SummaryRow> = report
        .runs
        .iter()
        .map(|r| SummaryRow {
            formulation: r.formulation.name(),
            n: r.n,
            dt: r.dt,
            error: r.error,
            wall_ms: r.wall_ms,
            stable: r.stable,
        })
        .collect();
    write_json(&out.join("bench_report.json"), &report)?;
    write_records(&out.join("bench_summary.csv"), &rows)?;

    println!("{:<24} {:>6} {:>12} {:>12} {:>10}  stable", "formulation", "N", "dt", "error", "wall_ms");
    for r in &rows {
        let error = r.error.map(|e| format!("{e:.3e}")).unwrap_or_else(|| "-".into());
        println!("{:<24} {:>6} {:>12.4e} {:>12} {:>10.2}  {}", r.formulation, r.n, r.dt, error, r.wall_ms, r.stable);
    }
    for fit in &report.exponents {
        println!("dt* ~ N^{:.3} ({})", fit.exponent, fit.formulation.name());
    }
    Ok(())
}
