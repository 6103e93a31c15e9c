//! `beamwave` command-line tool.
//!
//! Exit codes: 0 success, 1 property failure, 2 configuration error,
//! 3 numerical precondition failure.

mod bench;
mod config;
mod output;
mod packet;
mod simulate;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Overrides, ScenarioKind};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("numerical precondition failed: {0}")]
    Numerical(#[from] beamwave::Error),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0} properties failed")]
    PropertyFailure(usize),
}

impl CliError {
    pub fn config(field: &str, message: String) -> Self {
        CliError::Config { field: field.to_string(), message }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::PropertyFailure(_) => 1,
            CliError::Config { .. } | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(std::io::Error::other(e))
    }
}

const AFTER_HELP: &str = "\
Configuration file (TOML, every key optional; flags override it):
  [grid]     L = 2π, N = 256 (packet command and gaussian scenario: L = 80, N = 2048)
  [physics]  a = 1.0, b = 1.0
  [simulate] scenario = \"gaussian\" | \"mode\" | \"random\" | \"zero\", times = [0, 1, 2],
             seed = 1, kmax_fraction = 0.25, mode = 1, amplitude = 1.0,
             center = L/2, width = 1.0, wavenumber = 0.0,
             fields = [gamma, v, psi_re, psi_im, energy, flux, rho, current],
             dt_fd = 1e-4·(a/b)·Δx²
  [verify]   seeds = [1..20], times = [0.1, 1, 5], kmax_fraction = 0.25, tol = per property
  [bench]    sizes = [128, 256, 512, 1024], safety = 0.5, t_final = 0.01,
             probe_steps = 2000, rel_accuracy = 0.05,
             [bench.scenario] kind = \"random\" (seed = 1, kmax_fraction = 0.25) | \"single_mode\" | \"zero\"
  [packet]   center = L/2, width = 1.0, wavenumber = 0.0, times = [0, 0.5, 1, 2]

Use --dump-config to print the fully resolved configuration.

Exit codes: 0 success, 1 property failure, 2 config error, 3 numerical precondition failure.";

#[derive(Debug, Parser)]
#[command(name = "beamwave", version, about = "Beam/Schrödinger duality toolkit", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// TOML configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,
    /// Seed for random data; restricts verify to this single seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Number of grid points N (even, at least 4).
    #[arg(long = "grid-n", global = true, allow_negative_numbers = true)]
    grid_n: Option<i64>,
    /// Box length L.
    #[arg(long = "grid-l", global = true, allow_negative_numbers = true)]
    grid_l: Option<f64>,
    /// Coefficient a.
    #[arg(long, global = true, allow_negative_numbers = true)]
    a: Option<f64>,
    /// Coefficient b.
    #[arg(long, global = true, allow_negative_numbers = true)]
    b: Option<f64>,
    /// Comma-separated sample times.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    times: Option<Vec<f64>>,
    /// Tolerance applied to every verify property.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Print the resolved configuration as TOML and exit.
    #[arg(long, global = true)]
    dump_config: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Propagate a scenario exactly and write diagnostics and snapshots.
    Simulate {
        #[arg(long, value_enum)]
        scenario: Option<ScenarioArg>,
    },
    /// Run the duality and energetics property suite.
    Verify {
        /// Flip the sign in ψ = bγ - iav (mutation test).
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
    /// Benchmark RK4 on both formulations.
    Bench {
        /// Comma-separated grid sizes.
        #[arg(long, num_args = 0..=1, value_delimiter = ',', default_missing_value = "")]
        sizes: Option<Vec<String>>,
    },
    /// Measure Gaussian packet spreading.
    Packet,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
enum ScenarioArg {
    Gaussian,
    Mode,
    Random,
    Zero,
}

fn parse_sizes(raw: &[String]) -> Result<Vec<i64>, CliError> {
    raw.iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse().map_err(|_| CliError::config("sizes", format!("`{s}` is not an integer"))))
        .collect()
}

fn run(cli: Cli) -> Result<(), CliError> {
    let c = cli.common;
    let mut overrides = Overrides {
        seed: c.seed,
        grid_n: c.grid_n,
        grid_l: c.grid_l,
        a: c.a,
        b: c.b,
        times: c.times,
        tol: c.tol,
        ..Overrides::default()
    };
    match &cli.command {
        Command::Simulate { scenario: Some(s) } => {
            overrides.scenario = Some(match s {
                ScenarioArg::Gaussian => ScenarioKind::Gaussian,
                ScenarioArg::Mode => ScenarioKind::Mode,
                ScenarioArg::Random => ScenarioKind::Random,
                ScenarioArg::Zero => ScenarioKind::Zero,
            })
        }
        Command::Bench { sizes: Some(raw) } => overrides.sizes = Some(parse_sizes(raw)?),
        _ => {}
    }
    let mut cfg = config::load(c.config.as_deref())?;
    cfg.apply(&overrides);
    if c.dump_config {
        let text = toml::to_string(&cfg).map_err(|e| CliError::config("config", e.to_string()))?;
        print!("{text}");
        return Ok(());
    }
    match cli.command {
        Command::Simulate { .. } => simulate::run(&cfg, &c.out),
        Command::Verify { inject_fault } => verify::run(&cfg, &c.out, inject_fault),
        Command::Bench { .. } => bench::run(&cfg, &c.out),
        Command::Packet => packet::run(&cfg, &c.out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
