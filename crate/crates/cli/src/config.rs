//! TOML run configuration. Every section is optional; command-line flags are
//! applied on top of the file and the result is validated before any
//! computation starts.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use beamwave::timesteppers::{BenchScenario, DtPolicy};
use beamwave::{Grid, PhysParams};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Box used by the packet command and the gaussian simulate scenario.
pub const PACKET_GRID: (f64, usize) = (80.0, 2048);
/// Box used everywhere else.
pub const DEFAULT_GRID: (f64, usize) = (2.0 * PI, 256);

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub physics: PhysicsSection,
    #[serde(default)]
    pub simulate: SimulateSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub bench: BenchSection,
    #[serde(default)]
    pub packet: PacketSection,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicsSection {
    pub a: f64,
    pub b: f64,
}

impl Default for PhysicsSection {
    fn default() -> Self {
        Self { a: 1.0, b: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Gaussian,
    Mode,
    Random,
    Zero,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateSection {
    pub scenario: ScenarioKind,
    pub times: Vec<f64>,
    pub seed: u64,
    pub kmax_fraction: f64,
    pub mode: i64,
    pub amplitude: f64,
    /// Packet center; `L/2` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    pub width: f64,
    pub wavenumber: f64,
    pub fields: Vec<String>,
    /// Step of the centered balance residuals; `1e-4·(a/b)·Δx²` when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt_fd: Option<f64>,
}

impl Default for SimulateSection {
    fn default() -> Self {
        Self {
            scenario: ScenarioKind::Gaussian,
            times: vec![0.0, 1.0, 2.0],
            seed: 1,
            kmax_fraction: 0.25,
            mode: 1,
            amplitude: 1.0,
            center: None,
            width: 1.0,
            wavenumber: 0.0,
            fields: SNAPSHOT_FIELDS.iter().map(|s| s.to_string()).collect(),
            dt_fd: None,
        }
    }
}

pub const SNAPSHOT_FIELDS: [&str; 8] = ["gamma", "v", "psi_re", "psi_im", "energy", "flux", "rho", "current"];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    pub seeds: Vec<u64>,
    pub times: Vec<f64>,
    pub kmax_fraction: f64,
    /// Overrides every property tolerance when present.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl Default for VerifySection {
    fn default() -> Self {
        Self { seeds: (1..=20).collect(), times: vec![0.1, 1.0, 5.0], kmax_fraction: 0.25, tol: None }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BenchSection {
    pub sizes: Vec<i64>,
    pub scenario: BenchScenario,
    pub safety: f64,
    pub t_final: f64,
    pub probe_steps: usize,
    pub rel_accuracy: f64,
}

impl Default for BenchSection {
    fn default() -> Self {
        let policy = DtPolicy::default();
        Self {
            sizes: vec![128, 256, 512, 1024],
            scenario: BenchScenario::Random { seed: 1, kmax_fraction: 0.25 },
            safety: policy.safety,
            t_final: policy.t_final,
            probe_steps: policy.probe_steps,
            rel_accuracy: policy.rel_accuracy,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PacketSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    pub width: f64,
    pub wavenumber: f64,
    pub times: Vec<f64>,
}

impl Default for PacketSection {
    fn default() -> Self {
        Self { center: None, width: 1.0, wavenumber: 0.0, times: vec![0.0, 0.5, 1.0, 2.0] }
    }
}

/// Values given on the command line; `None` leaves the file value alone.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub grid_n: Option<i64>,
    pub grid_l: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub times: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub sizes: Option<Vec<i64>>,
    pub scenario: Option<ScenarioKind>,
}

pub fn load(path: Option<&Path>) -> Result<FileConfig, CliError> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config("config", format!("cannot read {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::config("config", format!("{}: {}", path.display(), e.message())))
}

impl FileConfig {
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(n) = o.grid_n {
            self.grid.n = Some(n);
        }
        if let Some(l) = o.grid_l {
            self.grid.length = Some(l);
        }
        if let Some(a) = o.a {
            self.physics.a = a;
        }
        if let Some(b) = o.b {
            self.physics.b = b;
        }
        if let Some(seed) = o.seed {
            self.simulate.seed = seed;
            self.verify.seeds = vec![seed];
            if let BenchScenario::Random { kmax_fraction, .. } = self.bench.scenario {
                self.bench.scenario = BenchScenario::Random { seed, kmax_fraction };
            }
        }
        if let Some(times) = &o.times {
            self.simulate.times = times.clone();
            self.verify.times = times.clone();
            self.packet.times = times.clone();
        }
        if let Some(tol) = o.tol {
            self.verify.tol = Some(tol);
        }
        if let Some(sizes) = &o.sizes {
            self.bench.sizes = sizes.clone();
        }
        if let Some(kind) = o.scenario {
            self.simulate.scenario = kind;
        }
    }

    pub fn params(&self) -> Result<PhysParams, CliError> {
        for (name, value) in [("a", self.physics.a), ("b", self.physics.b)] {
            positive(name, value)?;
        }
        PhysParams::new(self.physics.a, self.physics.b).map_err(|e| CliError::config("physics", e.to_string()))
    }

    /// The grid, falling back to `default` for missing entries.
    pub fn grid(&self, default: (f64, usize)) -> Result<Grid, CliError> {
        let length = self.grid.length.unwrap_or(default.0);
        positive("L", length)?;
        let n = self.grid.n.unwrap_or(default.1 as i64);
        grid_size(n)?;
        Grid::new(length, n as usize).map_err(|e| CliError::config("N", e.to_string()))
    }

    pub fn policy(&self) -> Result<DtPolicy, CliError> {
        positive("safety", self.bench.safety)?;
        non_negative("t_final", self.bench.t_final)?;
        if self.bench.probe_steps == 0 {
            return Err(CliError::config("probe_steps", "must be at least 1".into()));
        }
        if !(self.bench.rel_accuracy > 0.0 && self.bench.rel_accuracy < 1.0) {
            return Err(CliError::config("rel_accuracy", "must lie in (0, 1)".into()));
        }
        Ok(DtPolicy {
            safety: self.bench.safety,
            t_final: self.bench.t_final,
            probe_steps: self.bench.probe_steps,
            rel_accuracy: self.bench.rel_accuracy,
        })
    }

    pub fn bench_sizes(&self) -> Result<Vec<usize>, CliError> {
        if self.bench.sizes.is_empty() {
            return Err(CliError::config("sizes", "the list of grid sizes N is empty".into()));
        }
        self.bench.sizes.iter().map(|&n| grid_size(n).map(|_| n as usize)).collect()
    }
}

pub fn positive(field: &str, value: f64) -> Result<(), CliError> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be positive and finite, got {value}")))
    }
}

pub fn non_negative(field: &str, value: f64) -> Result<(), CliError> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must be non-negative and finite, got {value}")))
    }
}

fn grid_size(n: i64) -> Result<(), CliError> {
    if n >= 4 && n % 2 == 0 {
        Ok(())
    } else {
        Err(CliError::config("N", format!("must be even and at least 4, got {n}")))
    }
}

pub fn check_times(field: &str, times: &[f64]) -> Result<(), CliError> {
    if times.is_empty() {
        return Err(CliError::config(field, "at least one sample time is required".into()));
    }
    match times.iter().find(|t| !t.is_finite()) {
        Some(t) => Err(CliError::config(field, format!("non-finite sample time {t}"))),
        None => Ok(()),
    }
}

pub fn check_fraction(field: &str, value: f64) -> Result<(), CliError> {
    if value > 0.0 && value <= 0.5 {
        Ok(())
    } else {
        Err(CliError::config(field, format!("must lie in (0, 0.5], got {value}")))
    }
}

/// Output directory, created on demand.
pub fn out_dir(path: &Path) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(path)
        .map_err(|e| CliError::config("out", format!("cannot create {}: {e}", path.display())))?;
    Ok(path.to_path_buf())
}
