use std::path::Path;

use beamwave::energetics::{
    balance_terms, default_fd_step, duality_gap, normalization_constant, total_energy, BalanceLaw, BeamTrajectory,
    EnergyFields, ProbabilityFields, Trajectory, WaveTrajectory,
};
use beamwave::fields::integrate;
use beamwave::scenarios::{gaussian_packet, random_band_limited, single_mode, PacketSpec};
use beamwave::{BeamState, Error, Field, Grid, PhysParams};
use serde::Serialize;

use crate::config::{self, FileConfig, ScenarioKind, DEFAULT_GRID, PACKET_GRID, SNAPSHOT_FIELDS};
use crate::output::{write_csv, write_jsonl};
use crate::CliError;

pub const RECORD_SCHEMA: &str = "beamwave.record/1";

#[derive(Debug, Serialize)]
pub struct ResultRecord {
    pub schema: &'static str,
    pub time: f64,
    pub total_energy: f64,
    pub integral_rho: f64,
    /// `1/∫|ψ(t)|²`, recomputed at this time; 0 for zero data.
    pub lambda: f64,
    pub duality_gap: f64,
    pub energy_residual: f64,
    pub probability_residual: f64,
    pub snapshot: String,
}

fn trajectory(cfg: &FileConfig, grid: &Grid, p: &PhysParams) -> Result<Box<dyn Trajectory>, CliError> {
    let s = &cfg.simulate;
    Ok(match s.scenario {
        ScenarioKind::Gaussian => {
            config::positive("width", s.width)?;
            let spec = PacketSpec::new(s.center.unwrap_or(grid.length() / 2.0), s.width, s.wavenumber)
                .map_err(|e| CliError::config("packet", e.to_string()))?;
            let horizon = s.times.iter().fold(0.0f64, |m, t| m.max(t.abs()));
            spec.check_fits(grid, p, horizon)?;
            Box::new(WaveTrajectory::new(gaussian_packet(&spec, grid)?, *p))
        }
        ScenarioKind::Mode => {
            if s.mode.unsigned_abs() as usize >= grid.len() / 2 {
                return Err(CliError::config("mode", format!("|mode| must stay below N/2 = {}", grid.len() / 2)));
            }
            Box::new(BeamTrajectory::new(single_mode(grid, s.mode, s.amplitude)?, *p))
        }
        ScenarioKind::Random => {
            config::check_fraction("kmax_fraction", s.kmax_fraction)?;
            Box::new(BeamTrajectory::new(random_band_limited(s.seed, s.kmax_fraction, grid, false)?, *p))
        }
        ScenarioKind::Zero => Box::new(BeamTrajectory::new(BeamState::zeros(grid), *p)),
    })
}

pub fn run(cfg: &FileConfig, out: &Path) -> Result<(), CliError> {
    let s = &cfg.simulate;
    let p = cfg.params()?;
    let default = if s.scenario == ScenarioKind::Gaussian { PACKET_GRID } else { DEFAULT_GRID };
    let grid = cfg.grid(default)?;
    config::check_times("times", &s.times)?;
    if let Some(bad) = s.fields.iter().find(|f| !SNAPSHOT_FIELDS.contains(&f.as_str())) {
        return Err(CliError::config("fields", format!("unknown field `{bad}`, expected one of {SNAPSHOT_FIELDS:?}")));
    }
    let dt_fd = match s.dt_fd {
        Some(h) => {
            config::positive("dt_fd", h)?;
            h
        }
        None => default_fd_step(&grid, &p),
    };
    let traj = trajectory(cfg, &grid, &p)?;
    let out = config::out_dir(out)?;

    let lambda0 = match normalization_constant(&traj.wavefunction_at(0.0)) {
        Ok(l) => l,
        Err(Error::ZeroWaveFunction) => 0.0,
        Err(e) => return Err(e.into()),
    };
    let mut records = Vec::with_capacity(s.times.len());
    for (i, &t) in s.times.iter().enumerate() {
        let strain = traj.strain_at(t);
        let psi = traj.wavefunction_at(t);
        let energy = EnergyFields::new(&strain, &p);
        let prob = ProbabilityFields::new(&psi, lambda0, &p);
        let lambda = match normalization_constant(&psi) {
            Ok(l) => l,
            Err(Error::ZeroWaveFunction) => 0.0,
            Err(e) => return Err(e.into()),
        };
        let energy_residual = balance_terms(traj.as_ref(), t, dt_fd, BalanceLaw::Energy, &p)?.residual.max_abs();
        let probability_residual =
            balance_terms(traj.as_ref(), t, dt_fd, BalanceLaw::Probability { lambda: lambda0 }, &p)?.residual.max_abs();

        let name = format!("snapshot_{i:03}.csv");
        let columns: Vec<Vec<f64>> = s
            .fields
            .iter()
            .map(|f| match f.as_str() {
                "gamma" => strain.gamma.values().to_vec(),
                "v" => strain.v.values().to_vec(),
                "psi_re" => psi.re().into_values(),
                "psi_im" => psi.im().into_values(),
                "energy" => energy.density.values().to_vec(),
                "flux" => energy.flux.values().to_vec(),
                "rho" => prob.density.values().to_vec(),
                _ => prob.current.values().to_vec(),
            })
            .collect();
        let rows: Vec<Vec<f64>> = grid
            .points()
            .into_iter()
            .enumerate()
            .map(|(j, x)| std::iter::once(x).chain(columns.iter().map(|c| c[j])).collect())
            .collect();
        let header: Vec<&str> = std::iter::once("x").chain(s.fields.iter().map(String::as_str)).collect();
        write_csv(&out.join(&name), &header, &rows)?;

        records.push(ResultRecord {
            schema: RECORD_SCHEMA,
            time: t,
            total_energy: total_energy(&strain, &p),
            integral_rho: integrate(&prob.density),
            lambda,
            duality_gap: duality_gap(&strain, &psi, lambda0, &p)?,
            energy_residual,
            probability_residual,
            snapshot: name,
        });
    }
    write_jsonl(&out.join("records.jsonl"), &records)?;
    for r in &records {
        println!("t = {:<8} E = {:<24e} ∫ρ = {:<24} gap = {:e}", r.time, r.total_energy, r.integral_rho, r.duality_gap);
    }
    println!("wrote {} records to {}", records.len(), out.join("records.jsonl").display());
    Ok(())
}
