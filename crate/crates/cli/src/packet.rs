use std::path::Path;

use beamwave::energetics::{normalization_constant, probability_density};
use beamwave::propagators::propagate_schrodinger;
use beamwave::scenarios::{gaussian_packet, packet_width, spreading_width, PacketSpec};

use crate::config::{self, FileConfig, PACKET_GRID};
use crate::output::write_csv;
use crate::CliError;

pub fn run(cfg: &FileConfig, out: &Path) -> Result<(), CliError> {
    let s = &cfg.packet;
    let p = cfg.params()?;
    let grid = cfg.grid(PACKET_GRID)?;
    config::check_times("times", &s.times)?;
    config::positive("width", s.width)?;
    let spec = PacketSpec::new(s.center.unwrap_or(grid.length() / 2.0), s.width, s.wavenumber)
        .map_err(|e| CliError::config("packet", e.to_string()))?;
    let horizon = s.times.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    spec.check_fits(&grid, &p, horizon)?;
    let out = config::out_dir(out)?;

    let psi0 = gaussian_packet(&spec, &grid)?;
    let lambda = normalization_constant(&psi0)?;
    let mut rows = Vec::with_capacity(s.times.len());
    for &t in &s.times {
        let rho = probability_density(&propagate_schrodinger(&psi0, t, &p), lambda);
        let measured = packet_width(&rho)?;
        let analytic = spreading_width(s.width, t, &p);
        rows.push(vec![t, measured, analytic, (measured - analytic).abs() / analytic]);
    }
    write_csv(&out.join("packet_widths.csv"), &["t", "measured_width", "analytic_width", "relative_deviation"], &rows)?;
    println!("{:<8} {:>14} {:>14} {:>12}", "t", "measured", "analytic", "rel dev");
    for r in &rows {
        println!("{:<8} {:>14.8} {:>14.8} {:>12.3e}", r[0], r[1], r[2], r[3]);
    }
    Ok(())
}
