use std::path::Path;

use beamwave::duality::{
    real_state_from_psi_plus, split_initial_data, state_from_wavefunction, strain_velocity, superpose,
    wavefunction_from_state,
};
use beamwave::energetics::{
    balance_terms, duality_gap, energy_density, normalization_constant, probability_density, total_energy, BalanceLaw,
    Trajectory, WaveTrajectory,
};
use beamwave::fields::{integrate, relative_max_error, relative_max_error_real, spectral_derivative};
use beamwave::propagators::{propagate_beam, propagate_schrodinger};
use beamwave::scenarios::{gaussian_packet, random_band_limited, PacketSpec};
use beamwave::{BeamState, ComplexField, Field, Grid, PhysParams, RealField, StrainState};
use num_complex::Complex64;
use serde::Serialize;

use crate::config::{self, FileConfig, DEFAULT_GRID, PACKET_GRID};
use crate::output::write_json;
use crate::CliError;

pub const REPORT_SCHEMA: &str = "beamwave.verify/1";

/// Where the largest deviation of a property was seen.
#[derive(Debug, Clone, Serialize)]
pub struct Worst {
    pub case: String,
    pub time: Option<f64>,
    pub quantity: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub id: &'static str,
    pub property: &'static str,
    pub test: &'static str,
    pub tolerance: f64,
    pub measured: f64,
    pub passed: bool,
    pub worst: Option<Worst>,
}

#[derive(Debug, Serialize)]
struct Report {
    schema: &'static str,
    length: f64,
    n: usize,
    params: PhysParams,
    seeds: Vec<u64>,
    times: Vec<f64>,
    inject_fault: bool,
    all_passed: bool,
    properties: Vec<PropertyResult>,
}

struct Tracker {
    id: &'static str,
    property: &'static str,
    test: &'static str,
    tolerance: f64,
    measured: f64,
    worst: Option<Worst>,
}

impl Tracker {
    fn new(id: &'static str, property: &'static str, test: &'static str, tolerance: f64) -> Self {
        Self { id, property, test, tolerance, measured: 0.0, worst: None }
    }

    fn observe(&mut self, value: f64, case: &str, time: Option<f64>, quantity: &'static str) {
        if value > self.measured || value.is_nan() || self.worst.is_none() {
            self.measured = if value.is_nan() { f64::INFINITY } else { value.max(self.measured) };
            self.worst = Some(Worst { case: case.to_string(), time, quantity });
        }
    }

    fn finish(self, override_tol: Option<f64>) -> PropertyResult {
        let tolerance = override_tol.unwrap_or(self.tolerance);
        PropertyResult {
            id: self.id,
            property: self.property,
            test: self.test,
            tolerance,
            measured: self.measured,
            passed: self.measured <= tolerance,
            worst: self.worst,
        }
    }
}

/// `ψ = bγ - iav`, or `bγ + iav` when the mutation hook is active.
#[derive(Clone, Copy)]
struct Mapping {
    params: PhysParams,
    fault: bool,
}

impl Mapping {
    fn to_psi(&self, s: &StrainState) -> ComplexField {
        if self.fault {
            ComplexField::from_parts(&s.gamma.scale(self.params.b()), &s.v.scale(self.params.a()))
                .expect("strain state fields share one grid")
        } else {
            wavefunction_from_state(s, &self.params)
        }
    }
}

/// Beam evolved exactly, wave side evolved from the mapped initial data.
struct Corresponding {
    beam0: BeamState<RealField>,
    psi0: ComplexField,
    params: PhysParams,
}

impl Corresponding {
    fn new(beam0: BeamState<RealField>, map: Mapping) -> Self {
        let psi0 = map.to_psi(&strain_velocity(&beam0));
        Self { beam0, psi0, params: map.params }
    }
}

impl Trajectory for Corresponding {
    fn grid(&self) -> &Grid {
        self.beam0.grid()
    }

    fn strain_at(&self, t: f64) -> StrainState {
        strain_velocity(&propagate_beam(&self.beam0, t, &self.params))
    }

    fn wavefunction_at(&self, t: f64) -> ComplexField {
        propagate_schrodinger(&self.psi0, t, &self.params)
    }
}

fn complex_state(re: &BeamState<RealField>, im: &BeamState<RealField>) -> BeamState<ComplexField> {
    BeamState {
        u: ComplexField::from_parts(&re.u, &im.u).expect("same grid"),
        v: ComplexField::from_parts(&re.v, &im.v).expect("same grid"),
    }
}

fn negativity(f: &RealField) -> f64 {
    let scale = f.max_abs();
    if scale > 0.0 {
        (-f.min()).max(0.0) / scale
    } else {
        0.0
    }
}

pub fn run(cfg: &FileConfig, out: &Path, inject_fault: bool) -> Result<(), CliError> {
    let v = &cfg.verify;
    let p = cfg.params()?;
    let grid = cfg.grid(DEFAULT_GRID)?;
    config::check_times("times", &v.times)?;
    config::check_fraction("kmax_fraction", v.kmax_fraction)?;
    if v.seeds.is_empty() {
        return Err(CliError::config("seeds", "at least one seed is required".into()));
    }
    if let Some(tol) = v.tol {
        config::non_negative("tol", tol)?;
    }
    let out = config::out_dir(out)?;
    let map = Mapping { params: p, fault: inject_fault };

    let mut d1 = Tracker::new(
        "D1",
        "evolution commutes with the bijection",
        "map(beam(t)) vs schrodinger(t)(map), random real data",
        1e-11,
    );
    let mut d2 = Tracker::new(
        "D2",
        "psi = 2b Psi+''",
        "psi from evolved beam vs 2b times second derivative of evolved Psi+",
        1e-11,
    );
    let mut d3 = Tracker::new(
        "D3",
        "superposition reconstructs the beam",
        "Psi+ + Psi- vs direct beam minus mean, complex data",
        1e-11,
    );
    let mut d4 = Tracker::new("D4", "conjugate pair for real data", "Psi-(t) vs conj Psi+(t), real data", 1e-12);
    let mut d5 = Tracker::new(
        "D5",
        "bijection round trips",
        "psi -> (gamma, v) -> psi and (gamma, v) -> psi -> (gamma, v)",
        1e-15,
    );
    let mut e1 = Tracker::new(
        "E1",
        "rho = 2 lambda E",
        "pointwise gap over max rho, beam-evolved E vs schrodinger-evolved rho, plus gaussian packet",
        1e-12,
    );
    let mut e2 =
        Tracker::new("E2", "integral of rho conserved", "|integral rho(t) - 1| with lambda fixed at t = 0", 1e-12);
    let mut e3 = Tracker::new("E3", "total energy conserved", "|E(t) - E(0)| / E(0) along the exact beam", 1e-12);
    let mut e4 = Tracker::new(
        "E4",
        "balance residuals proportional",
        "|res_rho - 2 lambda res_E| / (2 lambda (|rate_E| + |div Q|))",
        1e-12,
    );
    let mut e5 = Tracker::new("E5", "E >= 0 and rho >= 0", "largest negative excursion over max density", 0.0);

    // Residual proportionality is exact for any step; sizing it to the data
    // band keeps the 1/h round-off amplification small.
    let omega_band = p.ratio() * (v.kmax_fraction * grid.max_wavenumber()).powi(2);
    let h = 0.5 / omega_band;

    for &seed in &v.seeds {
        let case = format!("seed {seed}");
        let beam0 = random_band_limited(seed, v.kmax_fraction, &grid, false)?;
        let real0 = random_band_limited(seed, v.kmax_fraction, &grid, true)?;
        let imag0 = random_band_limited(seed.wrapping_add(1 << 32), v.kmax_fraction, &grid, true)?;

        // D5
        let s0 = strain_velocity(&beam0);
        let psi = map.to_psi(&s0);
        let back = state_from_wavefunction(&psi, &p);
        d5.observe(relative_max_error_real(&back.gamma, &s0.gamma)?, &case, None, "gamma");
        d5.observe(relative_max_error_real(&back.v, &s0.v)?, &case, None, "v");
        let psi_any = ComplexField::from_parts(&real0.u, &imag0.u)?;
        let again = map.to_psi(&state_from_wavefunction(&psi_any, &p));
        d5.observe(relative_max_error(&again, &psi_any)?, &case, None, "psi");

        let traj = Corresponding::new(beam0.clone(), map);
        let psi0 = traj.wavefunction_at(0.0);
        let lambda = normalization_constant(&psi0)?;
        let e0 = total_energy(&s0, &p);

        let pair = split_initial_data(&real0, &p)?;
        let complex0 = complex_state(&real0, &imag0);
        let complex_pair = split_initial_data(&complex0, &p)?;
        let complex_mean = integrate(&complex0.u) / grid.length();

        for &t in &v.times {
            let st = traj.strain_at(t);
            let psit = traj.wavefunction_at(t);
            d1.observe(relative_max_error(&map.to_psi(&st), &psit)?, &case, Some(t), "psi");

            let evolved = pair.evolve(t, &p);
            let beam_t = real_state_from_psi_plus(&evolved.psi_plus, &p);
            let direct = propagate_beam(&real0, t, &p);
            let psi_beam = map.to_psi(&strain_velocity(&direct));
            let twice = spectral_derivative(&evolved.psi_plus, 2)?.scale(Complex64::new(2.0 * p.b(), 0.0));
            d2.observe(relative_max_error(&psi_beam, &twice)?, &case, Some(t), "psi");
            d2.observe(relative_max_error_real(&beam_t.v, &direct.v)?, &case, Some(t), "v");
            d4.observe(relative_max_error(&evolved.psi_minus, &evolved.psi_plus.conj())?, &case, Some(t), "psi_minus");

            let sum = superpose(&complex_pair.evolve(t, &p))?;
            let reference = propagate_beam(&complex0, t, &p).u.map(|z| z - complex_mean);
            d3.observe(relative_max_error(&sum, &reference)?, &case, Some(t), "u");

            let rho = probability_density(&psit, lambda);
            let energy = energy_density(&st, &p);
            e1.observe(duality_gap(&st, &psit, lambda, &p)? / rho.max_abs(), &case, Some(t), "rho - 2 lambda E");
            e2.observe((integrate(&rho) - 1.0).abs(), &case, Some(t), "integral rho");
            e3.observe((total_energy(&st, &p) - e0).abs() / e0, &case, Some(t), "total energy");
            e5.observe(negativity(&energy), &case, Some(t), "E");
            e5.observe(negativity(&rho), &case, Some(t), "rho");

            let res_e = balance_terms(&traj, t, h, BalanceLaw::Energy, &p)?;
            let res_rho = balance_terms(&traj, t, h, BalanceLaw::Probability { lambda }, &p)?;
            let diff = res_rho.residual.max_abs_diff(&res_e.residual.scale(2.0 * lambda))?;
            e4.observe(diff / (2.0 * lambda * res_e.scale()), &case, Some(t), "balance residual");
        }
    }

    let packet_grid = Grid::new(PACKET_GRID.0, PACKET_GRID.1)?;
    let spec = PacketSpec::new(PACKET_GRID.0 / 2.0, 1.0, 2.0)?;
    let packet = WaveTrajectory::new(gaussian_packet(&spec, &packet_grid)?, p);
    let lambda = normalization_constant(&packet.wavefunction_at(0.0))?;
    for &t in &v.times {
        let psit = packet.wavefunction_at(t);
        let st = packet.strain_at(t);
        let rho = probability_density(&psit, lambda);
        e1.observe(
            duality_gap(&st, &map.to_psi(&st), lambda, &p)? / rho.max_abs(),
            "gaussian",
            Some(t),
            "rho - 2 lambda E",
        );
        e2.observe((integrate(&rho) - 1.0).abs(), "gaussian", Some(t), "integral rho");
        e5.observe(negativity(&rho), "gaussian", Some(t), "rho");
    }

    let properties: Vec<PropertyResult> =
        [d1, d2, d3, d4, d5, e1, e2, e3, e4, e5].into_iter().map(|t| t.finish(v.tol)).collect();
    let failures = properties.iter().filter(|r| !r.passed).count();

    println!("{:<4} {:<40} {:>12} {:>12}  result", "id", "property", "measured", "tolerance");
    for r in &properties {
        println!(
            "{:<4} {:<40} {:>12.3e} {:>12.1e}  {}",
            r.id,
            r.property,
            r.measured,
            r.tolerance,
            if r.passed { "PASS" } else { "FAIL" }
        );
    }
    for r in properties.iter().filter(|r| !r.passed) {
        if let Some(w) = &r.worst {
            let time = w.time.map(|t| format!(" t = {t}")).unwrap_or_default();
            eprintln!(
                "FAIL {} ({}): {} = {:e} exceeds {:e} at {}{}",
                r.id, r.property, w.quantity, r.measured, r.tolerance, w.case, time
            );
        }
    }

    let report = Report {
        schema: REPORT_SCHEMA,
        length: grid.length(),
        n: grid.len(),
        params: p,
        seeds: v.seeds.clone(),
        times: v.times.clone(),
        inject_fault,
        all_passed: failures == 0,
        properties,
    };
    write_json(&out.join("verify_report.json"), &report)?;
    if failures > 0 {
        return Err(CliError::PropertyFailure(failures));
    }
    Ok(())
}
