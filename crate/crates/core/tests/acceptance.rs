//! Acceptance suite. Each test prints one PASS/FAIL line and asserts its
//! pinned tolerance.

use std::f64::consts::PI;

use beamwave::duality::{
    beam_ic_from_wavefunction, real_state_from_psi_plus, split_initial_data, state_from_wavefunction, strain_velocity,
    superpose, wavefunction_from_state,
};
use beamwave::energetics::{
    balance_terms, duality_gap, normalization_constant, probability_density, total_energy, BalanceLaw, BeamTrajectory,
    Trajectory, WaveTrajectory,
};
use beamwave::fields::{integrate, relative_max_error, relative_max_error_real};
use beamwave::propagators::{
    beam_symbol, factorization_residual, propagate_beam, propagate_branch, propagate_schrodinger, schrodinger_symbol,
};
use beamwave::scenarios::{gaussian_packet, packet_width, random_band_limited, spreading_width, PacketSpec};
use beamwave::timesteppers::{
    benchmark, fit_loglog_slope, rk4_integrate, stepped_initial, BenchScenario, DtPolicy, Formulation, IntegratorConfig,
};
use beamwave::{BeamState, Branch, ComplexField, Field, Grid, PhysParams, StrainState};

const SEEDS: std::ops::RangeInclusive<u64> = 1..=20;
const TIMES: [f64; 3] = [0.1, 1.0, 5.0];

fn report(id: u32, what: &str, measured: f64, limit: f64) {
    let ok = measured <= limit;
    println!("[{}] criterion {id:>2}: {what}: {measured:.3e} (limit {limit:.1e})", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} ({what}): {measured:e} > {limit:e}");
}

fn report_band(id: u32, what: &str, measured: f64, target: f64, half_width: f64) {
    let ok = (measured - target).abs() <= half_width;
    println!(
        "[{}] criterion {id:>2}: {what}: {measured:.4} (target {target} ± {half_width})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} ({what}): {measured} outside {target} ± {half_width}");
}

fn params() -> PhysParams {
    PhysParams::new(1.3, 0.7).unwrap()
}

fn random_complex(seed: u64, grid: &Grid, kmax: f64) -> ComplexField {
    let s = random_band_limited(seed, kmax, grid, false).unwrap();
    ComplexField::from_parts(&s.u, &s.v).unwrap()
}

fn random_strain(seed: u64, grid: &Grid) -> StrainState {
    let s = random_band_limited(seed, 0.25, grid, false).unwrap();
    StrainState::new(s.u, s.v).unwrap()
}

#[test]
fn criterion_01_bijection_round_trip() {
    let p = params();
    let grid = Grid::new(2.0 * PI, 256).unwrap();
    let mut worst = 0.0f64;
    for seed in SEEDS {
        let psi = random_complex(seed, &grid, 0.5);
        let back = wavefunction_from_state(&state_from_wavefunction(&psi, &p), &p);
        worst = worst.max(relative_max_error(&back, &psi).unwrap());

        let s = random_strain(seed + 1000, &grid);
        let again = state_from_wavefunction(&wavefunction_from_state(&s, &p), &p);
        worst = worst.max(relative_max_error_real(&again.gamma, &s.gamma).unwrap());
        worst = worst.max(relative_max_error_real(&again.v, &s.v).unwrap());
    }
    report(1, "bijection round trip", worst, 1e-15);
}

#[test]
fn criterion_02_evolution_commutes_with_map() {
    let p = params();
    let mut worst = 0.0f64;
    for n in [256, 1024] {
        let grid = Grid::new(2.0 * PI, n).unwrap();
        for seed in SEEDS {
            let beam0 = random_band_limited(seed, 0.25, &grid, false).unwrap();
            let psi0 = wavefunction_from_state(&strain_velocity(&beam0), &p);
            for t in TIMES {
                let via_beam = wavefunction_from_state(&strain_velocity(&propagate_beam(&beam0, t, &p)), &p);
                let via_wave = propagate_schrodinger(&psi0, t, &p);
                worst = worst.max(relative_max_error(&via_beam, &via_wave).unwrap());
            }
        }
    }
    report(2, "map∘beam = schrödinger∘map", worst, 1e-11);
}

#[test]
fn criterion_03_complex_beam_matches_branch() {
    let p = params();
    let grid = Grid::new(2.0 * PI, 256).unwrap();
    let mut worst = 0.0f64;
    for branch in [Branch::Plus, Branch::Minus] {
        for seed in SEEDS {
            let psi0 = random_complex(seed, &grid, 0.25);
            let beam0 = beam_ic_from_wavefunction(&psi0, branch, &p);
            for t in TIMES {
                let u = propagate_beam(&beam0, t, &p).u;
                let psi = propagate_branch(&psi0, branch, t, &p);
                worst = worst.max(relative_max_error(&u, &psi).unwrap());
            }
        }
    }
    report(3, "complex beam IVP = branch solution", worst, 1e-11);
}

#[test]
fn criterion_04_conjugate_pair_superposition() {
    let p = params();
    let grid = Grid::new(2.0 * PI, 256).unwrap();
    let mut complex_worst = 0.0f64;
    let mut conj_worst = 0.0f64;
    let mut real_worst = 0.0f64;
    for seed in SEEDS {
        let a = random_band_limited(seed, 0.25, &grid, true).unwrap();
        let b = random_band_limited(seed + 500, 0.25, &grid, true).unwrap();
        let s0 = BeamState::new(
            ComplexField::from_parts(&a.u, &b.u).unwrap(),
            ComplexField::from_parts(&a.v, &b.v).unwrap(),
        )
        .unwrap();
        let pair = split_initial_data(&s0, &p).unwrap();
        let mean = integrate(&s0.u) / grid.length();
        for t in TIMES {
            let direct = propagate_beam(&s0, t, &p).u.map(|z| z - mean);
            let sum = superpose(&pair.evolve(t, &p)).unwrap();
            complex_worst = complex_worst.max(relative_max_error(&sum, &direct).unwrap());
        }

        let pair = split_initial_data(&a, &p).unwrap();
        let mean = a.u.mean();
        for t in TIMES {
            let evolved = pair.evolve(t, &p);
            conj_worst = conj_worst.max(relative_max_error(&evolved.psi_minus, &evolved.psi_plus.conj()).unwrap());
            let direct = propagate_beam(&a, t, &p);
            let rebuilt = real_state_from_psi_plus(&evolved.psi_plus, &p);
            real_worst = real_worst.max(relative_max_error_real(&rebuilt.u, &direct.u.map(|x| x - mean)).unwrap());
            real_worst = real_worst.max(relative_max_error_real(&rebuilt.v, &direct.v).unwrap());
        }
    }
    report(4, "Ψ+ + Ψ- reconstructs complex beam", complex_worst, 1e-11);
    report(4, "real data Ψ- = conj Ψ+", conj_worst, 1e-12);
    report(4, "real data u = 2 Re Ψ+", real_worst, 1e-11);
}

fn gap_over(traj: &dyn Trajectory, times: &[f64], lambda: f64, p: &PhysParams) -> f64 {
    times
        .iter()
        .map(|&t| {
            let psi = traj.wavefunction_at(t);
            let rho_max = probability_density(&psi, lambda).max_abs();
            duality_gap(&traj.strain_at(t), &psi, lambda, p).unwrap() / rho_max
        })
        .fold(0.0, f64::max)
}

#[test]
fn criterion_05_energy_identity() {
    let p = params();
    let times = [0.0, 0.1, 0.5, 1.0, 2.5, 5.0, 10.0];
    let grid = Grid::new(2.0 * PI, 256).unwrap();
    let mut worst = 0.0f64;
    for seed in SEEDS {
        let traj = BeamTrajectory::new(random_band_limited(seed, 0.25, &grid, false).unwrap(), p);
        let lambda = normalization_constant(&traj.wavefunction_at(0.0)).unwrap();
        worst = worst.max(gap_over(&traj, &times, lambda, &p));
    }
    let packet_grid = Grid::new(80.0, 2048).unwrap();
    let spec = PacketSpec::new(40.0, 1.0, 2.0).unwrap();
    let traj = WaveTrajectory::new(gaussian_packet(&spec, &packet_grid).unwrap(), p);
    let lambda = normalization_constant(&traj.wavefunction_at(0.0)).unwrap();
    let packet = gap_over(&traj, &[0.0, 0.5, 1.0, 2.0], lambda, &p);
    report(5, "|ρ - 2λE| / max ρ, random data", worst, 1e-12);
    report(5, "|ρ - 2λE| / max ρ, gaussian packet", packet, 1e-12);
}

#[test]
fn criterion_06_conservation() {
    let p = params();
    let grid = Grid::new(2.0 * PI, 256).unwrap();
    let times: Vec<f64> = (0..=20).map(|i| 0.5 * i as f64).collect();
    let mut energy_drift = 0.0f64;
    let mut mass_drift = 0.0f64;
    let mut lambda_drift = 0.0f64;
    for seed in SEEDS {
        let traj = BeamTrajectory::new(random_band_limited(seed, 0.25, &grid, false).unwrap(), p);
        let e0 = total_energy(&traj.strain_at(0.0), &p);
        let lambda0 = normalization_constant(&traj.wavefunction_at(0.0)).unwrap();
        for &t in &times {
            let e = total_energy(&traj.strain_at(t), &p);
            energy_drift = energy_drift.max((e - e0).abs() / e0);
            let psi = traj.wavefunction_at(t);
            let mass = integrate(&probability_density(&psi, lambda0));
            mass_drift = mass_drift.max((mass - 1.0).abs());
            let lambda = normalization_constant(&psi).unwrap();
            lambda_drift = lambda_drift.max((lambda - lambda0).abs() / lambda0);
        }
    }
    report(6, "total energy drift on [0, 10]", energy_drift, 1e-12);
    report(6, "∫ρ drift on [0, 10]", mass_drift, 1e-12);
    report(6, "λ(t) vs λ(0)", lambda_drift, 1e-12);
}

#[test]
fn criterion_07_balance_laws() {
    let p = params();
    let grid = Grid::new(2.0 * PI, 64).unwrap();
    let h = 1e-3;
    let mut worst_order = 0.0f64;
    let mut worst_ratio_dev = 0.0f64;
    let mut worst_prop = 0.0f64;
    for seed in SEEDS {
        let traj = BeamTrajectory::new(random_band_limited(seed, 0.25, &grid, false).unwrap(), p);
        let lambda = normalization_constant(&traj.wavefunction_at(0.0)).unwrap();
        for law in [BalanceLaw::Energy, BalanceLaw::Probability { lambda }] {
            let coarse = balance_terms(&traj, 0.7, 2.0 * h, law, &p).unwrap().residual.max_abs();
            let fine = balance_terms(&traj, 0.7, h, law, &p).unwrap().residual.max_abs();
            let ratio = coarse / fine;
            if (ratio - 4.0).abs() >= worst_ratio_dev {
                worst_ratio_dev = (ratio - 4.0).abs();
                worst_order = ratio;
            }
        }
        // The proportionality holds for any step; a larger one keeps round-off small.
        let h_prop = 10.0 * h;
        let energy = balance_terms(&traj, 0.7, h_prop, BalanceLaw::Energy, &p).unwrap();
        let prob = balance_terms(&traj, 0.7, h_prop, BalanceLaw::Probability { lambda }, &p).unwrap();
        let scaled = energy.residual.scale(2.0 * lambda);
        let diff = prob.residual.max_abs_diff(&scaled).unwrap();
        worst_prop = worst_prop.max(diff / (2.0 * lambda * energy.scale()));
    }
    report_band(7, "Richardson factor (worst)", worst_order, 4.0, 0.4);
    report(7, "residual_ρ vs 2λ·residual_E", worst_prop, 1e-12);
}

#[test]
fn criterion_08_gaussian_spreading() {
    let p = PhysParams::new(1.0, 1.0).unwrap();
    let grid = Grid::new(80.0, 2048).unwrap();
    let s0 = 1.0;
    let spec = PacketSpec::new(40.0, s0, 2.0).unwrap();
    spec.check_fits(&grid, &p, 2.0).unwrap();
    let psi0 = gaussian_packet(&spec, &grid).unwrap();
    let lambda = normalization_constant(&psi0).unwrap();
    let mut worst = 0.0f64;
    for t in [0.5, 1.0, 2.0] {
        let rho = probability_density(&propagate_schrodinger(&psi0, t, &p), lambda);
        let measured = packet_width(&rho).unwrap();
        let expected = spreading_width(s0, t, &p);
        worst = worst.max((measured - expected).abs() / expected);
    }
    report(8, "packet width vs s0·sqrt(1 + (bt/(a s0²))²)", worst, 1e-3);
}

#[test]
fn criterion_09_benchmark_sanity() {
    let p = PhysParams::new(1.0, 1.0).unwrap();
    let sizes = [128, 256, 512, 1024];
    let scenario = BenchScenario::Random { seed: 7, kmax_fraction: 0.25 };
    let bench = benchmark(&scenario, 2.0 * PI, &sizes, &DtPolicy::default(), &p).unwrap();
    let json = serde_json::to_string(&bench).unwrap();
    assert!(json.contains("\"runs\""));
    assert!(bench.runs.iter().all(|r| r.stable));

    let deviation = bench.correspondence.iter().map(|c| c.max_deviation.unwrap()).fold(0.0, f64::max);
    report(9, "RK4 formulations agree under the bijection", deviation, 1e-6);
    for fit in &bench.exponents {
        report_band(9, &format!("dt* exponent, {}", fit.formulation.name()), fit.exponent, -2.0, 0.1);
    }

    let grid = Grid::new(2.0 * PI, 32).unwrap();
    let beam = random_band_limited(3, 0.125, &grid, false).unwrap();
    let steps = [0.01, 0.005, 0.0025, 0.00125];
    for formulation in Formulation::ALL {
        let initial = stepped_initial(formulation, &beam, &p);
        let exact = initial.exact(1.0, &p);
        let errors: Vec<f64> = steps
            .iter()
            .map(|&dt| {
                let cfg = IntegratorConfig::new(formulation, dt, 1.0, p).unwrap();
                rk4_integrate(&cfg, &initial).unwrap().state.relative_error(&exact).unwrap()
            })
            .collect();
        let order = fit_loglog_slope(&steps, &errors);
        report_band(9, &format!("RK4 order, {}", formulation.name()), order, 4.0, 0.3);
    }
}

#[test]
fn criterion_10_operator_factorization() {
    let p = PhysParams::new(1.7, 0.6).unwrap();
    let ks = [0.0, 0.5, -1.0, 1.7, -3.0, 4.2, -7.5, 10.0, -25.0, 60.0];
    let omegas = [0.0, 0.3, -1.0, 2.5, 7.0, -13.0, 40.0, 150.0, 1e3, -3e3];
    let mut worst = 0.0f64;
    let mut count = 0;
    for &k in &ks {
        for &omega in &omegas {
            let scale = schrodinger_symbol(Branch::Plus, k, omega, &p).norm()
                * schrodinger_symbol(Branch::Minus, k, omega, &p).norm()
                + beam_symbol(k, omega, &p).norm();
            let residual = factorization_residual(k, omega, &p).norm();
            worst = worst.max(if scale > 0.0 { residual / scale } else { residual });
            count += 1;
        }
    }
    assert_eq!(count, 100);
    report(10, "S+·S- - B over 100 (k, Ω) points", worst, 1e-13);
}
