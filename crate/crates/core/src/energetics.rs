//! Mechanical energy and quantum probability transport.
//!
//! For corresponding `(γ, v)` and `ψ = bγ - iav`:
//!
//! ```text
//! E = (b²/2)γ² + (a²/2)v²        Q = b²(vγ' - v'γ)       Ė = -Q'
//! ρ = λ|ψ|²                       q = (2bλ/a) Im(ψ*ψ')     ρ̇ = -q'
//! ```
//!
//! with `λ = 1/∫|ψ|²`, so that `ρ = 2λE` and `q = 2λQ` pointwise.

use crate::duality::{state_from_wavefunction, strain_velocity, wavefunction_from_state, StrainState};
use crate::error::{Error, Result};
use crate::fields::{spectral_derivative, ComplexField, Field, Grid, PhysParams, RealField};
use crate::propagators::{propagate_beam, propagate_schrodinger, BeamState};

/// Smallest `∫|ψ|²` accepted by [`normalization_constant`].
pub const MIN_NORM: f64 = 1e-300;

/// Energy per unit length and energy flux.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyFields {
    pub density: RealField,
    pub flux: RealField,
}

impl EnergyFields {
    pub fn new(s: &StrainState, p: &PhysParams) -> Self {
        Self { density: energy_density(s, p), flux: energy_flux(s, p) }
    }
}

/// Probability density, probability current and the normalization used.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityFields {
    pub density: RealField,
    pub current: RealField,
    pub lambda: f64,
}

impl ProbabilityFields {
    pub fn new(psi: &ComplexField, lambda: f64, p: &PhysParams) -> Self {
        Self { density: probability_density(psi, lambda), current: probability_current(psi, lambda, p), lambda }
    }

    /// Uses the normalization of `psi` itself.
    pub fn normalized(psi: &ComplexField, p: &PhysParams) -> Result<Self> {
        Ok(Self::new(psi, normalization_constant(psi)?, p))
    }
}

/// `E = (b²/2)γ² + (a²/2)v²`.
pub fn energy_density(s: &StrainState, p: &PhysParams) -> RealField {
    let (b2, a2) = (p.b() * p.b(), p.a() * p.a());
    s.gamma.zip_map(&s.v, |g, v| 0.5 * b2 * g * g + 0.5 * a2 * v * v).expect("strain state fields share one grid")
}

/// `Q = b²(vγ' - v'γ)` with spectral derivatives.
pub fn energy_flux(s: &StrainState, p: &PhysParams) -> RealField {
    let gamma_x = spectral_derivative(&s.gamma, 1).expect("order 1 is supported");
    let v_x = spectral_derivative(&s.v, 1).expect("order 1 is supported");
    let b2 = p.b() * p.b();
    let values =
        s.v.values()
            .iter()
            .zip(gamma_x.values())
            .zip(v_x.values().iter().zip(s.gamma.values()))
            .map(|((&v, &gx), (&vx, &g))| b2 * (v * gx - vx * g))
            .collect();
    RealField::new(s.grid(), values).expect("products of finite samples")
}

/// `∫E dx` over the box.
pub fn total_energy(s: &StrainState, p: &PhysParams) -> f64 {
    energy_density(s, p).integral()
}

/// `λ = 1/∫|ψ|²`.
pub fn normalization_constant(psi: &ComplexField) -> Result<f64> {
    let norm = psi.norm_sqr().integral();
    if !(norm > MIN_NORM) {
        return Err(Error::ZeroWaveFunction);
    }
    Ok(1.0 / norm)
}

/// `ρ = λ|ψ|²`.
pub fn probability_density(psi: &ComplexField, lambda: f64) -> RealField {
    psi.norm_sqr().scale(lambda)
}

/// `q = (2bλ/a) Im(ψ*ψ')`.
pub fn probability_current(psi: &ComplexField, lambda: f64, p: &PhysParams) -> RealField {
    let psi_x = spectral_derivative(psi, 1).expect("order 1 is supported");
    let c = 2.0 * p.b() * lambda / p.a();
    let values = psi.values().iter().zip(psi_x.values()).map(|(z, zx)| c * (z.conj() * zx).im).collect();
    RealField::new(psi.grid(), values).expect("products of finite samples")
}

/// `max_x |ρ(x) - 2λE(x)|`. A diagnostic: mismatched inputs give a positive
/// value, never an error.
pub fn duality_gap(s: &StrainState, psi: &ComplexField, lambda: f64, p: &PhysParams) -> Result<f64> {
    let rho = probability_density(psi, lambda);
    let energy = energy_density(s, p);
    rho.max_abs_diff(&energy.scale(2.0 * lambda))
}

/// Time-parameterized source of corresponding beam and wave states.
pub trait Trajectory {
    fn grid(&self) -> &Grid;
    fn strain_at(&self, t: f64) -> StrainState;
    fn wavefunction_at(&self, t: f64) -> ComplexField;
}

/// Real beam data. The strain side evolves with the exact beam propagator and
/// the wave side with the exact Schrödinger propagator applied to
/// `ψ(0) = bγ(0) - iav(0)`.
#[derive(Debug, Clone)]
pub struct BeamTrajectory {
    initial: BeamState<RealField>,
    psi0: ComplexField,
    params: PhysParams,
}

impl BeamTrajectory {
    pub fn new(initial: BeamState<RealField>, params: PhysParams) -> Self {
        let psi0 = wavefunction_from_state(&strain_velocity(&initial), &params);
        Self { initial, psi0, params }
    }

    pub fn beam_at(&self, t: f64) -> BeamState<RealField> {
        propagate_beam(&self.initial, t, &self.params)
    }
}

impl Trajectory for BeamTrajectory {
    fn grid(&self) -> &Grid {
        self.initial.grid()
    }

    fn strain_at(&self, t: f64) -> StrainState {
        strain_velocity(&self.beam_at(t))
    }

    fn wavefunction_at(&self, t: f64) -> ComplexField {
        propagate_schrodinger(&self.psi0, t, &self.params)
    }
}

/// A wave function evolved exactly; the strain side is its mechanical
/// reading `(Re ψ/b, -Im ψ/a)`.
#[derive(Debug, Clone)]
pub struct WaveTrajectory {
    psi0: ComplexField,
    params: PhysParams,
}

impl WaveTrajectory {
    pub fn new(psi0: ComplexField, params: PhysParams) -> Self {
        Self { psi0, params }
    }
}

impl Trajectory for WaveTrajectory {
    fn grid(&self) -> &Grid {
        self.psi0.grid()
    }

    fn strain_at(&self, t: f64) -> StrainState {
        state_from_wavefunction(&self.wavefunction_at(t), &self.params)
    }

    fn wavefunction_at(&self, t: f64) -> ComplexField {
        propagate_schrodinger(&self.psi0, t, &self.params)
    }
}

/// Which conservation law a residual refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BalanceLaw {
    /// `Ė + Q' = 0`
    Energy,
    /// `ρ̇ + q' = 0` with a fixed normalization `λ`
    Probability { lambda: f64 },
}

impl BalanceLaw {
    fn density_and_flux(&self, traj: &dyn Trajectory, t: f64, p: &PhysParams) -> (RealField, RealField) {
        match *self {
            BalanceLaw::Energy => {
                let fields = EnergyFields::new(&traj.strain_at(t), p);
                (fields.density, fields.flux)
            }
            BalanceLaw::Probability { lambda } => {
                let fields = ProbabilityFields::new(&traj.wavefunction_at(t), lambda, p);
                (fields.density, fields.current)
            }
        }
    }
}

/// Default finite-difference step, a small fraction of the fastest period:
/// `1e-4·(a/b)·Δx²`.
pub fn default_fd_step(grid: &Grid, p: &PhysParams) -> f64 {
    1e-4 * grid.spacing() * grid.spacing() / p.ratio()
}

/// The two terms of a balance law and their sum.
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceTerms {
    /// Centered difference of the density.
    pub rate: RealField,
    /// Spatial derivative of the flux.
    pub divergence: RealField,
    pub residual: RealField,
}

impl BalanceTerms {
    /// `‖rate‖∞ + ‖divergence‖∞`, the magnitude of the balanced terms.
    pub fn scale(&self) -> f64 {
        self.rate.max_abs() + self.divergence.max_abs()
    }
}

/// Centered-difference rate, flux divergence and their sum at time `t`.
pub fn balance_terms(
    traj: &dyn Trajectory,
    t: f64,
    dt_fd: f64,
    law: BalanceLaw,
    p: &PhysParams,
) -> Result<BalanceTerms> {
    if !(dt_fd.is_finite() && dt_fd > 0.0) {
        return Err(Error::InvalidParameter { name: "dt_fd", reason: format!("must be positive, got {dt_fd}") });
    }
    let (ahead, _) = law.density_and_flux(traj, t + dt_fd, p);
    let (behind, _) = law.density_and_flux(traj, t - dt_fd, p);
    let (_, flux) = law.density_and_flux(traj, t, p);
    let rate = ahead.zip_map(&behind, |x, y| (x - y) / (2.0 * dt_fd))?;
    let divergence = spectral_derivative(&flux, 1)?;
    let residual = rate.zip_map(&divergence, |x, y| x + y)?;
    Ok(BalanceTerms { rate, divergence, residual })
}

/// `[D(t+h) - D(t-h)]/(2h) + F'(t)` for the chosen `(D, F)`; `O(h²)` for
/// exact trajectories.
pub fn balance_residual(
    traj: &dyn Trajectory,
    t: f64,
    dt_fd: f64,
    law: BalanceLaw,
    p: &PhysParams,
) -> Result<RealField> {
    Ok(balance_terms(traj, t, dt_fd, law, p)?.residual)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use num_complex::Complex64;

    use super::*;

    fn unit() -> PhysParams {
        PhysParams::new(1.0, 1.0).unwrap()
    }

    fn grid() -> Grid {
        Grid::new(2.0 * PI, 64).unwrap()
    }

    fn real(g: &Grid, f: impl Fn(f64) -> f64) -> RealField {
        RealField::from_fn(g, f).unwrap()
    }

    fn standing(g: &Grid, t: f64) -> StrainState {
        StrainState::new(real(g, |x| -x.cos() * t.cos()), real(g, |x| -x.cos() * t.sin())).unwrap()
    }

    #[test]
    fn energy_density_examples() {
        let g = grid();
        assert_eq!(energy_density(&StrainState::zeros(&g), &unit()).max_abs(), 0.0);

        for t in [0.0, 0.7, 3.1] {
            let e = energy_density(&standing(&g, t), &unit());
            assert!(e.max_abs_diff(&real(&g, |x| x.cos().powi(2) / 2.0)).unwrap() < 1e-15);
            assert!((total_energy(&standing(&g, t), &unit()) - PI / 2.0).abs() < 1e-14);
        }

        let p = PhysParams::new(2.0, 3.0).unwrap();
        let ones =
            StrainState::new(RealField::constant(&g, 1.0).unwrap(), RealField::constant(&g, 1.0).unwrap()).unwrap();
        assert!(energy_density(&ones, &p).values().iter().all(|&e| e == 6.5));
    }

    #[test]
    fn energy_flux_examples() {
        let g = grid();
        let q = energy_flux(&standing(&g, 0.6), &unit());
        assert!(q.max_abs() < 1e-14);
        assert_eq!(energy_flux(&StrainState::zeros(&g), &unit()).max_abs(), 0.0);

        // u = cos(x - t): γ = -cos(x - t), v = sin(x - t), Q = sin² + cos² = 1
        let t = 0.4;
        let s = StrainState::new(real(&g, |x| -(x - t).cos()), real(&g, |x| (x - t).sin())).unwrap();
        let q = energy_flux(&s, &unit());
        assert!(q.max_abs_diff(&RealField::constant(&g, 1.0).unwrap()).unwrap() < 1e-13);
    }

    #[test]
    fn normalization_examples() {
        let g = grid();
        let ones = ComplexField::from_fn(&g, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert!((normalization_constant(&ones).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-16);
        assert_eq!(normalization_constant(&ComplexField::zeros(&g)), Err(Error::ZeroWaveFunction));

        let rho = probability_density(&ones, 1.0 / (2.0 * PI));
        assert!(rho.values().iter().all(|&r| (r - 1.0 / (2.0 * PI)).abs() < 1e-17));
    }

    #[test]
    fn density_and_current_of_standing_wave() {
        let g = grid();
        let phase = Complex64::new(0.0, -1.3).exp();
        let psi = ComplexField::from_fn(&g, |x| -x.cos() * phase).unwrap();
        let rho = probability_density(&psi, 1.0 / PI);
        assert!(rho.max_abs_diff(&real(&g, |x| x.cos().powi(2) / PI)).unwrap() < 1e-15);
        assert!((rho.integral() - 1.0).abs() < 1e-14);
        assert!(probability_current(&psi, 1.0 / PI, &unit()).max_abs() < 1e-14);

        let real_psi = ComplexField::from_fn(&g, |x| Complex64::new(x.sin() + 0.3, 0.0)).unwrap();
        assert!(probability_current(&real_psi, 0.5, &unit()).max_abs() < 1e-14);
    }

    #[test]
    fn plane_wave_current() {
        let g = grid();
        let psi = ComplexField::from_fn(&g, |x| Complex64::new(0.0, x).exp()).unwrap();
        let q = probability_current(&psi, 1.0 / (2.0 * PI), &unit());
        assert!(q.max_abs_diff(&RealField::constant(&g, 1.0 / PI).unwrap()).unwrap() < 1e-14);
    }

    #[test]
    fn duality_gap_examples() {
        let g = grid();
        let s = standing(&g, 0.9);
        let psi = wavefunction_from_state(&s, &unit());
        assert!(duality_gap(&s, &psi, 1.0 / PI, &unit()).unwrap() <= 1e-13);
        assert_eq!(duality_gap(&StrainState::zeros(&g), &ComplexField::zeros(&g), 1.0, &unit()).unwrap(), 0.0);

        let shifted = ComplexField::from_fn(&g, |x| Complex64::new(-(x + 0.5).cos(), 0.0)).unwrap();
        assert!(duality_gap(&s, &shifted, 1.0 / PI, &unit()).unwrap() > 1e-3);
    }

    #[test]
    fn current_is_twice_lambda_flux() {
        let g = grid();
        let p = PhysParams::new(0.7, 1.9).unwrap();
        let s = StrainState::new(
            real(&g, |x| x.sin() + 0.4 * (2.0 * x).cos()),
            real(&g, |x| 0.3 * (3.0 * x).sin() - x.cos()),
        )
        .unwrap();
        let psi = wavefunction_from_state(&s, &p);
        let lambda = normalization_constant(&psi).unwrap();
        let q = probability_current(&psi, lambda, &p);
        let flux = energy_flux(&s, &p).scale(2.0 * lambda);
        assert!(q.max_abs_diff(&flux).unwrap() <= 1e-13 * flux.max_abs());
    }

    #[test]
    fn standing_wave_balance_residual_is_small() {
        let g = grid();
        let u0 = real(&g, f64::cos);
        let traj = BeamTrajectory::new(BeamState::new(u0, RealField::zeros(&g)).unwrap(), unit());
        let r = balance_residual(&traj, 0.8, 1e-3, BalanceLaw::Energy, &unit()).unwrap();
        assert!(r.max_abs() <= 1e-6);
    }

    #[test]
    fn zero_state_balance_residual_vanishes() {
        let g = grid();
        let traj = BeamTrajectory::new(BeamState::zeros(&g), unit());
        let r = balance_residual(&traj, 1.0, 1e-3, BalanceLaw::Energy, &unit()).unwrap();
        assert_eq!(r.max_abs(), 0.0);
        let r = balance_residual(&traj, 1.0, 1e-3, BalanceLaw::Probability { lambda: 1.0 }, &unit()).unwrap();
        assert_eq!(r.max_abs(), 0.0);
    }

    #[test]
    fn balance_rejects_bad_step() {
        let g = grid();
        let traj = WaveTrajectory::new(ComplexField::zeros(&g), unit());
        assert!(balance_residual(&traj, 0.0, 0.0, BalanceLaw::Energy, &unit()).is_err());
    }

    #[test]
    fn default_step_follows_grid() {
        let g = Grid::new(2.0, 20).unwrap();
        let p = PhysParams::new(2.0, 1.0).unwrap();
        assert!((default_fd_step(&g, &p) - 1e-4 * 0.01 * 2.0).abs() < 1e-20);
    }
}
