//! Canonical initial data: Gaussian packets, single modes and seeded random
//! band-limited beam states.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{ComplexField, Field, Grid, PhysParams, RealField};
use crate::propagators::BeamState;

/// Half-width of the packet support, in initial widths.
pub const SUPPORT_WIDTHS: f64 = 6.0;

/// Tolerated deviation of `∫ρ` from one in [`packet_width`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-6;

/// Free Gaussian packet `exp(-(x - x0)²/(4s0²) + i k0 (x - x0))`.
///
/// `s0` is the standard deviation of `|ψ|²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketSpec {
    pub center: f64,
    pub width: f64,
    pub wavenumber: f64,
}

impl PacketSpec {
    pub fn new(center: f64, width: f64, wavenumber: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidParameter { name: "s0", reason: format!("must be positive, got {width}") });
        }
        if !center.is_finite() || !wavenumber.is_finite() {
            return Err(Error::InvalidParameter { name: "packet", reason: "center and k0 must be finite".into() });
        }
        Ok(Self { center, width, wavenumber })
    }

    /// Requires `±6 s(t)` around the center to fit in the box up to `horizon`.
    pub fn check_fits(&self, grid: &Grid, p: &PhysParams, horizon: f64) -> Result<()> {
        let widest = spreading_width(self.width, horizon, p);
        let required = 2.0 * SUPPORT_WIDTHS * widest;
        if required > grid.length() {
            return Err(Error::PacketTooWide { required, length: grid.length() });
        }
        Ok(())
    }
}

/// Signed distance from `center` to `x` in `[-L/2, L/2)`.
pub fn minimal_image(x: f64, center: f64, length: f64) -> f64 {
    (x - center + 0.5 * length).rem_euclid(length) - 0.5 * length
}

/// Samples the packet with periodic minimal-image distance.
///
/// The carrier phase is taken relative to the center, so it only differs
/// from `exp(i k0 x)` by the constant phase `exp(i k0 x0)`.
pub fn gaussian_packet(spec: &PacketSpec, grid: &Grid) -> Result<ComplexField> {
    let required = 2.0 * SUPPORT_WIDTHS * spec.width;
    if required > grid.length() {
        return Err(Error::PacketTooWide { required, length: grid.length() });
    }
    let denom = 4.0 * spec.width * spec.width;
    ComplexField::from_fn(grid, |x| {
        let d = minimal_image(x, spec.center, grid.length());
        Complex64::new(-d * d / denom, spec.wavenumber * d).exp()
    })
}

/// Width of a freely spreading packet: `s0·√(1 + (bt/(a s0²))²)`.
pub fn spreading_width(s0: f64, t: f64, p: &PhysParams) -> f64 {
    let r = p.ratio() * t / (s0 * s0);
    s0 * (1.0 + r * r).sqrt()
}

/// Standard deviation of a normalized density, measured in minimal-image
/// coordinates around its maximum.
pub fn packet_width(rho: &RealField) -> Result<f64> {
    let total = rho.integral();
    if !((total - 1.0).abs() <= NORMALIZATION_TOLERANCE) {
        return Err(Error::NotNormalized(total));
    }
    let grid = rho.grid();
    let values = rho.values();
    let peak = values.iter().enumerate().fold(0, |best, (j, &r)| if r > values[best] { j } else { best });
    let origin = grid.x(peak);
    let dx = grid.spacing();
    let coords: Vec<f64> = (0..grid.len()).map(|j| minimal_image(grid.x(j), origin, grid.length())).collect();
    let mean: f64 = coords.iter().zip(values).map(|(y, r)| y * r).sum::<f64>() * dx;
    let var: f64 = coords.iter().zip(values).map(|(y, r)| (y - mean).powi(2) * r).sum::<f64>() * dx;
    Ok(var.sqrt())
}

/// Seeded coefficients: unit-variance complex Gaussians with Hermitian
/// symmetry on `|n| ≤ kmax_fraction·N/2`, a real Gaussian on `n = 0`, and
/// exact zeros elsewhere.
pub fn random_spectrum(rng: &mut ChaCha8Rng, grid: &Grid, kmax_fraction: f64) -> Vec<Complex64> {
    let n = grid.len();
    let cutoff = (kmax_fraction * (n / 2) as f64).floor() as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n];
    coeffs[0] = Complex64::new(StandardNormal.sample(rng), 0.0);
    let half = std::f64::consts::FRAC_1_SQRT_2;
    for mode in 1..=cutoff.min(n / 2 - 1) {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        let c = Complex64::new(re * half, im * half);
        coeffs[mode] = c;
        coeffs[n - mode] = c.conj();
    }
    coeffs
}

/// Deterministic real band-limited beam data.
pub fn random_band_limited(
    seed: u64,
    kmax_fraction: f64,
    grid: &Grid,
    zero_mean_v: bool,
) -> Result<BeamState<RealField>> {
    if !(kmax_fraction > 0.0 && kmax_fraction <= 0.5) {
        return Err(Error::InvalidParameter {
            name: "kmax_fraction",
            reason: format!("must lie in (0, 0.5], got {kmax_fraction}"),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u_hat = random_spectrum(&mut rng, grid, kmax_fraction);
    let mut v_hat = random_spectrum(&mut rng, grid, kmax_fraction);
    if zero_mean_v {
        v_hat[0] = Complex64::new(0.0, 0.0);
    }
    let u = RealField::from_spectrum(grid, &u_hat)?;
    let mut v = RealField::from_spectrum(grid, &v_hat)?;
    if zero_mean_v {
        let mean = v.mean();
        v = v.map(|x| x - mean);
    }
    BeamState::new(u, v)
}

/// `u = amplitude·cos(k_n x)`, `v = 0` for the signed mode number `n`.
pub fn single_mode(grid: &Grid, mode: i64, amplitude: f64) -> Result<BeamState<RealField>> {
    if grid.slot_of_mode(mode).is_none() || mode.unsigned_abs() as usize >= grid.len() / 2 {
        return Err(Error::InvalidParameter {
            name: "mode",
            reason: format!("|n| must stay below N/2 = {}", grid.len() / 2),
        });
    }
    let k = 2.0 * std::f64::consts::PI * mode as f64 / grid.length();
    BeamState::new(RealField::from_fn(grid, |x| amplitude * (k * x).cos())?, RealField::zeros(grid))
}
