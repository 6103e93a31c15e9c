//! Periodic grids, grid-sampled fields and spectral calculus.
//!
//! Fourier convention: `f(x) = Σ_n f̂_n exp(i k_n x)` with `k_n = 2πn/L` and
//! `n ∈ {-N/2, …, N/2-1}`. The forward transform carries the `1/N` factor.
//! Spectra are stored in FFT slot order: slot `m < N/2` holds mode `n = m`,
//! slot `m ≥ N/2` holds mode `n = m - N`. Slot `N/2` is the unpaired Nyquist
//! mode `n = -N/2`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Relative size of `|f̂_0|` tolerated by the periodic antiderivative.
pub const MEAN_TOLERANCE: f64 = 1e-10;

/// Relative imaginary residue tolerated when a real field is rebuilt from a spectrum.
pub const IMAG_RESIDUE_TOLERANCE: f64 = 1e-13;

/// Uniform periodic grid on `[0, L)` with `N` points.
///
/// Cloning is cheap: the FFT plans are shared.
#[derive(Clone)]
pub struct Grid {
    length: f64,
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl Grid {
    pub fn new(length: f64, n: usize) -> Result<Self> {
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("L must be positive and finite, got {length}")));
        }
        if n < 4 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("N must be even and at least 4, got {n}")));
        }
        let mut planner = FftPlanner::new();
        Ok(Self { length, n, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) })
    }

    /// Number of grid points `N`.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Box length `L`.
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.length / self.n as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    /// Signed mode number stored in FFT slot `m`.
    pub fn mode_number(&self, slot: usize) -> i64 {
        let half = self.n / 2;
        if slot < half {
            slot as i64
        } else {
            slot as i64 - self.n as i64
        }
    }

    /// Wavenumber `k_n` of FFT slot `m`.
    pub fn wavenumber(&self, slot: usize) -> f64 {
        2.0 * PI * self.mode_number(slot) as f64 / self.length
    }

    /// Wavenumbers in FFT slot order.
    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n).map(|m| self.wavenumber(m)).collect()
    }

    /// Slot of the unpaired mode `n = -N/2`.
    pub fn nyquist_slot(&self) -> usize {
        self.n / 2
    }

    /// Largest `|k|` represented on the grid, `πN/L`.
    pub fn max_wavenumber(&self) -> f64 {
        PI * self.n as f64 / self.length
    }

    /// Slot of the signed mode number `n`, if it is represented.
    pub fn slot_of_mode(&self, mode: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if mode < -half || mode >= half {
            None
        } else if mode >= 0 {
            Some(mode as usize)
        } else {
            Some((mode + self.n as i64) as usize)
        }
    }

    /// Modal analysis: `f̂_n = (1/N) Σ_j f_j exp(-i k_n x_j)`.
    pub fn analyze(&self, values: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(values.len(), self.n, "sample count does not match grid");
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Modal synthesis: `f_j = Σ_n f̂_n exp(i k_n x_j)`.
    pub fn synthesize(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(coeffs.len(), self.n, "mode count does not match grid");
        let mut buf = coeffs.to_vec();
        self.inverse.process(&mut buf);
        buf
    }

    pub(crate) fn forward_in_place(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
    }

    pub(crate) fn inverse_in_place(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
    }

    pub fn ensure_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.length == other.length
    }
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid").field("length", &self.length).field("n", &self.n).finish()
    }
}

/// Positive constants of the two equations.
///
/// Beam: `a²` is the mass per unit length and `b²` the flexural rigidity.
/// Quantum: `a = ħ` and `b = ħ²/2m`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PhysParams {
    a: f64,
    b: f64,
}

impl PhysParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        for (name, value) in [("a", a), ("b", b)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be positive and finite, got {value}"),
                });
            }
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    /// `b/a`, the coefficient of the common dispersion law `ω = (b/a)k²`.
    pub fn ratio(&self) -> f64 {
        self.b / self.a
    }
}

/// Common behavior of real and complex grid functions.
pub trait Field: Clone + fmt::Debug + Sized {
    type Scalar: Copy + fmt::Debug;

    fn grid(&self) -> &Grid;

    /// Fourier coefficients in FFT slot order.
    fn spectrum(&self) -> Vec<Complex64>;

    /// Rebuilds a field from coefficients in FFT slot order.
    fn from_spectrum(grid: &Grid, coeffs: &[Complex64]) -> Result<Self>;

    fn to_complex(&self) -> ComplexField;

    fn zeros(grid: &Grid) -> Self;

    /// Largest absolute sample.
    fn max_abs(&self) -> f64;

    /// Trapezoid rule on the periodic box, `L·mean(values)`.
    fn integral(&self) -> Self::Scalar;
}

/// Real samples on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Grid,
    values: Vec<f64>,
}

impl RealField {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!("expected {} samples, got {}", grid.len(), values.len())));
        }
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(j));
        }
        Ok(Self { grid: grid.clone(), values })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(grid, grid.points().into_iter().map(f).collect())
    }

    pub fn constant(grid: &Grid, value: f64) -> Result<Self> {
        Self::new(grid, vec![value; grid.len()])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Pointwise map on the same grid. Callers guarantee finite output.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_map(&self, other: &RealField, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let values = self.values.iter().zip(&other.values).map(|(&x, &y)| f(x, y)).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|v| s * v)
    }

    /// `max_j |self_j - other_j|`.
    pub fn max_abs_diff(&self, other: &RealField) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self.values.iter().zip(&other.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
    }
}

impl Field for RealField {
    type Scalar = f64;

    fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Projected onto exact Hermitian symmetry, which the DFT of real data
    /// satisfies up to round-off.
    fn spectrum(&self) -> Vec<Complex64> {
        let buf: Vec<Complex64> = self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        let mut coeffs = self.grid.analyze(&buf);
        hermitian_projection(&mut coeffs);
        coeffs
    }

    /// The imaginary part of the synthesis is discarded after checking it
    /// against `IMAG_RESIDUE_TOLERANCE` times the ℓ1 norm of the spectrum.
    fn from_spectrum(grid: &Grid, coeffs: &[Complex64]) -> Result<Self> {
        let samples = grid.synthesize(coeffs);
        let l1: f64 = coeffs.iter().map(|c| c.norm()).sum();
        let limit = IMAG_RESIDUE_TOLERANCE * l1;
        let residue = samples.iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        if residue > limit {
            return Err(Error::ImaginaryResidue { residue, limit });
        }
        RealField::new(grid, samples.into_iter().map(|c| c.re).collect())
    }

    fn to_complex(&self) -> ComplexField {
        ComplexField { grid: self.grid.clone(), values: self.values.iter().map(|&v| Complex64::new(v, 0.0)).collect() }
    }

    fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), values: vec![0.0; grid.len()] }
    }

    fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    fn integral(&self) -> f64 {
        self.grid.length * self.mean()
    }
}

/// Complex samples on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: &Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!("expected {} samples, got {}", grid.len(), values.len())));
        }
        if let Some(j) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(j));
        }
        Ok(Self { grid: grid.clone(), values })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::new(grid, grid.points().into_iter().map(f).collect())
    }

    /// Combines real and imaginary parts sampled on one grid.
    pub fn from_parts(re: &RealField, im: &RealField) -> Result<Self> {
        re.grid.ensure_same(&im.grid)?;
        let values = re.values.iter().zip(&im.values).map(|(&r, &i)| Complex64::new(r, i)).collect();
        Ok(Self { grid: re.grid.clone(), values })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn re(&self) -> RealField {
        RealField { grid: self.grid.clone(), values: self.values.iter().map(|c| c.re).collect() }
    }

    pub fn im(&self) -> RealField {
        RealField { grid: self.grid.clone(), values: self.values.iter().map(|c| c.im).collect() }
    }

    pub fn norm_sqr(&self) -> RealField {
        RealField { grid: self.grid.clone(), values: self.values.iter().map(|c| c.norm_sqr()).collect() }
    }

    pub fn conj(&self) -> Self {
        self.map(|c| c.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { grid: self.grid.clone(), values: self.values.iter().map(|&c| f(c)).collect() }
    }

    pub fn zip_map(&self, other: &ComplexField, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        self.grid.ensure_same(&other.grid)?;
        let values = self.values.iter().zip(&other.values).map(|(&x, &y)| f(x, y)).collect();
        Ok(Self { grid: self.grid.clone(), values })
    }

    pub fn scale(&self, s: Complex64) -> Self {
        self.map(|c| s * c)
    }

    pub fn max_abs_diff(&self, other: &ComplexField) -> Result<f64> {
        self.grid.ensure_same(&other.grid)?;
        Ok(self.values.iter().zip(&other.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max))
    }
}

impl Field for ComplexField {
    type Scalar = Complex64;

    fn grid(&self) -> &Grid {
        &self.grid
    }

    fn spectrum(&self) -> Vec<Complex64> {
        self.grid.analyze(&self.values)
    }

    fn from_spectrum(grid: &Grid, coeffs: &[Complex64]) -> Result<Self> {
        ComplexField::new(grid, grid.synthesize(coeffs))
    }

    fn to_complex(&self) -> ComplexField {
        self.clone()
    }

    fn zeros(grid: &Grid) -> Self {
        Self { grid: grid.clone(), values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    fn max_abs(&self) -> f64 {
        self.values.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn integral(&self) -> Complex64 {
        let sum: Complex64 = self.values.iter().sum();
        sum * (self.grid.length / self.values.len() as f64)
    }
}

/// Replaces `c_n` by `(c_n + conj(c_{-n}))/2`; self-paired slots become real.
fn hermitian_projection(coeffs: &mut [Complex64]) {
    let n = coeffs.len();
    coeffs[0].im = 0.0;
    coeffs[n / 2].im = 0.0;
    for m in 1..n / 2 {
        let avg = 0.5 * (coeffs[m] + coeffs[n - m].conj());
        coeffs[m] = avg;
        coeffs[n - m] = avg.conj();
    }
}

/// `(ik)^order` multiplier for one slot. Odd orders annihilate the Nyquist mode.
fn derivative_symbol(grid: &Grid, slot: usize, order: u32) -> Complex64 {
    if order % 2 == 1 && slot == grid.nyquist_slot() {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, grid.wavenumber(slot)).powu(order)
}

/// Multiplies the spectrum by `(ik_n)^order` in place.
pub(crate) fn apply_derivative_symbol(grid: &Grid, coeffs: &mut [Complex64], order: u32) {
    for (slot, c) in coeffs.iter_mut().enumerate() {
        *c *= derivative_symbol(grid, slot, order);
    }
}

/// Spectral derivative of order 1 through 4.
pub fn spectral_derivative<F: Field>(f: &F, order: u32) -> Result<F> {
    if !(1..=4).contains(&order) {
        return Err(Error::UnsupportedOrder(order));
    }
    let mut coeffs = f.spectrum();
    apply_derivative_symbol(f.grid(), &mut coeffs, order);
    F::from_spectrum(f.grid(), &coeffs)
}

/// Second antiderivative with the `n = 0` mode of the result set to zero.
///
/// The integrand must have zero mean: `|f̂_0| ≤ MEAN_TOLERANCE·max_n |f̂_n|`.
pub fn spectral_double_antiderivative(f: &ComplexField) -> Result<ComplexField> {
    let grid = f.grid();
    let mut coeffs = f.spectrum();
    let peak = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mode0 = coeffs[0].norm();
    let limit = MEAN_TOLERANCE * peak;
    if mode0 > limit {
        return Err(Error::NonZeroMean { mode0, limit });
    }
    coeffs[0] = Complex64::new(0.0, 0.0);
    for (slot, c) in coeffs.iter_mut().enumerate().skip(1) {
        let k = grid.wavenumber(slot);
        *c = -*c / (k * k);
    }
    ComplexField::from_spectrum(grid, &coeffs)
}

/// Integral over the periodic box.
pub fn integrate<F: Field>(f: &F) -> F::Scalar {
    f.integral()
}

/// `‖a - b‖∞ / ‖b‖∞`, or the absolute difference when `b` vanishes.
pub fn relative_max_error(a: &ComplexField, b: &ComplexField) -> Result<f64> {
    let diff = a.max_abs_diff(b)?;
    let scale = b.max_abs();
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

/// Real-field counterpart of [`relative_max_error`].
pub fn relative_max_error_real(a: &RealField, b: &RealField) -> Result<f64> {
    let diff = a.max_abs_diff(b)?;
    let scale = b.max_abs();
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(l: f64, n: usize) -> Grid {
        Grid::new(l, n).unwrap()
    }

    #[test]
    fn grid_points_and_wavenumbers() {
        let g = grid(2.0 * PI, 8);
        let xs = g.points();
        for (j, x) in xs.iter().enumerate() {
            assert!((x - j as f64 * PI / 4.0).abs() < 1e-15);
        }
        let mut ks = g.wavenumbers();
        ks.sort_by(f64::total_cmp);
        let expected = [-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0];
        for (k, e) in ks.iter().zip(expected) {
            assert!((k - e).abs() < 1e-14);
        }

        let g = grid(1.0, 4);
        assert_eq!(g.spacing(), 0.25);
        let mut ks = g.wavenumbers();
        ks.sort_by(f64::total_cmp);
        for (k, e) in ks.iter().zip([-4.0 * PI, -2.0 * PI, 0.0, 2.0 * PI]) {
            assert!((k - e).abs() < 1e-14);
        }
        assert_eq!(g.wavenumber(g.nyquist_slot()), -4.0 * PI);
    }

    #[test]
    fn grid_rejects_bad_sizes() {
        assert!(matches!(Grid::new(2.0 * PI, 7), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(2.0 * PI, 2), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(0.0, 8), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(-1.0, 8), Err(Error::InvalidGrid(_))));
        assert!(matches!(Grid::new(f64::NAN, 8), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn slot_mapping_round_trips() {
        let g = grid(3.0, 16);
        for slot in 0..16 {
            assert_eq!(g.slot_of_mode(g.mode_number(slot)), Some(slot));
        }
        assert_eq!(g.slot_of_mode(8), None);
        assert_eq!(g.slot_of_mode(-8), Some(8));
    }

    #[test]
    fn params_must_be_positive() {
        assert!(PhysParams::new(1.0, 2.0).is_ok());
        assert!(PhysParams::new(0.0, 2.0).is_err());
        assert!(PhysParams::new(1.0, -2.0).is_err());
        assert!(PhysParams::new(f64::INFINITY, 2.0).is_err());
    }

    #[test]
    fn fields_reject_non_finite_and_wrong_length() {
        let g = grid(1.0, 4);
        assert_eq!(RealField::new(&g, vec![0.0, f64::NAN, 0.0, 0.0]), Err(Error::NonFinite(1)));
        assert!(RealField::new(&g, vec![0.0; 3]).is_err());
        let bad = vec![Complex64::new(0.0, f64::INFINITY); 4];
        assert_eq!(ComplexField::new(&g, bad), Err(Error::NonFinite(0)));
    }

    #[test]
    fn second_derivative_of_sine() {
        let g = grid(2.0 * PI, 64);
        let f = RealField::from_fn(&g, f64::sin).unwrap();
        let d2 = spectral_derivative(&f, 2).unwrap();
        let expected = RealField::from_fn(&g, |x| -x.sin()).unwrap();
        assert!(d2.max_abs_diff(&expected).unwrap() <= 1e-12);
    }

    #[test]
    fn first_derivative_of_plane_wave() {
        let g = grid(2.0 * PI, 32);
        let f = ComplexField::from_fn(&g, |x| Complex64::new(0.0, x).exp()).unwrap();
        let d1 = spectral_derivative(&f, 1).unwrap();
        let expected = f.scale(Complex64::i());
        assert!(d1.max_abs_diff(&expected).unwrap() <= 1e-13);
    }

    #[test]
    fn fourth_derivative_of_cosine() {
        let g = grid(2.0 * PI, 32);
        let f = RealField::from_fn(&g, |x| (2.0 * x).cos()).unwrap();
        let d4 = spectral_derivative(&f, 4).unwrap();
        let expected = RealField::from_fn(&g, |x| 16.0 * (2.0 * x).cos()).unwrap();
        assert!(d4.max_abs_diff(&expected).unwrap() <= 1e-10);
    }

    #[test]
    fn unsupported_orders_are_rejected() {
        let g = grid(1.0, 8);
        let f = RealField::zeros(&g);
        assert_eq!(spectral_derivative(&f, 0), Err(Error::UnsupportedOrder(0)));
        assert_eq!(spectral_derivative(&f, 5), Err(Error::UnsupportedOrder(5)));
    }

    #[test]
    fn nyquist_mode_has_no_first_derivative() {
        let g = grid(2.0 * PI, 8);
        // (-1)^j is the n = -N/2 mode
        let f = RealField::new(&g, (0..8).map(|j| if j % 2 == 0 { 1.0 } else { -1.0 }).collect()).unwrap();
        let d1 = spectral_derivative(&f, 1).unwrap();
        assert!(d1.max_abs() < 1e-15);
        let d2 = spectral_derivative(&f, 2).unwrap();
        assert!(d2.max_abs_diff(&f.scale(-16.0)).unwrap() < 1e-12);
    }

    #[test]
    fn double_antiderivative_examples() {
        let g = grid(2.0 * PI, 32);
        let f = ComplexField::from_fn(&g, |x| Complex64::new(-x.cos(), 0.0)).unwrap();
        let g2 = spectral_double_antiderivative(&f).unwrap();
        let expected = ComplexField::from_fn(&g, |x| Complex64::new(x.cos(), 0.0)).unwrap();
        assert!(g2.max_abs_diff(&expected).unwrap() < 1e-14);

        let f = ComplexField::from_fn(&g, |x| Complex64::new(0.0, 2.0 * x).exp()).unwrap();
        let g2 = spectral_double_antiderivative(&f).unwrap();
        let expected = f.scale(Complex64::new(-0.25, 0.0));
        assert!(g2.max_abs_diff(&expected).unwrap() < 1e-14);
    }

    #[test]
    fn double_antiderivative_rejects_mean() {
        let g = grid(2.0 * PI, 16);
        let f = ComplexField::from_fn(&g, |_| Complex64::new(1.0, 0.0)).unwrap();
        match spectral_double_antiderivative(&f) {
            Err(Error::NonZeroMean { mode0, .. }) => assert!((mode0 - 1.0).abs() < 1e-15),
            other => panic!("expected NonZeroMean, got {other:?}"),
        }
        // a zero field is trivially zero-mean
        assert!(spectral_double_antiderivative(&ComplexField::zeros(&g)).is_ok());
    }

    #[test]
    fn quadrature_examples() {
        let g = grid(2.0 * PI, 64);
        let one = RealField::constant(&g, 1.0).unwrap();
        assert!((integrate(&one) - 2.0 * PI).abs() < 1e-14);
        let c2 = RealField::from_fn(&g, |x| x.cos().powi(2)).unwrap();
        assert!((integrate(&c2) - PI).abs() <= 1e-13);
        let s = RealField::from_fn(&g, f64::sin).unwrap();
        assert!(integrate(&s).abs() <= 1e-14);
    }

    #[test]
    fn real_rebuild_detects_non_hermitian_spectrum() {
        let g = grid(2.0 * PI, 8);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 8];
        coeffs[1] = Complex64::new(1.0, 0.0);
        assert!(matches!(RealField::from_spectrum(&g, &coeffs), Err(Error::ImaginaryResidue { .. })));
    }
}
