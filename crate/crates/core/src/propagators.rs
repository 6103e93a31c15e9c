//! Dispersion laws, the factorization of the beam operator into the two
//! Schrödinger-type operators, and exact per-mode propagation.
//!
//! Both equations share the frequency `ω(k) = (b/a)k²`. The `+` branch
//! `i a ψ̇ + b ψ'' = 0` advances every mode by `exp(-iωt)`, the conjugate
//! branch by `exp(+iωt)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{ComplexField, Field, Grid, PhysParams};

/// One of the two complex-conjugate Schrödinger-type operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// `S+ = i a ∂t + b ∂xx`
    Plus,
    /// `S- = -i a ∂t + b ∂xx`
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn conjugate(self) -> Self {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

/// Plane-wave frequencies of a single wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSymbols {
    pub k: f64,
    pub schrodinger: f64,
    pub beam: f64,
}

impl ModeSymbols {
    pub fn new(k: f64, p: &PhysParams) -> Self {
        Self { k, schrodinger: dispersion_schrodinger(k, p), beam: dispersion_beam(k, p) }
    }
}

/// `Ω = b k²/a` for `exp(i(kx - Ωt))` solving `i a ψ̇ + b ψ'' = 0`.
pub fn dispersion_schrodinger(k: f64, p: &PhysParams) -> f64 {
    p.b() * k * k / p.a()
}

/// Principal branch `ω = (b/a)k²` of `a²ω² = b²k⁴`.
///
/// Evaluated with the same expression as [`dispersion_schrodinger`] so that
/// both propagators see bit-identical phases.
pub fn dispersion_beam(k: f64, p: &PhysParams) -> f64 {
    p.b() * k * k / p.a()
}

/// Symbol of `S±` on `exp(i(kx - Ωt))`: `±i a (-iΩ) + b (ik)²`.
pub fn schrodinger_symbol(branch: Branch, k: f64, omega: f64, p: &PhysParams) -> Complex64 {
    let i = Complex64::i();
    let dt = -i * omega;
    let dxx = (i * k).powu(2);
    branch.sign() * i * p.a() * dt + p.b() * dxx
}

/// Symbol of `B = a² ∂tt + b² ∂xxxx` on `exp(i(kx - Ωt))`.
pub fn beam_symbol(k: f64, omega: f64, p: &PhysParams) -> Complex64 {
    let i = Complex64::i();
    let dtt = (-i * omega).powu(2);
    let dxxxx = (i * k).powu(4);
    p.a() * p.a() * dtt + p.b() * p.b() * dxxxx
}

/// `S+(k,Ω)·S-(k,Ω) - B(k,Ω)`, identically zero.
pub fn factorization_residual(k: f64, omega: f64, p: &PhysParams) -> Complex64 {
    schrodinger_symbol(Branch::Plus, k, omega, p) * schrodinger_symbol(Branch::Minus, k, omega, p)
        - beam_symbol(k, omega, p)
}

/// Exact evolution under the given Schrödinger branch, for any real `t`.
pub fn propagate_branch(psi0: &ComplexField, branch: Branch, t: f64, p: &PhysParams) -> ComplexField {
    if t == 0.0 {
        return psi0.clone();
    }
    let grid = psi0.grid();
    let mut coeffs = psi0.spectrum();
    for (slot, c) in coeffs.iter_mut().enumerate() {
        let omega = dispersion_schrodinger(grid.wavenumber(slot), p);
        *c *= Complex64::from_polar(1.0, -branch.sign() * omega * t);
    }
    ComplexField::from_spectrum(grid, &coeffs).expect("unitary phase keeps samples finite")
}

/// Exact evolution under `i a ψ̇ + b ψ'' = 0`.
pub fn propagate_schrodinger(psi0: &ComplexField, t: f64, p: &PhysParams) -> ComplexField {
    propagate_branch(psi0, Branch::Plus, t, p)
}

/// Displacement and particle velocity of a beam.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamState<F> {
    pub u: F,
    pub v: F,
}

impl<F: Field> BeamState<F> {
    pub fn new(u: F, v: F) -> Result<Self> {
        u.grid().ensure_same(v.grid())?;
        Ok(Self { u, v })
    }

    pub fn grid(&self) -> &Grid {
        self.u.grid()
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self { u: F::zeros(grid), v: F::zeros(grid) }
    }
}

/// Exact solution of `a²ü + b²u'''' = 0` by per-mode harmonic oscillators.
///
/// Mode `n = 0` drifts linearly; every other mode has `ω_n = (b/a)k_n² > 0`.
pub fn propagate_beam<F: Field>(s0: &BeamState<F>, t: f64, p: &PhysParams) -> BeamState<F> {
    if t == 0.0 {
        return s0.clone();
    }
    let grid = s0.grid();
    let mut u_hat = s0.u.spectrum();
    let mut v_hat = s0.v.spectrum();
    for (slot, (u, v)) in u_hat.iter_mut().zip(v_hat.iter_mut()).enumerate() {
        let omega = dispersion_beam(grid.wavenumber(slot), p);
        let (u0, v0) = (*u, *v);
        if slot == 0 {
            *u = u0 + v0 * t;
        } else {
            let (sin, cos) = (omega * t).sin_cos();
            *u = u0 * cos + v0 * (sin / omega);
            *v = -u0 * (omega * sin) + v0 * cos;
        }
    }
    BeamState {
        u: F::from_spectrum(grid, &u_hat).expect("beam propagation preserves spectral symmetry"),
        v: F::from_spectrum(grid, &v_hat).expect("beam propagation preserves spectral symmetry"),
    }
}

/// Checks that `t` is a usable evolution time.
pub fn check_time(t: f64) -> Result<f64> {
    if t.is_finite() {
        Ok(t)
    } else {
        Err(Error::InvalidParameter { name: "t", reason: format!("must be finite, got {t}") })
    }
}
