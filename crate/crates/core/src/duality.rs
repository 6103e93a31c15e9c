//! Mappings between beam data and wave functions.
//!
//! * a Schrödinger initial value problem is a beam problem with complex data
//!   `u(0) = Ψ⁰`, `u̇(0) = ±(ib/a)Ψ⁰''`;
//! * any beam solution splits into `Ψ+ + Ψ-`, one solution of each conjugate
//!   Schrödinger-type equation;
//! * for real beam data the pair `(γ, v) = (u'', u̇)` and `ψ = bγ - iav` are in
//!   one-to-one correspondence, and `ψ` solves the Schrödinger equation.
//!
//! The displacement itself is not recoverable from `(γ, v)`: the rigid motion
//! (mean displacement and its drift) is lost.

use num_complex::Complex64;

use crate::error::Result;
use crate::fields::{
    spectral_derivative, spectral_double_antiderivative, ComplexField, Field, Grid, PhysParams, RealField,
};
use crate::propagators::{propagate_branch, BeamState, Branch};

/// Beam strain `γ = u''` and particle velocity `v = u̇`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrainState {
    pub gamma: RealField,
    pub v: RealField,
}

impl StrainState {
    pub fn new(gamma: RealField, v: RealField) -> Result<Self> {
        gamma.grid().ensure_same(v.grid())?;
        Ok(Self { gamma, v })
    }

    pub fn grid(&self) -> &Grid {
        self.gamma.grid()
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self { gamma: RealField::zeros(grid), v: RealField::zeros(grid) }
    }
}

/// Solutions of the two conjugate Schrödinger-type equations whose sum is a
/// beam displacement.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugatePair {
    pub psi_plus: ComplexField,
    pub psi_minus: ComplexField,
}

impl ConjugatePair {
    pub fn new(psi_plus: ComplexField, psi_minus: ComplexField) -> Result<Self> {
        psi_plus.grid().ensure_same(psi_minus.grid())?;
        Ok(Self { psi_plus, psi_minus })
    }

    /// Advances `Ψ+` under `S+` and `Ψ-` under `S-`.
    pub fn evolve(&self, t: f64, p: &PhysParams) -> Self {
        Self {
            psi_plus: propagate_branch(&self.psi_plus, Branch::Plus, t, p),
            psi_minus: propagate_branch(&self.psi_minus, Branch::Minus, t, p),
        }
    }
}

/// Complex beam initial data equivalent to the Schrödinger problem with `Ψ⁰`
/// on the given branch: `u⁰ = Ψ⁰`, `u̇⁰ = ±(ib/a)Ψ⁰''`.
pub fn beam_ic_from_wavefunction(psi0: &ComplexField, branch: Branch, p: &PhysParams) -> BeamState<ComplexField> {
    let d2 = spectral_derivative(psi0, 2).expect("order 2 is supported");
    let v0 = d2.scale(Complex64::new(0.0, branch.sign() * p.b() / p.a()));
    BeamState { u: psi0.clone(), v: v0 }
}

/// Initial data `(Ψ+⁰, Ψ-⁰)` of the conjugate pair reproducing the beam data.
///
/// `Ψ±⁰'' = (∓ia·u̇⁰ + b·u⁰'')/(2b)`, integrated twice with the mean mode of
/// both antiderivatives set to zero. The sum therefore reproduces `u⁰` minus
/// its mean. Fails with `NonZeroMean` unless `u̇⁰` has zero mean.
pub fn split_initial_data<F: Field>(s0: &BeamState<F>, p: &PhysParams) -> Result<ConjugatePair> {
    let u = s0.u.to_complex();
    let v = s0.v.to_complex();
    let u_xx = spectral_derivative(&u, 2)?;
    let rhs = |branch: Branch| {
        let ia = Complex64::new(0.0, -branch.sign() * p.a());
        v.zip_map(&u_xx, |vel, curv| (ia * vel + p.b() * curv) / (2.0 * p.b()))
    };
    let psi_plus = spectral_double_antiderivative(&rhs(Branch::Plus)?)?;
    let psi_minus = spectral_double_antiderivative(&rhs(Branch::Minus)?)?;
    Ok(ConjugatePair { psi_plus, psi_minus })
}

/// `u = Ψ+ + Ψ-`.
pub fn superpose(pair: &ConjugatePair) -> Result<ComplexField> {
    pair.psi_plus.zip_map(&pair.psi_minus, |a, b| a + b)
}

/// Real beam state `(2 Re Ψ+, -(2b/a) Im Ψ+'')` from the `+` member of a pair
/// built from real data.
pub fn real_state_from_psi_plus(psi_plus: &ComplexField, p: &PhysParams) -> BeamState<RealField> {
    let d2 = spectral_derivative(psi_plus, 2).expect("order 2 is supported");
    BeamState { u: psi_plus.re().scale(2.0), v: d2.im().scale(-2.0 * p.b() / p.a()) }
}

/// `ψ = bγ - iav`.
pub fn wavefunction_from_state(s: &StrainState, p: &PhysParams) -> ComplexField {
    ComplexField::from_parts(&s.gamma.scale(p.b()), &s.v.scale(-p.a())).expect("strain state fields share one grid")
}

/// Inverse of [`wavefunction_from_state`]: `γ = Re ψ / b`, `v = -Im ψ / a`.
pub fn state_from_wavefunction(psi: &ComplexField, p: &PhysParams) -> StrainState {
    StrainState { gamma: psi.re().scale(1.0 / p.b()), v: psi.im().scale(-1.0 / p.a()) }
}

/// `(γ, v) = (u'', u̇)` of a real beam state.
pub fn strain_velocity(s: &BeamState<RealField>) -> StrainState {
    StrainState { gamma: spectral_derivative(&s.u, 2).expect("order 2 is supported"), v: s.v.clone() }
}
