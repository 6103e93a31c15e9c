//! Spectral toolkit for the correspondence between the free Euler-Bernoulli
//! beam `a²ü + b²u'''' = 0` and the free Schrödinger equation
//! `i a ψ̇ + b ψ'' = 0` on a periodic box.
//!
//! Solutions are related through the strain-velocity map `ψ = bγ - iav`,
//! under which the mechanical energy density and the probability density
//! satisfy `ρ = 2λE`.

pub mod duality;
pub mod energetics;
pub mod error;
pub mod fields;
pub mod propagators;
pub mod scenarios;
pub mod timesteppers;

pub use duality::{ConjugatePair, StrainState};
pub use error::{Error, Result};
pub use fields::{ComplexField, Field, Grid, PhysParams, RealField};
pub use propagators::{BeamState, Branch};
