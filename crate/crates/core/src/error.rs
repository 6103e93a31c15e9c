use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite sample at index {0}")]
    NonFinite(usize),

    #[error("unsupported derivative order {0}, expected 1..=4")]
    UnsupportedOrder(u32),

    #[error("integrand has non-zero mean: |f_0| = {mode0:e} exceeds {limit:e}")]
    NonZeroMean { mode0: f64, limit: f64 },

    #[error("spectrum is not Hermitian: imaginary residue {residue:e} exceeds {limit:e}")]
    ImaginaryResidue { residue: f64, limit: f64 },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("wave function is identically zero")]
    ZeroWaveFunction,

    #[error("packet too wide: needs {required} length units but the box is {length}")]
    PacketTooWide { required: f64, length: f64 },

    #[error("density is not normalized: integral = {0}")]
    NotNormalized(f64),

    #[error("integration blew up at t = {time} (norm grew by {growth:e})")]
    BlowUp { time: f64, growth: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
