use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unsupported modulus N={0}: N must be odd and at least 3")]
    UnsupportedModulus(usize),

    #[error("parameter mismatch: N={left} vs N={right}")]
    ParamMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid exponent {0}")]
    InvalidExponent(f64),

    #[error("invalid tolerance {0}: expected a value in (0, 1)")]
    InvalidTolerance(f64),

    #[error("non-finite entry at index {0}")]
    NonFinite(usize),

    #[error("N^2 = {size} exceeds the materialization cap {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("invalid sampling grid: {0}")]
    InvalidGrid(&'static str),

    #[error("incompatible sampling grids")]
    IncompatibleGrids,
}
