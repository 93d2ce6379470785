use thiserror::Error;

/// Error type shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("operation is undefined for the zero ideal")]
    ZeroIdeal,

    #[error("operation is undefined for the unit ideal")]
    UnitIdeal,

    #[error("operation is undefined for the zero exponent vector")]
    ZeroVector,

    #[error("exponent arithmetic overflow")]
    Overflow,

    #[error("ideal is not stable")]
    NotStable,

    #[error("ideal is not a complete intersection")]
    NotCompleteIntersection,

    #[error("ideal is not equigenerated")]
    NotEquigenerated,

    #[error("Betti table has the wrong convention for this operation")]
    WrongConvention,

    #[error("invalid block data: {0}")]
    InvalidBlocks(String),

    #[error("invalid family specification: {0}")]
    InvalidFamilySpec(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("computation too large: {0}")]
    TooLarge(String),

    #[error("fast path disagrees with homology path: {0}")]
    FastPathMismatch(String),

    #[error("{0} must be a prime (got {1})")]
    NotPrime(&'static str, u64),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
