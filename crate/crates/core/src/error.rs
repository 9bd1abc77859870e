//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The requested dimension is not a prime number.
    #[error("dimension {0} is not prime")]
    CompositeDimension(u64),

    /// Zero has no multiplicative inverse.
    #[error("zero has no inverse mod {0}")]
    ZeroInverse(u32),

    /// A label lies outside `[0, d)`.
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: u64, dim: u32 },

    /// Two values live in different dimensions.
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(u32, u32),

    /// The operation is defined for odd primes only; d = 2 goes through the
    /// dedicated qubit constructors and decoders.
    #[error("operation not defined in qubit mode (d = 2)")]
    QubitModeUnsupported,

    /// A measurement basis failed its orthonormality check.
    #[error("basis is not orthonormal")]
    NonOrthonormalBasis,

    /// A round-1 control basis failed the conditional-decodability check.
    #[error("control basis failed the round-1 validity check")]
    InvalidControlBasis,

    /// Exact branch enumeration is capped to keep runtimes at desk scale.
    #[error("exact enumeration supports d <= {max}, got d = {dim}")]
    DimensionTooLarge { dim: u32, max: u32 },

    /// Unknown report format tag.
    #[error("unsupported report format `{0}`")]
    UnsupportedFormat(String),

    /// A control-basis file could not be parsed.
    #[error("malformed control-basis file: {0}")]
    MalformedBasisFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
