//! Crate-wide error and result types.

use thiserror::Error;

/// Errors raised by construction, linear algebra, sampling, and protocol
/// bookkeeping. Numeric variants carry the measured deviation so callers
/// can tell boundary dust from genuine violations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside its documented range.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// An amplitude, entry, or coordinate was NaN or infinite.
    #[error("non-finite value in {context}")]
    NonFinite { context: &'static str },
    /// A state vector was not unit-norm.
    #[error("state norm deviates from 1 by {deviation:.3e}")]
    NotNormalized { deviation: f64 },
    /// Hilbert-space dimension outside {2, 4, 8, 16}.
    #[error("unsupported dimension {dim}: expected a power of two between 2 and 16")]
    UnsupportedDimension { dim: usize },
    /// A tensor product would exceed the supported dimension cap.
    #[error("dimension {dim} exceeds the supported maximum of {max}")]
    CapacityExceeded { dim: usize, max: usize },
    /// Two objects that must share a dimension did not.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    /// An operator expected to be Hermitian was not.
    #[error("operator deviates from Hermitian by {deviation:.3e}")]
    NotHermitian { deviation: f64 },
    /// An operator expected to be positive semidefinite was not.
    #[error("operator has eigenvalue {min_eigenvalue:.3e} below the PSD tolerance")]
    NotPositive { min_eigenvalue: f64 },
    /// POVM elements do not sum to the identity.
    #[error("POVM completeness defect {deviation:.3e} exceeds tolerance")]
    IncompletePovm { deviation: f64 },
    /// A density operator had the wrong trace.
    #[error("density-operator trace deviates from 1 by {deviation:.3e}")]
    InvalidTrace { deviation: f64 },
    /// Sampled outcome probabilities were inconsistent beyond tolerance.
    #[error("outcome probabilities sum to {total} instead of 1")]
    InconsistentProbabilities { total: f64 },
    /// The eigensolver failed to converge (valid Hermitian input never does).
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    /// A one-time pad was presented for a second use.
    #[error("one-time pad already consumed")]
    PadReused,
    /// A one-time pad shorter than the message it must cover.
    #[error("one-time pad of {pad} bytes cannot cover a {needed}-byte message")]
    PadTooShort { pad: usize, needed: usize },
    /// A classical message failed structural validation.
    #[error("malformed message: {0}")]
    MalformedMessage(String),
    /// A rejection-sampling loop exceeded its iteration cap.
    #[error("iteration cap of {cap} exceeded: conditioning event has vanishing probability")]
    IterationCapExceeded { cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
