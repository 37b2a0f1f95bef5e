use thiserror::Error;

/// Errors raised by the exterior-algebra and invariant routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected n = {expected}, found n = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degree error: {0}")]
    Degree(String),

    #[error("invalid multi-index {indices:?} for dimension {n}")]
    InvalidIndex { indices: Vec<usize>, n: usize },

    #[error("linear map is singular")]
    Singular,

    #[error("group element must have positive determinant")]
    NotOrientationPreserving,

    #[error("volume form scale must be nonzero")]
    ZeroVolume,

    #[error("inner product matrix must be symmetric positive definite")]
    NotPositiveDefinite,

    #[error("no witness by this construction: {0}")]
    NoWitness(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
