use thiserror::Error;

/// Crate-wide error type. CLI exit codes are derived from these variants.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("zero polynomial has no root profile")]
    ZeroPolynomial,

    #[error("index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("{what} capped at {limit}, got {got}")]
    SizeCap {
        what: &'static str,
        limit: usize,
        got: usize,
    },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("no generating direction: A^T e = 1 is inconsistent (residual {residual:.3e})")]
    InconsistentSystem { residual: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("negative coefficient at exponent {0:?}")]
    NegativeCoefficient(Vec<u32>),

    #[error("eigensolver failed to converge")]
    EigenFailure,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cone sampling failed: {0}")]
    ConeSampling(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
