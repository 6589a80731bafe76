use thiserror::Error;

/// Failure modes shared by every solver in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is rank deficient: rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("matrix is not positive definite: leading minor {minor} is not positive")]
    NotPositiveDefinite { minor: usize },
    #[error("component {index} is zero")]
    ZeroComponent { index: usize },
    #[error("precision must be positive")]
    NonPositivePrecision,
    #[error("enumeration dimension {dim} exceeds the guard {max}")]
    DimensionGuard { dim: usize, max: usize },
    #[error("input carries approximation error; use the logarithmic-distance entry point")]
    InexactInput,
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
