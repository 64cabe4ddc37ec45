//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "matrix is not symmetric (max deviation {deviation:.3e} exceeds tolerance {tolerance:.3e})"
    )]
    NotSymmetric { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive definite (min eigenvalue {min_eigenvalue:.3e}, threshold {threshold:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64, threshold: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("matrix is singular: {0}")]
    Singular(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("non-finite entry in {0}")]
    NonFinite(String),

    #[error("right division undefined: divisor has a singular leading coefficient")]
    DivisionUndefined,

    #[error("polynomial is not monic")]
    NotMonic,

    #[error("invalid Jordan pair: {0}")]
    InvalidPair(String),

    #[error("invalid Jordan chain: leading vector is zero")]
    InvalidChain,

    #[error("degenerate weight: {0}")]
    DegenerateWeight(String),

    #[error("recurrence breaks down at index {index}: <R,R> is not positive definite")]
    RankDeficiency { index: usize },

    #[error("index {index} out of range (max {max})")]
    IndexOutOfRange { index: usize, max: usize },

    #[error(
        "node {node}: null space dimension {found} differs from cluster multiplicity {expected}"
    )]
    InconsistentMultiplicity {
        node: f64,
        expected: usize,
        found: usize,
    },

    #[error("eigenvalue cluster near {node} straddles the clustering tolerance (gap {gap:.3e})")]
    AmbiguousCluster { node: f64, gap: f64 },

    #[error("zero check failed at node {node}: |det P_n| = {det:.3e} exceeds {bound:.3e}")]
    NotAZero { node: f64, det: f64, bound: f64 },

    #[error("invalid interpolation data: {0}")]
    InvalidNodeData(String),

    #[error("inconsistent pair: division by (x - {node}) left residual {residual:.3e}")]
    InconsistentPair { node: f64, residual: f64 },

    #[error("kernel block at node {node} is not positive definite")]
    DegenerateKernel { node: f64 },

    #[error("oracle did not converge: estimate {estimate:.17e}, error estimate {error:.3e}")]
    OracleFailure { estimate: f64, error: f64 },

    #[error("derivatives of order {0} are not available for this function")]
    DerivativesUnavailable(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("document error: {0}")]
    Document(String),
}
