//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by validation, factorization, and the verification harness.
///
/// Index fields are 0-based for programmatic use; display output converts
/// them to the 1-based convention matrices are usually written in. Numeric
/// context is carried as `f64` regardless of the scalar type the operation
/// ran in; it is for display only.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix order {n} is too small, need at least 2")]
    OrderTooSmall { n: usize },

    #[error("entry ({},{}) = {value} is not strictly positive and finite", row + 1, col + 1)]
    NonPositiveEntry { row: usize, col: usize, value: f64 },

    #[error("entry ({},{}) is not finite", row + 1, col + 1)]
    NonFiniteEntry { row: usize, col: usize },

    #[error("reciprocity violated at ({},{}): the product with the mirrored entry is {product}, expected 1", row + 1, col + 1)]
    ReciprocityViolation {
        row: usize,
        col: usize,
        product: f64,
    },

    #[error("diagonal entry ({},{}) = {value}, expected 1", index + 1, index + 1)]
    BadDiagonal { index: usize, value: f64 },

    #[error("weight {} = {value} is not strictly positive", index + 1)]
    ZeroWeight { index: usize, value: f64 },

    #[error("weights sum to {sum}, expected 1")]
    WeightSumViolation { sum: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("no random-index value for order {n}; the table covers 3..=15")]
    UnsupportedOrder { n: usize },

    #[error("judgment scale is empty")]
    EmptyScale,

    #[error("judgment scale point {value} is invalid: {reason}")]
    InvalidScale { value: f64, reason: &'static str },

    #[error("matrix is singular (pivot {pivot:e} at step {step})")]
    SingularMatrix { step: usize, pivot: f64 },

    #[error("iteration did not converge within {iterations} steps")]
    NoConvergence { iterations: usize },

    #[error("shift r = 0 does not produce a shifted Gram matrix; use the reduced form instead")]
    ZeroShift,

    #[error(
        "shift r = 0 on a perfectly consistent matrix: the reduced Gram matrix is singular, \
         pick a nonzero r"
    )]
    ZeroShiftOnConsistent,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("optimizer could not produce a feasible point")]
    Infeasible,
}

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;
