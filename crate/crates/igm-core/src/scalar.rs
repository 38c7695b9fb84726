//! Generic scalar abstraction for the numeric core.
//!
//! Everything numeric in this crate is written against [`Real`], so the same
//! code runs in `f32` and `f64`. The concrete aliases exported from the crate
//! root (`Prm64` and friends) fix `f64`, which is what the CLI and the
//! simulation harness use.

use std::fmt;
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssignOps};

/// Floating-point scalar usable by the matrix and prioritization code.
///
/// The associated tolerance functions exist because the validation thresholds
/// are precision-dependent: demanding `1e-12` relative reciprocity from `f32`
/// input would reject everything.
pub trait Real:
    Float + FromPrimitive + NumAssignOps + Sum + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    /// Relative tolerance when validating `a_ij * a_ji = 1` on external input.
    fn reciprocity_tol() -> Self;

    /// Absolute tolerance on the unit-sum invariant of a priority vector.
    fn weight_sum_tol() -> Self;

    /// A pivot below this fraction of the largest initial entry flags the
    /// matrix as singular during factorization.
    fn singular_pivot_rel() -> Self;

    /// Reciprocal pivot-growth level below which a factorization is reported
    /// as ill-conditioned (but still usable).
    fn condition_warn() -> Self;
}

impl Real for f64 {
    fn reciprocity_tol() -> Self {
        1e-12
    }
    fn weight_sum_tol() -> Self {
        1e-10
    }
    fn singular_pivot_rel() -> Self {
        1e-12
    }
    fn condition_warn() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn reciprocity_tol() -> Self {
        1e-5
    }
    fn weight_sum_tol() -> Self {
        1e-4
    }
    fn singular_pivot_rel() -> Self {
        1e-6
    }
    fn condition_warn() -> Self {
        1e-4
    }
}

/// Converts an `f64` literal into `T`. Only used for constants that are
/// exactly or near-exactly representable in every supported scalar type.
pub(crate) fn cast<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("constant must be representable")
}
