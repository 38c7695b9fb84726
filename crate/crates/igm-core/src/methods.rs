//! The inverse-Gram prioritization methods.
//!
//! All four derive the priority vector from an inverse (or a bordered solve)
//! of a Gram flavor:
//!
//! * `pigm`  — normalized row sums of the inverse of the full Gram matrix.
//! * `nigm`  — normalized row sums of the inverse of the reduced Gram matrix
//!   shifted by `r`.
//! * `ligm`  — bordered solve returning the weights together with the
//!   constraint multiplier.
//! * `blankmeyer` — normalized row sums of the inverse of the unshifted
//!   reduced Gram matrix; fails on perfectly consistent input, which is the
//!   documented behavior of that legacy form.

use std::fmt;

use crate::error::{Error, Result};
use crate::gram::{gram_elementwise, lagrangian_gram, reduced_gram, shifted_gram, GramMatrix};
use crate::linalg::lu_factor;
use crate::prm::{PairwiseReciprocalMatrix, PriorityVector};
use crate::scalar::Real;

/// Which method produced a [`MethodResult`], with its shift where relevant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MethodLabel<T> {
    Pigm,
    Nigm { r: T },
    Ligm { r_tilde: T },
    Blankmeyer,
}

impl<T: Real> fmt::Display for MethodLabel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MethodLabel::Pigm => write!(f, "PIGM"),
            MethodLabel::Nigm { r } => write!(f, "NIGM({r})"),
            MethodLabel::Ligm { r_tilde } => write!(f, "LIGM({r_tilde})"),
            MethodLabel::Blankmeyer => write!(f, "Blankmeyer"),
        }
    }
}

/// Numerical caveats attached to a result instead of altering it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Diagnostic<T> {
    /// The factorization's reciprocal pivot growth fell below the warning
    /// level; the solution may carry amplified rounding error.
    IllConditioned { recip_pivot_growth: T },
    /// The closed form produced a weight that is not strictly positive. The
    /// raw value is kept; nothing is clamped.
    NonPositiveWeight { index: usize, value: T },
}

impl<T: Real> fmt::Display for Diagnostic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::IllConditioned { recip_pivot_growth } => write!(
                f,
                "ill-conditioned system (reciprocal pivot growth {recip_pivot_growth})"
            ),
            Diagnostic::NonPositiveWeight { index, value } => {
                write!(f, "weight {} is not strictly positive: {value}", index + 1)
            }
        }
    }
}

/// Priority vector plus provenance and diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult<T> {
    weights: PriorityVector<T>,
    method: MethodLabel<T>,
    diagnostics: Vec<Diagnostic<T>>,
}

impl<T: Real> MethodResult<T> {
    pub fn weights(&self) -> &PriorityVector<T> {
        &self.weights
    }

    pub fn method(&self) -> MethodLabel<T> {
        self.method
    }

    /// Constraint multiplier; present exactly when the method is `ligm`.
    pub fn multiplier(&self) -> Option<T> {
        self.weights.multiplier()
    }

    pub fn diagnostics(&self) -> &[Diagnostic<T>] {
        &self.diagnostics
    }
}

fn collect_diagnostics<T: Real>(recip_pivot_growth: T, weights: &[T]) -> Vec<Diagnostic<T>> {
    let mut out = Vec::new();
    if recip_pivot_growth < T::condition_warn() {
        out.push(Diagnostic::IllConditioned { recip_pivot_growth });
    }
    for (index, &value) in weights.iter().enumerate() {
        if value <= T::zero() {
            out.push(Diagnostic::NonPositiveWeight { index, value });
        }
    }
    out
}

/// Shared tail of the row-sum methods: invert, sum rows, normalize.
fn normalized_inverse_row_sums<T: Real>(
    gram: &GramMatrix<T>,
    method: MethodLabel<T>,
) -> Result<MethodResult<T>> {
    let factors = lu_factor(gram.matrix())?;
    let inverse = factors.inverse();
    let n = gram.order();
    let row_sums: Vec<T> = (0..n)
        .map(|i| inverse.row(i).iter().copied().sum())
        .collect();
    let weights = PriorityVector::normalized(row_sums)?;
    let diagnostics = collect_diagnostics(factors.recip_pivot_growth(), weights.weights());
    Ok(MethodResult {
        weights,
        method,
        diagnostics,
    })
}

/// Normalized row sums of the inverse of the full Gram matrix.
pub fn pigm<T: Real>(prm: &PairwiseReciprocalMatrix<T>) -> Result<MethodResult<T>> {
    normalized_inverse_row_sums(&gram_elementwise(prm), MethodLabel::Pigm)
}

/// Normalized row sums of the inverse of the reduced Gram matrix shifted by
/// `r`.
///
/// `r = 0` falls back to the unshifted reduced matrix, which is only valid on
/// inconsistent input; on consistent input that matrix is singular and the
/// call fails with [`Error::ZeroShiftOnConsistent`].
pub fn nigm<T: Real>(prm: &PairwiseReciprocalMatrix<T>, r: T) -> Result<MethodResult<T>> {
    let gram = if r == T::zero() {
        reduced_gram(prm)
    } else {
        shifted_gram(prm, r)?
    };
    normalized_inverse_row_sums(&gram, MethodLabel::Nigm { r }).map_err(|e| {
        if r == T::zero() && matches!(e, Error::SingularMatrix { .. }) {
            Error::ZeroShiftOnConsistent
        } else {
            e
        }
    })
}

/// Bordered solve: weights in the first `n` slots, constraint multiplier in
/// the last. The weights sum to one by construction of the bordered system
/// and do not depend on `r_tilde`; the multiplier does.
pub fn ligm<T: Real>(prm: &PairwiseReciprocalMatrix<T>, r_tilde: T) -> Result<MethodResult<T>> {
    let gram = lagrangian_gram(prm, r_tilde);
    let factors = lu_factor(gram.matrix())?;
    let n = prm.order();
    let mut rhs = vec![T::zero(); n + 1];
    rhs[n] = T::one();
    let mut solution = factors.solve(&rhs)?;
    let multiplier = solution.pop().expect("bordered system is non-empty");
    let diagnostics = collect_diagnostics(factors.recip_pivot_growth(), &solution);
    let weights = PriorityVector::with_multiplier(solution, multiplier)?;
    Ok(MethodResult {
        weights,
        method: MethodLabel::Ligm { r_tilde },
        diagnostics,
    })
}

/// The legacy closed form: normalized row sums of the inverse of the reduced
/// Gram matrix. Errors with [`Error::SingularMatrix`] on perfectly consistent
/// input.
pub fn blankmeyer<T: Real>(prm: &PairwiseReciprocalMatrix<T>) -> Result<MethodResult<T>> {
    normalized_inverse_row_sums(&reduced_gram(prm), MethodLabel::Blankmeyer)
}
