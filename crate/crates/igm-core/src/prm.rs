//! Pairwise reciprocal matrices, judgment scales, priority vectors, and
//! consistency diagnostics.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::Matrix;
use crate::scalar::{cast, Real};

/// Validated square matrix of positive ratio judgments with unit diagonal and
/// `a_ij * a_ji = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseReciprocalMatrix<T> {
    entries: Matrix<T>,
}

/// Normalized weight vector, optionally carrying the multiplier of the
/// weight-sum constraint when it was produced by the bordered solve.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorityVector<T> {
    weights: Vec<T>,
    multiplier: Option<T>,
}

/// Discrete set of admissible ratio judgments, closed under reciprocals.
#[derive(Debug, Clone, PartialEq)]
pub struct JudgmentScale<T> {
    points: Vec<T>,
}

/// Principal-eigenvalue consistency diagnostics.
///
/// `cr` is `None` when the order falls outside the random-index table
/// (3..=15).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyReport<T> {
    pub lambda_max: T,
    pub ci: T,
    pub cr: Option<T>,
}

/// Random-index values for orders 3 through 15 (Saaty's table).
const RANDOM_INDEX: [f64; 13] = [
    0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49, 1.51, 1.48, 1.56, 1.57, 1.59,
];

/// Random index for order `n`; errors outside the tabulated range.
pub fn random_index<T: Real>(n: usize) -> Result<T> {
    if !(3..=15).contains(&n) {
        return Err(Error::UnsupportedOrder { n });
    }
    Ok(cast(RANDOM_INDEX[n - 3]))
}

impl<T: Real> JudgmentScale<T> {
    /// The z-point scale `{1/z, ..., 1/2, 1, 2, ..., z}` in ascending order.
    pub fn z_point(z: u32) -> Result<Self> {
        if z == 0 {
            return Err(Error::EmptyScale);
        }
        let mut points = Vec::with_capacity(2 * z as usize - 1);
        for k in (2..=z).rev() {
            points.push(T::one() / cast::<T>(f64::from(k)));
        }
        points.push(T::one());
        for k in 2..=z {
            points.push(cast::<T>(f64::from(k)));
        }
        Ok(Self { points })
    }

    /// Validates an arbitrary point set: positive, finite, contains 1, and
    /// closed under reciprocals (up to the scalar's reciprocity tolerance).
    pub fn new(points: Vec<T>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptyScale);
        }
        let tol = T::reciprocity_tol();
        for &p in &points {
            if !(p.is_finite() && p > T::zero()) {
                return Err(Error::InvalidScale {
                    value: p.to_f64().unwrap_or(f64::NAN),
                    reason: "points must be positive and finite",
                });
            }
            let recip = p.recip();
            let closed = points.iter().any(|&q| ((q - recip) / recip).abs() <= tol);
            if !closed {
                return Err(Error::InvalidScale {
                    value: p.to_f64().unwrap_or(f64::NAN),
                    reason: "scale is not closed under reciprocals",
                });
            }
        }
        if !points.iter().any(|&p| p == T::one()) {
            return Err(Error::InvalidScale {
                value: 1.0,
                reason: "scale must contain 1",
            });
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

impl<T: Real> PriorityVector<T> {
    /// Validates that weights are finite and sum to one.
    pub fn new(weights: Vec<T>) -> Result<Self> {
        Self::build(weights, None)
    }

    /// As [`PriorityVector::new`], attaching the constraint multiplier.
    pub fn with_multiplier(weights: Vec<T>, multiplier: T) -> Result<Self> {
        Self::build(weights, Some(multiplier))
    }

    /// Rescales an arbitrary vector to unit sum. The sum must be finite and
    /// nonzero; components keep their signs.
    pub fn normalized(raw: Vec<T>) -> Result<Self> {
        let sum: T = raw.iter().copied().sum();
        if !sum.is_finite() || sum == T::zero() {
            return Err(Error::WeightSumViolation {
                sum: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        Self::build(raw.into_iter().map(|w| w / sum).collect(), None)
    }

    pub fn uniform(n: usize) -> Self {
        let w = T::one() / cast::<T>(n as f64);
        Self {
            weights: vec![w; n],
            multiplier: None,
        }
    }

    fn build(weights: Vec<T>, multiplier: Option<T>) -> Result<Self> {
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFiniteEntry { row: i, col: 0 });
            }
        }
        let sum: T = weights.iter().copied().sum();
        if (sum - T::one()).abs() > T::weight_sum_tol() {
            return Err(Error::WeightSumViolation {
                sum: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            weights,
            multiplier,
        })
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn multiplier(&self) -> Option<T> {
        self.multiplier
    }

    pub fn sum(&self) -> T {
        self.weights.iter().copied().sum()
    }
}

impl<T: Real> PairwiseReciprocalMatrix<T> {
    /// Validates a raw square matrix as a pairwise reciprocal matrix.
    ///
    /// Entries are taken over unchanged; nothing is re-derived from the upper
    /// triangle.
    pub fn validate(raw: Matrix<T>) -> Result<Self> {
        if !raw.is_square() {
            return Err(Error::NonSquare {
                rows: raw.rows(),
                cols: raw.cols(),
            });
        }
        let n = raw.rows();
        if n < 2 {
            return Err(Error::OrderTooSmall { n });
        }
        for i in 0..n {
            for j in 0..n {
                let a = raw[(i, j)];
                if !(a.is_finite() && a > T::zero()) {
                    return Err(Error::NonPositiveEntry {
                        row: i,
                        col: j,
                        value: a.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        for i in 0..n {
            if raw[(i, i)] != T::one() {
                return Err(Error::BadDiagonal {
                    index: i,
                    value: raw[(i, i)].to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        let tol = T::reciprocity_tol();
        for i in 0..n {
            for j in (i + 1)..n {
                let product = raw[(i, j)] * raw[(j, i)];
                if (product - T::one()).abs() > tol {
                    return Err(Error::ReciprocityViolation {
                        row: j,
                        col: i,
                        product: product.to_f64().unwrap_or(f64::NAN),
                    });
                }
            }
        }
        Ok(Self { entries: raw })
    }

    /// The perfectly consistent matrix `a_ij = w_i / w_j`.
    pub fn ideal(w: &PriorityVector<T>) -> Result<Self> {
        for (i, &wi) in w.weights().iter().enumerate() {
            if !(wi.is_finite() && wi > T::zero()) {
                return Err(Error::ZeroWeight {
                    index: i,
                    value: wi.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        let n = w.len();
        if n < 2 {
            return Err(Error::OrderTooSmall { n });
        }
        let ws = w.weights();
        let entries = Matrix::from_fn(n, n, |i, j| ws[i] / ws[j]);
        Ok(Self { entries })
    }

    /// Draws each upper-triangle judgment uniformly from the scale and fills
    /// the lower triangle with exact reciprocals. Deterministic per seed.
    pub fn random(n: usize, scale: &JudgmentScale<T>, seed: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::OrderTooSmall { n });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut entries = Matrix::identity(n);
        for i in 0..n {
            for j in (i + 1)..n {
                let p = scale.points()[rng.random_range(0..scale.len())];
                entries[(i, j)] = p;
                entries[(j, i)] = p.recip();
            }
        }
        Ok(Self { entries })
    }

    pub fn order(&self) -> usize {
        self.entries.rows()
    }

    pub fn entries(&self) -> &Matrix<T> {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.entries[(i, j)]
    }

    /// Total squared residual of the weighted-difference equations,
    /// `sum_ij (w_i - a_ij w_j)^2`.
    pub fn wls_objective(&self, w: &PriorityVector<T>) -> Result<T> {
        if w.len() != self.order() {
            return Err(Error::DimensionMismatch {
                expected: self.order(),
                got: w.len(),
            });
        }
        Ok(self.objective_unchecked(w.weights()))
    }

    /// Same objective on a raw slice; used by the optimizer and the
    /// finite-difference check, which evaluate off the unit-sum surface.
    pub(crate) fn objective_unchecked(&self, w: &[T]) -> T {
        let n = self.order();
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                let d = w[i] - self.entries[(i, j)] * w[j];
                acc += d * d;
            }
        }
        acc
    }

    /// Principal-eigenvalue consistency diagnostics.
    ///
    /// `ci = (lambda_max - n) / (n - 1)`; `cr = ci / RI(n)` when the order is
    /// covered by the random-index table.
    pub fn consistency(&self) -> Result<ConsistencyReport<T>> {
        let n = self.order();
        let (lambda_max, _) = linalg::principal_eigen(&self.entries, cast(1e-10), 10_000)?;
        let ci = (lambda_max - cast(n as f64)) / cast((n - 1) as f64);
        let cr = random_index::<T>(n).ok().map(|ri| ci / ri);
        Ok(ConsistencyReport { lambda_max, ci, cr })
    }
}
