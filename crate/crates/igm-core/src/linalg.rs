//! Self-contained dense linear algebra: LU factorization with partial
//! pivoting, inversion, linear solves, and power iteration for the dominant
//! eigenvalue of a positive matrix.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{cast, Real};

/// Packed LU factorization with its pivot record.
///
/// `L` (unit diagonal, implicit) and `U` share `lu`; `pivots[k]` is the row
/// swapped with `k` at elimination step `k`.
#[derive(Debug, Clone)]
pub struct LuFactors<T> {
    lu: Matrix<T>,
    pivots: Vec<usize>,
    recip_pivot_growth: T,
}

/// Factorizes a square matrix, flagging it singular when a pivot falls below
/// `singular_pivot_rel()` times the largest entry of the input.
pub fn lu_factor<T: Real>(m: &Matrix<T>) -> Result<LuFactors<T>> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    m.ensure_finite()?;
    let n = m.rows();
    let scale = m.max_abs();
    let threshold = T::singular_pivot_rel() * scale;
    if scale == T::zero() {
        return Err(Error::SingularMatrix {
            step: 0,
            pivot: 0.0,
        });
    }

    let mut lu = m.clone();
    let mut pivots = vec![0usize; n];
    let mut min_pivot = T::infinity();

    for k in 0..n {
        let mut pivot_row = k;
        let mut pivot_mag = lu[(k, k)].abs();
        for i in (k + 1)..n {
            let mag = lu[(i, k)].abs();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = i;
            }
        }
        if pivot_mag < threshold {
            return Err(Error::SingularMatrix {
                step: k,
                pivot: pivot_mag.to_f64().unwrap_or(f64::NAN),
            });
        }
        pivots[k] = pivot_row;
        if pivot_row != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pivot_row, j)];
                lu[(pivot_row, j)] = tmp;
            }
        }
        min_pivot = min_pivot.min(pivot_mag);

        let pivot = lu[(k, k)];
        for i in (k + 1)..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            for j in (k + 1)..n {
                let sub = factor * lu[(k, j)];
                lu[(i, j)] -= sub;
            }
        }
    }

    Ok(LuFactors {
        lu,
        pivots,
        recip_pivot_growth: min_pivot / scale,
    })
}

impl<T: Real> LuFactors<T> {
    pub fn order(&self) -> usize {
        self.lu.rows()
    }

    /// Packed L\U storage, L below the unit diagonal.
    pub fn combined(&self) -> &Matrix<T> {
        &self.lu
    }

    /// Row swap applied at each elimination step.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Smallest pivot relative to the largest input entry; a rough
    /// conditioning signal (1 is perfect, near zero is nearly singular).
    pub fn recip_pivot_growth(&self) -> T {
        self.recip_pivot_growth
    }

    /// Solves `M x = rhs` by forward and back substitution.
    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>> {
        let n = self.order();
        if rhs.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: rhs.len(),
            });
        }
        let mut x = rhs.to_vec();
        for k in 0..n {
            x.swap(k, self.pivots[k]);
        }
        for i in 1..n {
            let mut acc = x[i];
            for (j, &xj) in x.iter().enumerate().take(i) {
                acc -= self.lu[(i, j)] * xj;
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for (j, &xj) in x.iter().enumerate().skip(i + 1) {
                acc -= self.lu[(i, j)] * xj;
            }
            x[i] = acc / self.lu[(i, i)];
        }
        Ok(x)
    }

    /// Inverse by solving against the identity columns of one factorization.
    pub fn inverse(&self) -> Matrix<T> {
        let n = self.order();
        let mut inv = Matrix::zeros(n, n);
        let mut e = vec![T::zero(); n];
        for col in 0..n {
            e[col] = T::one();
            let x = self.solve(&e).expect("rhs length matches factorization");
            for row in 0..n {
                inv[(row, col)] = x[row];
            }
            e[col] = T::zero();
        }
        inv
    }
}

/// Convenience: factorize and invert in one call.
pub fn invert<T: Real>(m: &Matrix<T>) -> Result<Matrix<T>> {
    Ok(lu_factor(m)?.inverse())
}

/// Convenience: factorize and solve in one call.
pub fn solve<T: Real>(m: &Matrix<T>, rhs: &[T]) -> Result<Vec<T>> {
    lu_factor(m)?.solve(rhs)
}

/// Power iteration for the dominant eigenpair of a matrix with strictly
/// positive entries, started from the uniform vector.
///
/// The eigenvalue estimate at each step is the total mass ratio of successive
/// iterates; iteration stops when consecutive estimates differ by less than
/// `tol`. The returned eigenvector is normalized to unit sum.
pub fn principal_eigen<T: Real>(m: &Matrix<T>, tol: T, max_iter: usize) -> Result<(T, Vec<T>)> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    for i in 0..n {
        for j in 0..n {
            let v = m[(i, j)];
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::NonPositiveEntry {
                    row: i,
                    col: j,
                    value: v.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
    }

    let mut x = vec![T::one() / cast::<T>(n as f64); n];
    let mut lambda_prev = T::zero();
    for iter in 1..=max_iter {
        let y = m.matvec(&x)?;
        let mass: T = y.iter().copied().sum();
        let lambda = mass; // x sums to one at every step
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = *yi / mass;
        }
        if iter > 1 && (lambda - lambda_prev).abs() < tol {
            return Ok((lambda, x));
        }
        lambda_prev = lambda;
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
    })
}
