//! Design matrix construction and the four Gram-matrix flavors.
//!
//! The reduced form is the shared base: every entry of the other flavors is
//! derived from it by adding a constant or appending the constraint border,
//! so the elementwise relations between flavors hold bitwise.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::prm::PairwiseReciprocalMatrix;
use crate::scalar::Real;

/// Coefficient matrix of the stacked weighted-difference equations plus the
/// unit-sum row: `n(n-1) + 1` rows by `n` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix<T> {
    n: usize,
    matrix: Matrix<T>,
}

/// Which Gram form a [`GramMatrix`] holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GramFlavor<T> {
    /// All design rows including the unit-sum row.
    Full,
    /// The equation rows only.
    Reduced,
    /// Reduced plus a constant `r` on every entry.
    Shifted { r: T },
    /// Reduced plus `r_tilde`, bordered by the constraint row and column.
    Bordered { r_tilde: T },
}

/// Symmetric Gram matrix in one of the four flavors.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix<T> {
    flavor: GramFlavor<T>,
    matrix: Matrix<T>,
}

impl<T: Real> DesignMatrix<T> {
    /// Canonical construction: for each pair `i < j`, first the row with `+1`
    /// in column `i` and `-a_ij` in column `j`, then the row with `-a_ji` in
    /// column `i` and `+1` in column `j`; the all-ones row comes last.
    pub fn build(prm: &PairwiseReciprocalMatrix<T>) -> Self {
        let n = prm.order();
        let mut matrix = Matrix::zeros(n * (n - 1) + 1, n);
        let mut k = 0;
        for i in 0..n {
            for j in (i + 1)..n {
                matrix[(k, i)] = T::one();
                matrix[(k, j)] = -prm.get(i, j);
                k += 1;
                matrix[(k, i)] = -prm.get(j, i);
                matrix[(k, j)] = T::one();
                k += 1;
            }
        }
        for j in 0..n {
            matrix[(k, j)] = T::one();
        }
        Self { n, matrix }
    }

    /// Accepts any row arrangement that satisfies the structural invariants:
    /// each equation row has exactly one `+1` and one negative entry in
    /// distinct columns, and the final row is all ones.
    pub fn from_matrix(matrix: Matrix<T>) -> Result<Self> {
        let n = matrix.cols();
        if n < 2 || matrix.rows() != n * (n - 1) + 1 {
            return Err(Error::DimensionMismatch {
                expected: n * (n - 1) + 1,
                got: matrix.rows(),
            });
        }
        for k in 0..n * (n - 1) {
            let row = matrix.row(k);
            let ones = row.iter().filter(|&&x| x == T::one()).count();
            let negatives = row.iter().filter(|&&x| x < T::zero()).count();
            let zeros = row.iter().filter(|&&x| x == T::zero()).count();
            if ones != 1 || negatives != 1 || zeros != n - 2 {
                return Err(Error::InvalidConfig(format!(
                    "design row {k} is not a weighted-difference equation"
                )));
            }
        }
        if matrix.row(n * (n - 1)).iter().any(|&x| x != T::one()) {
            return Err(Error::InvalidConfig(
                "last design row must be all ones".to_string(),
            ));
        }
        Ok(Self { n, matrix })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row_count(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    /// The equation rows, without the unit-sum row.
    pub fn reduced(&self) -> Matrix<T> {
        let rows: Vec<Vec<T>> = (0..self.n * (self.n - 1))
            .map(|k| self.matrix.row(k).to_vec())
            .collect();
        Matrix::from_rows(&rows)
    }
}

impl<T: Real> GramMatrix<T> {
    pub fn flavor(&self) -> GramFlavor<T> {
        self.flavor
    }

    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.matrix[(i, j)]
    }
}

/// Cross product of the design rows: `D^T D` with the unit-sum row, or the
/// reduced form without it.
///
/// Each entry's addends are summed in value order, so any permutation of the
/// equation rows produces the identical matrix.
pub fn gram_from_design<T: Real>(d: &DesignMatrix<T>, include_unity_row: bool) -> GramMatrix<T> {
    let n = d.n();
    let rows = if include_unity_row {
        d.row_count()
    } else {
        d.row_count() - 1
    };
    let m = d.matrix();
    let mut out = Matrix::zeros(n, n);
    let mut terms: Vec<T> = Vec::with_capacity(rows);
    for i in 0..n {
        for j in i..n {
            terms.clear();
            for k in 0..rows {
                let p = m[(k, i)] * m[(k, j)];
                if p != T::zero() {
                    terms.push(p);
                }
            }
            terms.sort_by(|a, b| a.partial_cmp(b).expect("finite products"));
            let value = terms.iter().copied().fold(T::zero(), |acc, t| acc + t);
            out[(i, j)] = value;
            out[(j, i)] = value;
        }
    }
    GramMatrix {
        flavor: if include_unity_row {
            GramFlavor::Full
        } else {
            GramFlavor::Reduced
        },
        matrix: out,
    }
}

/// Entries of the reduced Gram matrix, straight from the judgments:
/// `(n-1) + sum_{k != j} a_kj^2` on the diagonal and `-a_ij - a_ji` off it.
fn reduced_entries<T: Real>(prm: &PairwiseReciprocalMatrix<T>) -> Matrix<T> {
    let n = prm.order();
    let mut out = Matrix::zeros(n, n);
    for j in 0..n {
        let mut acc = T::from_usize(n - 1).expect("small integer");
        for k in 0..n {
            if k != j {
                let a = prm.get(k, j);
                acc += a * a;
            }
        }
        out[(j, j)] = acc;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let v = -prm.get(i, j) - prm.get(j, i);
            out[(i, j)] = v;
            out[(j, i)] = v;
        }
    }
    out
}

/// Full Gram matrix built directly from the judgments, without touching the
/// design-matrix path.
pub fn gram_elementwise<T: Real>(prm: &PairwiseReciprocalMatrix<T>) -> GramMatrix<T> {
    let mut matrix = reduced_entries(prm);
    let n = matrix.rows();
    for i in 0..n {
        for j in 0..n {
            matrix[(i, j)] += T::one();
        }
    }
    GramMatrix {
        flavor: GramFlavor::Full,
        matrix,
    }
}

/// Reduced Gram matrix (the quadratic-form kernel of the objective). Singular
/// whenever the input is perfectly consistent.
pub fn reduced_gram<T: Real>(prm: &PairwiseReciprocalMatrix<T>) -> GramMatrix<T> {
    GramMatrix {
        flavor: GramFlavor::Reduced,
        matrix: reduced_entries(prm),
    }
}

/// Reduced Gram matrix plus a nonzero constant `r` on every entry.
pub fn shifted_gram<T: Real>(prm: &PairwiseReciprocalMatrix<T>, r: T) -> Result<GramMatrix<T>> {
    if r == T::zero() {
        return Err(Error::ZeroShift);
    }
    let mut matrix = reduced_entries(prm);
    let n = matrix.rows();
    for i in 0..n {
        for j in 0..n {
            matrix[(i, j)] += r;
        }
    }
    Ok(GramMatrix {
        flavor: GramFlavor::Shifted { r },
        matrix,
    })
}

/// Bordered system matrix of order `n + 1`: reduced-plus-`r_tilde` block,
/// ones along the border, zero in the corner. Any real `r_tilde` is allowed.
pub fn lagrangian_gram<T: Real>(prm: &PairwiseReciprocalMatrix<T>, r_tilde: T) -> GramMatrix<T> {
    let n = prm.order();
    let base = reduced_entries(prm);
    let mut matrix = Matrix::zeros(n + 1, n + 1);
    for i in 0..n {
        for j in 0..n {
            matrix[(i, j)] = base[(i, j)] + r_tilde;
        }
        matrix[(i, n)] = T::one();
        matrix[(n, i)] = T::one();
    }
    GramMatrix {
        flavor: GramFlavor::Bordered { r_tilde },
        matrix,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{a1, a2};
    use crate::matrix::Matrix;
    use crate::prm::{JudgmentScale, PairwiseReciprocalMatrix};

    #[test]
    fn design_matrix_of_the_consistent_example() {
        let d = DesignMatrix::build(&a1());
        assert_eq!(d.row_count(), 13);
        assert_eq!(d.n(), 4);
        let expected = Matrix::from_rows(&[
            vec![1.0, -2.0, 0.0, 0.0],
            vec![-0.5, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, -4.0, 0.0],
            vec![-0.25, 0.0, 1.0, 0.0],
            vec![1.0, 0.0, 0.0, -8.0],
            vec![-0.125, 0.0, 0.0, 1.0],
            vec![0.0, 1.0, -2.0, 0.0],
            vec![0.0, -0.5, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, -4.0],
            vec![0.0, -0.25, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, -2.0],
            vec![0.0, 0.0, -0.5, 1.0],
            vec![1.0, 1.0, 1.0, 1.0],
        ]);
        assert_eq!(d.matrix(), &expected);
    }

    #[test]
    fn design_matrix_smallest_case() {
        let m = Matrix::from_rows(&[vec![1.0, 3.0], vec![1.0 / 3.0, 1.0]]);
        let prm = PairwiseReciprocalMatrix::validate(m).unwrap();
        let d = DesignMatrix::build(&prm);
        let expected = Matrix::from_rows(&[vec![1.0, -3.0], vec![-1.0 / 3.0, 1.0], vec![1.0, 1.0]]);
        assert_eq!(d.matrix(), &expected);
    }

    #[test]
    fn design_matrix_row_count() {
        let s = JudgmentScale::<f64>::z_point(9).unwrap();
        for n in 2..=15 {
            let prm = PairwiseReciprocalMatrix::random(n, &s, n as u64).unwrap();
            assert_eq!(DesignMatrix::build(&prm).row_count(), n * (n - 1) + 1);
        }
    }

    #[test]
    fn from_matrix_validates_structure() {
        let d = DesignMatrix::build(&a1());
        assert!(DesignMatrix::from_matrix(d.matrix().clone()).is_ok());

        let mut bad = d.matrix().clone();
        bad[(0, 2)] = 0.5;
        assert!(DesignMatrix::from_matrix(bad).is_err());

        let mut bad = d.matrix().clone();
        bad[(12, 0)] = 2.0;
        assert!(DesignMatrix::from_matrix(bad).is_err());
    }

    #[test]
    fn gram_from_design_matches_published_values() {
        let g = gram_from_design(&DesignMatrix::build(&a1()), true);
        assert_eq!(g.get(0, 0), 4.328125);
        assert_eq!(g.get(0, 1), -1.5);
        assert_eq!(g.get(2, 2), 24.25);
        assert_eq!(g.get(3, 3), 88.0);
        assert_eq!(g.get(0, 3), -7.125);
        assert_eq!(g.get(1, 1), 8.3125);
    }

    #[test]
    fn reduced_gram_from_design_drops_the_unity_row() {
        let g = gram_from_design(&DesignMatrix::build(&a1()), false);
        assert_eq!(g.get(0, 0), 3.328125);
        assert_eq!(g.get(0, 1), -2.5);
        assert!(matches!(g.flavor(), GramFlavor::Reduced));
    }

    #[test]
    fn gram_of_all_ones_judgments() {
        let prm = PairwiseReciprocalMatrix::validate(Matrix::from_rows(&[
            vec![1.0; 3],
            vec![1.0; 3],
            vec![1.0; 3],
        ]))
        .unwrap();
        let g = gram_from_design(&DesignMatrix::build(&prm), true);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 5.0 } else { -1.0 };
                assert_eq!(g.get(i, j), expected);
            }
        }
        let gr = reduced_gram(&prm);
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 4.0 } else { -2.0 };
                assert_eq!(gr.get(i, j), expected);
            }
        }
        // row sums of the reduced form vanish, so it is singular
        for i in 0..3 {
            let s: f64 = (0..3).map(|j| gr.get(i, j)).sum();
            assert_eq!(s, 0.0);
        }
    }

    #[test]
    fn elementwise_matches_published_values() {
        let g1 = gram_elementwise(&a1());
        assert_eq!(g1.get(0, 0), 4.328125);
        assert_eq!(g1.get(0, 1), -1.5);

        let g2 = gram_elementwise(&a2());
        assert!((g2.get(0, 0) - 7.347222222222221).abs() < 1e-12);
        assert_eq!(g2.get(0, 1), -3.25);
        assert!((g2.get(1, 1) - 48.13151927437642).abs() < 1e-12);
        assert_eq!(g2.get(2, 2), 150.0);
    }

    #[test]
    fn reduced_diagonal_of_the_consistent_example() {
        let g = reduced_gram(&a1());
        assert_eq!(g.get(0, 0), 3.328125);
        assert_eq!(g.get(1, 1), 7.3125);
        assert_eq!(g.get(2, 2), 23.25);
        assert_eq!(g.get(3, 3), 87.0);
    }

    #[test]
    fn shift_identities_hold_bitwise() {
        let prm = a2();
        let reduced = reduced_gram(&prm);
        let full = gram_elementwise(&prm);
        let shifted = shifted_gram(&prm, -3.0).unwrap();
        let n = prm.order();
        for i in 0..n {
            for j in 0..n {
                assert_eq!(full.get(i, j), reduced.get(i, j) + 1.0);
                assert_eq!(shifted.get(i, j), reduced.get(i, j) - 3.0);
            }
        }
        // unit shift reproduces the full flavor entry for entry
        let unit = shifted_gram(&prm, 1.0).unwrap();
        assert_eq!(unit.matrix(), full.matrix());
    }

    #[test]
    fn zero_shift_is_rejected() {
        assert!(matches!(shifted_gram(&a1(), 0.0), Err(Error::ZeroShift)));
    }

    #[test]
    fn bordered_matrix_of_the_consistent_example() {
        let g = lagrangian_gram(&a1(), 0.0);
        assert_eq!(g.order(), 5);
        assert_eq!(g.get(0, 0), 3.328125);
        assert_eq!(g.get(0, 1), -2.5);
        assert_eq!(g.get(0, 4), 1.0);
        assert_eq!(g.get(4, 0), 1.0);
        assert_eq!(g.get(4, 4), 0.0);
    }

    #[test]
    fn bordered_block_with_unit_shift_is_the_full_gram() {
        let g = lagrangian_gram(&a2(), 1.0);
        let full = gram_elementwise(&a2());
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(g.get(i, j), full.get(i, j));
            }
        }
    }

    #[test]
    fn bordered_matrix_smallest_case() {
        let prm = PairwiseReciprocalMatrix::validate(Matrix::from_rows(&[
            vec![1.0, 1.0],
            vec![1.0, 1.0],
        ]))
        .unwrap();
        let g = lagrangian_gram(&prm, 0.0);
        let expected = Matrix::from_rows(&[
            vec![2.0, -2.0, 1.0],
            vec![-2.0, 2.0, 1.0],
            vec![1.0, 1.0, 0.0],
        ]);
        assert_eq!(g.matrix(), &expected);
    }

    #[test]
    fn all_flavors_are_exactly_symmetric() {
        let s = JudgmentScale::<f64>::z_point(9).unwrap();
        let prm = PairwiseReciprocalMatrix::random(7, &s, 99).unwrap();
        let candidates = [
            gram_from_design(&DesignMatrix::build(&prm), true),
            gram_from_design(&DesignMatrix::build(&prm), false),
            gram_elementwise(&prm),
            reduced_gram(&prm),
            shifted_gram(&prm, 17.5).unwrap(),
            lagrangian_gram(&prm, -2.0),
        ];
        for g in &candidates {
            for i in 0..g.order() {
                for j in 0..g.order() {
                    assert_eq!(g.get(i, j), g.get(j, i));
                }
            }
        }
    }

    #[test]
    fn design_path_agrees_with_element_form() {
        let s = JudgmentScale::<f64>::z_point(9).unwrap();
        for n in [3usize, 5, 9, 15] {
            let prm = PairwiseReciprocalMatrix::random(n, &s, 1000 + n as u64).unwrap();
            let via_design = gram_from_design(&DesignMatrix::build(&prm), true);
            let direct = gram_elementwise(&prm);
            let scale = direct.matrix().max_abs();
            assert!(via_design.matrix().max_abs_diff(direct.matrix()) <= 1e-12 * scale);
        }
    }

    #[test]
    fn row_order_does_not_change_the_cross_product() {
        let s = JudgmentScale::z_point(9).unwrap();
        let prm = PairwiseReciprocalMatrix::random(6, &s, 5).unwrap();
        let d = DesignMatrix::build(&prm);
        let baseline = gram_from_design(&d, true);

        // deterministic shuffle of the equation rows, unity row kept last
        let eq = prm.order() * (prm.order() - 1);
        let mut order: Vec<usize> = (0..eq).collect();
        let mut state = 0x9E3779B97F4A7C15u64;
        for i in (1..eq).rev() {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (i + 1);
            order.swap(i, j);
        }
        let mut rows: Vec<Vec<f64>> = order.iter().map(|&k| d.matrix().row(k).to_vec()).collect();
        rows.push(d.matrix().row(eq).to_vec());
        let permuted = DesignMatrix::from_matrix(Matrix::from_rows(&rows)).unwrap();
        let shuffled = gram_from_design(&permuted, true);

        assert_eq!(baseline.matrix(), shuffled.matrix());
    }
}
