use itertools::Itertools;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{ArithError, Int};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Int>) -> Result<Self, ArithError> {
        if rows == 0 || cols == 0 {
            return Err(ArithError::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(ArithError::ShapeMismatch { expected: rows * cols, got: data.len() });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Int>>) -> Result<Self, ArithError> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n) {
            return Err(ArithError::ShapeMismatch {
                expected: m * n,
                got: rows.iter().map(Vec::len).sum(),
            });
        }
        IntMatrix::new(m, n, rows.into_iter().flatten().collect())
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self, ArithError> {
        IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Int::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Int::from(1);
        }
        IntMatrix { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Int]> {
        self.data.chunks(self.cols)
    }

    pub fn to_rows(&self) -> Vec<Vec<Int>> {
        self.row_iter().map(<[Int]>::to_vec).collect()
    }

    /// Submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Vec<Vec<Int>> {
        rows.iter().map(|&i| cols.iter().map(|&j| self.get(i, j).clone()).collect()).collect()
    }

    /// Maximum absolute entry.
    pub fn max_abs(&self) -> Int {
        self.data.iter().map(Signed::abs).max().unwrap_or_default()
    }
}

/// Bareiss elimination in place; returns the rank and, for square input,
/// leaves `±det` in the last pivot position. The returned sign flag records
/// the parity of row swaps.
fn bareiss(a: &mut [Vec<Int>]) -> (usize, bool) {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut prev = Int::from(1);
    let mut rank = 0;
    let mut negated = false;
    for col in 0..n {
        if rank == m {
            break;
        }
        let Some(p) = (rank..m).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        if p != rank {
            a.swap(p, rank);
            negated = !negated;
        }
        for i in rank + 1..m {
            for j in col + 1..n {
                let v = &a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j];
                debug_assert!(v.is_multiple_of(&prev));
                a[i][j] = v / &prev;
            }
            a[i][col] = Int::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    (rank, negated)
}

/// Exact rank over the rationals.
pub fn rank(m: &IntMatrix) -> usize {
    let mut rows = m.to_rows();
    bareiss(&mut rows).0
}

/// Determinant of a square matrix given by rows.
pub fn det(rows: &[Vec<Int>]) -> Int {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    if n == 0 {
        return Int::from(1);
    }
    let mut a = rows.to_vec();
    let (r, negated) = bareiss(&mut a);
    if r < n {
        return Int::zero();
    }
    let d = a[n - 1][n - 1].clone();
    if negated { -d } else { d }
}

/// Largest absolute value of a `k x k` minor.
pub fn max_abs_minor(m: &IntMatrix, k: usize) -> Result<Int, ArithError> {
    if k == 0 || k > m.rows().min(m.cols()) {
        return Err(ArithError::MinorOrder { k, rows: m.rows(), cols: m.cols() });
    }
    let mut best = Int::zero();
    for rs in (0..m.rows()).combinations(k) {
        for cs in (0..m.cols()).combinations(k) {
            let d = det(&m.select(&rs, &cs)).abs();
            if d > best {
                best = d;
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&IntMatrix::identity(2)), 2);
        assert_eq!(rank(&mat(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&mat(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn minor_examples() {
        assert_eq!(max_abs_minor(&IntMatrix::identity(2), 2).unwrap(), Int::from(1));
        assert_eq!(max_abs_minor(&mat(&[&[2, 0], &[0, 3]]), 2).unwrap(), Int::from(6));
        // minors -2, -3, 1
        assert_eq!(max_abs_minor(&mat(&[&[1, 2], &[3, 4], &[5, 7]]), 2).unwrap(), Int::from(3));
        assert!(max_abs_minor(&IntMatrix::identity(2), 3).is_err());
        assert!(max_abs_minor(&IntMatrix::identity(2), 0).is_err());
    }

    #[test]
    fn shape_is_validated() {
        assert!(IntMatrix::new(0, 2, vec![]).is_err());
        assert!(IntMatrix::new(2, 2, vec![Int::from(1)]).is_err());
    }

    /// Leibniz expansion, independent of elimination.
    fn det_leibniz(a: &[Vec<Int>]) -> Int {
        let n = a.len();
        let mut total = Int::zero();
        for perm in (0..n).permutations(n) {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if perm[i] > perm[j] {
                        inversions += 1;
                    }
                }
            }
            let mut term = Int::from(1);
            for (i, &p) in perm.iter().enumerate() {
                term *= &a[i][p];
            }
            if inversions % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    /// Rank by rational Gaussian elimination counting nonzero rows.
    fn rank_rational(a: &[Vec<Int>]) -> usize {
        use num_rational::BigRational;
        let mut r: Vec<Vec<BigRational>> =
            a.iter().map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
        let m = r.len();
        let n = r.first().map_or(0, Vec::len);
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..m).find(|&i| !r[i][col].is_zero()) else { continue };
            r.swap(p, row);
            for i in 0..m {
                if i != row && !r[i][col].is_zero() {
                    let f = &r[i][col] / &r[row][col];
                    for j in 0..n {
                        let v = &f * &r[row][j];
                        r[i][j] -= v;
                    }
                }
            }
            row += 1;
        }
        r.iter().filter(|row| row.iter().any(|x| !x.is_zero())).count()
    }

    fn small_matrix(max_dim: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1..=max_dim, 1..=max_dim).prop_flat_map(|(m, n)| {
            prop::collection::vec(prop::collection::vec(-4i64..=4, n), m)
        })
    }

    proptest! {
        #[test]
        fn rank_agrees_with_rational_elimination(rows in small_matrix(5)) {
            let a: Vec<Vec<Int>> = rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
            let m = IntMatrix::from_rows(a.clone()).unwrap();
            prop_assert_eq!(rank(&m), rank_rational(&a));
        }

        #[test]
        fn max_minor_matches_enumeration(rows in small_matrix(5), k in 1usize..=5) {
            let a: Vec<Vec<Int>> = rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
            let m = IntMatrix::from_rows(a.clone()).unwrap();
            prop_assume!(k <= m.rows().min(m.cols()));
            let mut best = Int::zero();
            for rs in (0..m.rows()).combinations(k) {
                for cs in (0..m.cols()).combinations(k) {
                    best = best.max(det_leibniz(&m.select(&rs, &cs)).abs());
                }
            }
            prop_assert_eq!(max_abs_minor(&m, k).unwrap(), best);
        }
    }
}
