//! Fraction-free (Bareiss) elimination over ℚ.
//!
//! Rational input rows are cleared of denominators row by row, then reduced
//! with Bareiss updates so every intermediate entry is an integer minor of
//! the scaled input. Pivots are chosen deterministically: for each column in
//! increasing order, the lowest-index remaining row with a nonzero entry.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Rational, RationalMatrix};

/// Integer row echelon form of a rational matrix.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// Reduced rows; only the first `pivots.len()` rows are nonzero.
    pub rows: Vec<Vec<BigInt>>,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
    pub cols: usize,
}

fn integer_rows(m: &RationalMatrix) -> Vec<Vec<BigInt>> {
    let dense = m.to_dense();
    dense
        .into_iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            row.into_iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
        })
        .collect()
}

impl Echelon {
    pub fn new(m: &RationalMatrix) -> Self {
        Self::from_integer_rows(integer_rows(m), m.cols())
    }

    pub fn from_integer_rows(mut a: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let nrows = a.len();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut prow = 0;
        for col in 0..cols {
            if prow == nrows {
                break;
            }
            let Some(found) = (prow..nrows).find(|&i| !a[i][col].is_zero()) else {
                continue;
            };
            a.swap(prow, found);
            let (head, tail) = a.split_at_mut(prow + 1);
            let pivot_row = &head[prow];
            let pivot = &pivot_row[col];
            for row in tail.iter_mut() {
                let factor = row[col].clone();
                if factor.is_zero() {
                    for v in row[col + 1..].iter_mut() {
                        if !v.is_zero() {
                            *v = (&*v * pivot) / &prev;
                        }
                    }
                } else {
                    for j in col + 1..cols {
                        let v = &row[j] * pivot - &factor * &pivot_row[j];
                        row[j] = v / &prev;
                    }
                    row[col] = BigInt::zero();
                }
            }
            prev = pivot.clone();
            pivots.push(col);
            prow += 1;
        }
        Self {
            rows: a,
            pivots,
            cols,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Back-substitutes with the given values for the free columns.
    /// `rhs` gives the target of each pivot row (zero for a homogeneous system).
    fn back_substitute(&self, free_values: &[(usize, Rational)], rhs: &[Rational]) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.cols];
        for (j, v) in free_values {
            x[*j] = v.clone();
        }
        for (i, &pc) in self.pivots.iter().enumerate().rev() {
            let row = &self.rows[i];
            let mut acc = rhs[i].clone();
            for j in pc + 1..self.cols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc -= Rational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[pc] = acc / Rational::from_integer(row[pc].clone());
        }
        x
    }
}

/// Dimension of the row space over ℚ.
pub fn rank(m: &RationalMatrix) -> usize {
    if m.is_zero() {
        return 0;
    }
    // eliminate along the shorter side
    if m.rows() > m.cols() {
        Echelon::new(&m.transpose()).rank()
    } else {
        Echelon::new(m).rank()
    }
}

/// Basis of the right kernel `{v : m v = 0}`, one vector per free column in
/// increasing column order, normalized with a `1` at its free column.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<Rational>> {
    let ech = Echelon::new(m);
    let pivot_set: std::collections::BTreeSet<usize> = ech.pivots.iter().copied().collect();
    let zeros = vec![Rational::zero(); ech.rank()];
    (0..m.cols())
        .filter(|j| !pivot_set.contains(j))
        .map(|free| ech.back_substitute(&[(free, Rational::one())], &zeros))
        .collect()
}

/// Kernel basis packed as the columns of a matrix.
pub fn kernel_matrix(m: &RationalMatrix) -> RationalMatrix {
    RationalMatrix::from_columns(m.cols(), &kernel_basis(m))
}

/// Solves `m x = b`. Returns the basic solution (every non-pivot variable
/// zero), or `None` when `b` is outside the column space.
pub fn solve_rational(m: &RationalMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(b.len(), m.rows(), "right-hand side length mismatch");
    let n = m.cols();
    let mut aug = m.to_dense();
    for (row, bi) in aug.iter_mut().zip(b) {
        row.push(bi.clone());
    }
    let aug = RationalMatrix::from_rows(aug);
    let aug = if aug.rows() == 0 {
        RationalMatrix::zeros(0, n + 1)
    } else {
        aug
    };
    let ech = Echelon::new(&aug);
    if ech.pivots.last() == Some(&n) {
        return None;
    }
    let rhs: Vec<Rational> = (0..ech.rank())
        .map(|i| Rational::from_integer(ech.rows[i][n].clone()))
        .collect();
    let coeffs = Echelon {
        rows: ech.rows,
        pivots: ech.pivots,
        cols: n,
    };
    Some(coeffs.back_substitute(&[], &rhs))
}

/// Indices of a maximal linearly independent set of columns, chosen greedily
/// from the left.
pub fn independent_columns(m: &RationalMatrix) -> Vec<usize> {
    Echelon::new(m).pivots
}

/// The independent columns of `m`, i.e. a basis of its column space drawn
/// from the original columns.
pub fn column_basis(m: &RationalMatrix) -> RationalMatrix {
    m.select_columns(&independent_columns(m))
}

/// Determinant of a square integer-valued rational matrix via the Bareiss
/// recurrence; the last pivot of a full-rank elimination is the determinant
/// up to the sign of the row permutation, so the permutation is tracked.
pub fn determinant(m: &RationalMatrix) -> Rational {
    assert_eq!(m.rows(), m.cols(), "determinant of non-square matrix");
    let n = m.rows();
    if n == 0 {
        return Rational::one();
    }
    let dense = m.to_dense();
    let scale = dense.iter().fold(Rational::one(), |acc, row| {
        let lcm = row.iter().fold(BigInt::one(), |a, v| a.lcm(v.denom()));
        acc * Rational::from_integer(lcm)
    });
    let mut a = integer_rows(m);
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return Rational::zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Rational::from_integer(sign * &a[n - 1][n - 1]) / scale
}

/// True when every entry of `v` is zero.
pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}
