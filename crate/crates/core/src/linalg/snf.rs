//! Smith normal form over ℤ with unimodular transforms.
//!
//! Classical reduction: the remaining submatrix is pivoted on an entry of
//! minimal absolute value, the pivot row and column are cleared by division
//! with remainder, and a pivot that fails to divide the rest of the
//! submatrix absorbs the offending row and is reduced again.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntegerMatrix;

/// `U * input * V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d_1 | d_2 | ...`, every `d_i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub left: IntegerMatrix,
    pub diagonal: IntegerMatrix,
    pub right: IntegerMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal
            .diagonal_entries()
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row_dst -= q * row_src
    fn row_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let (s, d) = if src < dst {
                let (lo, hi) = m.split_at_mut(dst);
                (&lo[src], &mut hi[0])
            } else {
                let (lo, hi) = m.split_at_mut(src);
                (&hi[0], &mut lo[dst])
            };
            for (x, y) in d.iter_mut().zip(s) {
                if !y.is_zero() {
                    *x -= q * y;
                }
            }
        }
    }

    /// col_dst -= q * col_src
    fn col_axpy(&mut self, dst: usize, src: usize, q: &BigInt) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            if !row[src].is_zero() {
                let delta = q * &row[src];
                row[dst] -= delta;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::from(1) } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn min_abs_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[bi][bj].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut w = Work {
        a: m.to_dense(),
        u: identity(rows),
        v: identity(cols),
    };
    for t in 0..rows.min(cols) {
        while let Some((pi, pj)) = min_abs_entry(&w.a, t) {
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&w.a[t][t]);
                w.row_axpy(i, t, &q);
                clean &= w.a[i][t].is_zero();
            }
            for j in t + 1..cols {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&w.a[t][t]);
                w.col_axpy(j, t, &q);
                clean &= w.a[t][j].is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = w.a[t][t].clone();
            let bad_row = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&pivot)));
            match bad_row {
                Some(i) => w.row_axpy(t, i, &BigInt::from(-1)),
                None => break,
            }
        }
        if w.a.get(t).is_some_and(|r| r[t].is_negative()) {
            w.negate_row(t);
        }
    }
    SmithForm {
        left: IntegerMatrix::from_rows_sized(rows, rows, w.u),
        diagonal: IntegerMatrix::from_rows_sized(rows, cols, w.a),
        right: IntegerMatrix::from_rows_sized(cols, cols, w.v),
    }
}

impl IntegerMatrix {
    fn from_rows_sized(rows: usize, cols: usize, dense: Vec<Vec<BigInt>>) -> Self {
        let mut out = Self::zeros(rows, cols);
        for (i, row) in dense.into_iter().enumerate() {
            for (j, x) in row.into_iter().enumerate() {
                out.set(i, j, x);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::determinant;

    fn check(m: &IntegerMatrix) -> SmithForm {
        let s = smith_normal_form(m);
        assert_eq!(s.left.mul(m).mul(&s.right), s.diagonal);
        for (i, j, _) in s.diagonal.entries() {
            assert_eq!(i, j, "off-diagonal entry");
        }
        let d = s.diagonal.diagonal_entries();
        for w in d.windows(2) {
            if w[1].is_zero() {
                continue;
            }
            assert!(w[1].is_multiple_of(&w[0]), "{} does not divide {}", w[0], w[1]);
        }
        assert_eq!(
            determinant(&s.left.to_rational()).abs(),
            crate::linalg::rational(1, 1)
        );
        assert_eq!(
            determinant(&s.right.to_rational()).abs(),
            crate::linalg::rational(1, 1)
        );
        s
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn two_by_two() {
        let s = check(&IntegerMatrix::from_i64_rows(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.diagonal.diagonal_entries(), ints(&[2, 4]));
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntegerMatrix::identity(3));
        assert_eq!(s.diagonal, IntegerMatrix::identity(3));
    }

    #[test]
    fn divisibility_normalization() {
        let s = check(&IntegerMatrix::from_i64_rows(&[vec![6, 0], vec![0, 4]]));
        assert_eq!(s.diagonal.diagonal_entries(), ints(&[2, 12]));
    }

    #[test]
    fn rectangular_and_zero() {
        let s = check(&IntegerMatrix::from_i64_rows(&[vec![0, 0, 0], vec![0, 0, 0]]));
        assert!(s.invariant_factors().is_empty());
        let s = check(&IntegerMatrix::from_i64_rows(&[vec![1, 1, 1], vec![1, 0, -1]]));
        assert_eq!(s.invariant_factors(), ints(&[1, 1]));
        let s = check(&IntegerMatrix::from_i64_rows(&[vec![2], vec![4], vec![6]]));
        assert_eq!(s.invariant_factors(), ints(&[2]));
    }

    #[test]
    fn empty_matrix() {
        let s = smith_normal_form(&IntegerMatrix::zeros(0, 2));
        assert_eq!(s.right, IntegerMatrix::identity(2));
    }
}
