use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Rational;

/// Sparse matrix with an ordered `(row, col) -> value` map.
///
/// Zero entries are never stored, so structural equality (`==`) coincides
/// with mathematical equality.
#[derive(Clone, PartialEq, Eq)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), T>,
}

pub type RationalMatrix = SparseMatrix<Rational>;
pub type IntegerMatrix = SparseMatrix<BigInt>;

impl<T> SparseMatrix<T>
where
    T: Clone + Zero + One + PartialEq,
{
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries.insert((i, i), T::one());
        }
        m
    }

    /// Builds a matrix from dense rows. All rows must have the same length.
    ///
    /// # Panics
    /// If the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(nrows, ncols);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), ncols, "ragged row {i}");
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Builds a `rows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column {j} has wrong length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, row: usize, col: usize) -> T {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.entries.get(&(row, col)).cloned().unwrap_or_else(T::zero)
    }

    pub fn set(&mut self, row: usize, col: usize, value: T) {
        assert!(
            row < self.rows && col < self.cols,
            "index ({row}, {col}) out of bounds for {}x{}",
            self.rows,
            self.cols
        );
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        self.entries.iter().map(|(&(i, j), v)| (i, j, v))
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            entries: self
                .entries
                .iter()
                .map(|(&(i, j), v)| ((j, i), v.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.cols]; self.rows];
        for (&(i, j), v) in &self.entries {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        let mut out = vec![T::zero(); self.rows];
        for (i, slot) in out.iter_mut().enumerate() {
            if let Some(v) = self.entries.get(&(i, j)) {
                *slot = v.clone();
            }
        }
        out
    }

    pub fn columns(&self) -> Vec<Vec<T>> {
        let mut out = vec![vec![T::zero(); self.rows]; self.cols];
        for (&(i, j), v) in &self.entries {
            out[j][i] = v.clone();
        }
        out
    }

    /// Submatrix keeping the listed columns in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> Self {
        let cols = self.columns();
        let picked: Vec<Vec<T>> = keep.iter().map(|&j| cols[j].clone()).collect();
        Self::from_columns(self.rows, &picked)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        m.entries = self.entries.clone();
        for (&(i, j), v) in &other.entries {
            m.entries.insert((i, j + self.cols), v.clone());
        }
        m
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut m = Self::zeros(self.rows + other.rows, self.cols);
        m.entries = self.entries.clone();
        for (&(i, j), v) in &other.entries {
            m.entries.insert((i + self.rows, j), v.clone());
        }
        m
    }

    /// Writes `block` with its top-left corner at `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, block: &Self) {
        assert!(row + block.rows <= self.rows && col + block.cols <= self.cols);
        for (&(i, j), v) in &block.entries {
            self.entries.insert((row + i, col + j), v.clone());
        }
    }

    pub fn map<U, F>(&self, f: F) -> SparseMatrix<U>
    where
        U: Clone + Zero + One + PartialEq,
        F: Fn(&T) -> U,
    {
        let mut out = SparseMatrix::zeros(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            out.set(i, j, f(v));
        }
        out
    }
}

impl<T> SparseMatrix<T>
where
    T: Clone + Zero + One + PartialEq + Add<Output = T> + Mul<Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        // group other's entries by row for a sparse-sparse product
        let mut other_rows: Vec<Vec<(usize, &T)>> = vec![Vec::new(); other.rows];
        for (&(k, j), v) in &other.entries {
            other_rows[k].push((j, v));
        }
        let mut acc: BTreeMap<(usize, usize), T> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &other_rows[k] {
                let prod = a * b;
                let slot = acc.entry((i, j)).or_insert_with(T::zero);
                *slot = slot.clone() + prod;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Self {
            rows: self.rows,
            cols: other.cols,
            entries: acc,
        }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let mut out = vec![T::zero(); self.rows];
        for (&(i, j), a) in &self.entries {
            out[i] = out[i].clone() + a * &v[j];
        }
        out
    }

    /// `self^k` for square matrices.
    pub fn pow(&self, k: u32) -> Self {
        assert_eq!(self.rows, self.cols, "pow of non-square matrix");
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

impl<T> SparseMatrix<T>
where
    T: Clone + Zero + One + PartialEq + Neg<Output = T>,
{
    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(&k, v)| (k, -v.clone())).collect(),
        }
    }
}

impl<T> SparseMatrix<T>
where
    T: Clone + Zero + One + PartialEq + Add<Output = T> + Sub<Output = T>,
{
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            let cur = out.get(i, j);
            out.set(i, j, cur + v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (&(i, j), v) in &other.entries {
            let cur = out.get(i, j);
            out.set(i, j, cur - v.clone());
        }
        out
    }
}

impl RationalMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zeros(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            out.set(i, j, v * c);
        }
        out
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(values: &[Rational]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    /// Converts to an integer matrix if every entry is integral.
    pub fn to_integer(&self) -> Option<IntegerMatrix> {
        let mut out = IntegerMatrix::zeros(self.rows, self.cols);
        for (&(i, j), v) in &self.entries {
            if !v.is_integer() {
                return None;
            }
            out.set(i, j, v.to_integer());
        }
        Some(out)
    }
}

impl IntegerMatrix {
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn to_rational(&self) -> RationalMatrix {
        self.map(|v| Rational::from_integer(v.clone()))
    }

    /// Diagonal entries `d_0, d_1, ...` up to `min(rows, cols)`.
    pub fn diagonal_entries(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }
}

impl<T: fmt::Display + Clone + Zero + One + PartialEq> fmt::Debug for SparseMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                match self.entries.get(&(i, j)) {
                    Some(v) => write!(f, "{v:>6} ")?,
                    None => write!(f, "{:>6} ", 0)?,
                }
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
