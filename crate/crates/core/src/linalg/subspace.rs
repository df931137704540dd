//! Subspaces of ℚ^n carried by explicit bases, and subquotients.

use num_traits::Zero;

use super::{column_basis, independent_columns, kernel_basis, rank, solve_rational};
use super::{Rational, RationalMatrix};

/// A subspace of ℚ^ambient, stored as a matrix whose columns are a basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    basis: RationalMatrix,
}

impl Subspace {
    /// Column space of `m`.
    pub fn span(m: &RationalMatrix) -> Self {
        Self {
            basis: column_basis(m),
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            basis: RationalMatrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            basis: RationalMatrix::identity(ambient),
        }
    }

    /// Span of the standard basis vectors with the given indices.
    pub fn coordinate(ambient: usize, indices: &[usize]) -> Self {
        let mut m = RationalMatrix::zeros(ambient, indices.len());
        for (col, &i) in indices.iter().enumerate() {
            m.set(i, col, Rational::from_integer(1.into()));
        }
        Self::span(&m)
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        solve_rational(&self.basis, v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient(), other.ambient());
        if other.dim() == 0 {
            return true;
        }
        rank(&self.basis.hstack(&other.basis)) == self.dim()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient(), other.ambient());
        Self::span(&self.basis.hstack(&other.basis))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient(), other.ambient());
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(self.ambient());
        }
        // A u = B v  <=>  [A | -B] (u, v) = 0
        let stacked = self.basis.hstack(&other.basis.neg());
        let k = self.dim();
        let vecs: Vec<Vec<Rational>> = kernel_basis(&stacked)
            .into_iter()
            .map(|w| self.basis.mul_vec(&w[..k]))
            .collect();
        Self::span(&RationalMatrix::from_columns(self.ambient(), &vecs))
    }

    /// Image of this subspace under `map`.
    pub fn image(&self, map: &RationalMatrix) -> Subspace {
        assert_eq!(map.cols(), self.ambient());
        Self::span(&map.mul(&self.basis))
    }

    /// `{x in self : map x in target}`.
    pub fn preimage_within(&self, map: &RationalMatrix, target: &Subspace) -> Subspace {
        assert_eq!(map.cols(), self.ambient());
        assert_eq!(map.rows(), target.ambient());
        if self.dim() == 0 {
            return self.clone();
        }
        let image = map.mul(&self.basis);
        let stacked = image.hstack(&target.basis.neg());
        let k = self.dim();
        let vecs: Vec<Vec<Rational>> = kernel_basis(&stacked)
            .into_iter()
            .map(|w| self.basis.mul_vec(&w[..k]))
            .collect();
        Self::span(&RationalMatrix::from_columns(self.ambient(), &vecs))
    }
}

/// Representatives for `sup / sub` together with a coordinate map.
#[derive(Clone, Debug)]
pub struct QuotientBasis {
    reps: RationalMatrix,
    combined: RationalMatrix,
}

impl QuotientBasis {
    /// `sub` must be contained in `sup`.
    pub fn new(sup: &Subspace, sub: &Subspace) -> Self {
        debug_assert!(sup.contains_subspace(sub));
        let combined_all = sub.basis().hstack(sup.basis());
        let offset = sub.dim();
        let picked: Vec<usize> = independent_columns(&combined_all)
            .into_iter()
            .filter(|&j| j >= offset)
            .collect();
        let reps = combined_all.select_columns(&picked);
        let combined = reps.hstack(sub.basis());
        Self { reps, combined }
    }

    pub fn dim(&self) -> usize {
        self.reps.cols()
    }

    pub fn representatives(&self) -> &RationalMatrix {
        &self.reps
    }

    /// Coordinates of `v` modulo `sub` in the representative basis, or
    /// `None` if `v` is not in `sup`.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        if self.combined.cols() == 0 {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        let x = solve_rational(&self.combined, v)?;
        Some(x[..self.dim()].to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_of_planes_is_line() {
        let a = Subspace::coordinate(3, &[0, 1]);
        let b = Subspace::span(&RationalMatrix::from_i64_rows(&[
            vec![1, 0],
            vec![0, 0],
            vec![0, 1],
        ]));
        let meet = a.intersection(&b);
        assert_eq!(meet.dim(), 1);
        assert!(meet.contains(&[1.into(), 0.into(), 0.into()].map(Rational::from_integer)));
        assert_eq!(a.sum(&b).dim(), 3);
    }

    #[test]
    fn preimage_of_zero_is_kernel() {
        let map = RationalMatrix::from_i64_rows(&[vec![1, 1, 0]]);
        let pre = Subspace::full(3).preimage_within(&map, &Subspace::zero(1));
        assert_eq!(pre.dim(), 2);
    }

    #[test]
    fn quotient_coordinates() {
        let sup = Subspace::full(2);
        let sub = Subspace::coordinate(2, &[0]);
        let q = QuotientBasis::new(&sup, &sub);
        assert_eq!(q.dim(), 1);
        let c = q
            .coordinates(&[Rational::from_integer(5.into()), Rational::from_integer(2.into())])
            .unwrap();
        assert_eq!(c, vec![Rational::from_integer(2.into())]);
    }
}
