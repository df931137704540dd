use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use crate::linalg::{kernel_matrix, rank, QuotientBasis, RationalMatrix, Subspace};

use super::ComplexError;

/// A bounded cochain complex of finite-dimensional ℚ-vector spaces.
///
/// Degrees run over `lo..=hi`; `differential(k)` maps degree `k` to `k + 1`
/// and is a `dim(k+1) x dim(k)` matrix. Outside the range every space is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    lo: i64,
    dims: Vec<usize>,
    differentials: Vec<RationalMatrix>,
}

impl CochainComplex {
    /// Validates shapes and `d ∘ d = 0`.
    pub fn new(lo: i64, dims: Vec<usize>, differentials: Vec<RationalMatrix>) -> Result<Self, ComplexError> {
        if dims.is_empty() {
            return Err(ComplexError::Empty);
        }
        if differentials.len() + 1 != dims.len() {
            return Err(ComplexError::DifferentialCount {
                expected: dims.len() - 1,
                found: differentials.len(),
            });
        }
        for (i, d) in differentials.iter().enumerate() {
            let expected = (dims[i + 1], dims[i]);
            if (d.rows(), d.cols()) != expected {
                return Err(ComplexError::ShapeMismatch {
                    degree: lo + i as i64,
                    expected,
                    found: (d.rows(), d.cols()),
                });
            }
        }
        for (i, pair) in differentials.windows(2).enumerate() {
            if !pair[1].mul(&pair[0]).is_zero() {
                return Err(ComplexError::NotAComplex {
                    degree: lo + i as i64,
                });
            }
        }
        Ok(Self {
            lo,
            dims,
            differentials,
        })
    }

    /// A complex with every differential zero.
    pub fn zero_differentials(lo: i64, dims: Vec<usize>) -> Result<Self, ComplexError> {
        let diffs = dims
            .windows(2)
            .map(|w| RationalMatrix::zeros(w[1], w[0]))
            .collect();
        Self::new(lo, dims, diffs)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn degrees(&self) -> RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, k: i64) -> usize {
        if self.degrees().contains(&k) {
            self.dims[(k - self.lo) as usize]
        } else {
            0
        }
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// `d_k : C^k -> C^{k+1}`, a zero matrix of the right shape outside the
    /// stored range.
    pub fn differential(&self, k: i64) -> RationalMatrix {
        if k >= self.lo && k < self.hi() {
            self.differentials[(k - self.lo) as usize].clone()
        } else {
            RationalMatrix::zeros(self.dim(k + 1), self.dim(k))
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|k| sign(k) * self.dim(k) as i64).sum()
    }

    /// `dim ker d_k - rank d_{k-1}` for every degree in range.
    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        let ranks: BTreeMap<i64, usize> = (self.lo - 1..=self.hi())
            .map(|k| (k, rank(&self.differential(k))))
            .collect();
        self.degrees()
            .map(|k| (k, self.dim(k) - ranks[&k] - ranks[&(k - 1)]))
            .collect()
    }

    pub fn cocycles(&self, k: i64) -> Subspace {
        Subspace::span(&kernel_matrix(&self.differential(k)))
    }

    pub fn coboundaries(&self, k: i64) -> Subspace {
        Subspace::span(&self.differential(k - 1))
    }

    /// Representatives of `H^k` and a coordinate map for cocycles.
    pub fn cohomology_basis(&self, k: i64) -> QuotientBasis {
        QuotientBasis::new(&self.cocycles(k), &self.coboundaries(k))
    }
}

pub fn sign(k: i64) -> i64 {
    if k.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Alternating sum of a degree -> dimension table.
pub fn euler_of(dims: &BTreeMap<i64, usize>) -> i64 {
    dims.iter().map(|(&k, &d)| sign(k) * d as i64).sum()
}

/// Degreewise map between two complexes on the same degree range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: CochainComplex,
    target: CochainComplex,
    components: Vec<RationalMatrix>,
}

impl ChainMap {
    /// Validates shapes and `d_target f_k = f_{k+1} d_source`.
    pub fn new(
        source: CochainComplex,
        target: CochainComplex,
        components: Vec<RationalMatrix>,
    ) -> Result<Self, ComplexError> {
        if source.degrees() != target.degrees() {
            return Err(ComplexError::DegreeRangeMismatch {
                source_range: (source.lo(), source.hi()),
                target_range: (target.lo(), target.hi()),
            });
        }
        if components.len() != source.dims.len() {
            return Err(ComplexError::DifferentialCount {
                expected: source.dims.len(),
                found: components.len(),
            });
        }
        for (k, f) in source.degrees().zip(&components) {
            let expected = (target.dim(k), source.dim(k));
            if (f.rows(), f.cols()) != expected {
                return Err(ComplexError::ShapeMismatch {
                    degree: k,
                    expected,
                    found: (f.rows(), f.cols()),
                });
            }
        }
        let map = Self {
            source,
            target,
            components,
        };
        for k in map.source.degrees() {
            let lhs = map.target.differential(k).mul(&map.component(k));
            let rhs = map.component(k + 1).mul(&map.source.differential(k));
            if lhs != rhs {
                return Err(ComplexError::NotAChainMap { degree: k });
            }
        }
        Ok(map)
    }

    pub fn identity(c: &CochainComplex) -> Self {
        let components = c.degrees().map(|k| RationalMatrix::identity(c.dim(k))).collect();
        Self {
            source: c.clone(),
            target: c.clone(),
            components,
        }
    }

    pub fn source(&self) -> &CochainComplex {
        &self.source
    }

    pub fn target(&self) -> &CochainComplex {
        &self.target
    }

    pub fn component(&self, k: i64) -> RationalMatrix {
        if self.source.degrees().contains(&k) {
            self.components[(k - self.source.lo()) as usize].clone()
        } else {
            RationalMatrix::zeros(self.target.dim(k), self.source.dim(k))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn circle() -> CochainComplex {
        // vertices a, b, c; edges ab, ac, bc; (δf)(uv) = f(v) - f(u)
        let d0 = RationalMatrix::from_i64_rows(&[vec![-1, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]]);
        CochainComplex::new(0, vec![3, 3], vec![d0]).unwrap()
    }

    #[test]
    fn point_complex() {
        let c = CochainComplex::zero_differentials(0, vec![1]).unwrap();
        assert_eq!(c.cohomology_dims(), BTreeMap::from([(0, 1)]));
    }

    #[test]
    fn circle_cohomology() {
        let h = circle().cohomology_dims();
        assert_eq!(h, BTreeMap::from([(0, 1), (1, 1)]));
    }

    #[test]
    fn acyclic_identity_pair() {
        let c = CochainComplex::new(0, vec![1, 1], vec![RationalMatrix::identity(1)]).unwrap();
        assert_eq!(c.cohomology_dims(), BTreeMap::from([(0, 0), (1, 0)]));
    }

    #[test]
    fn rejects_nonzero_square() {
        let d = RationalMatrix::identity(1);
        let err = CochainComplex::new(0, vec![1, 1, 1], vec![d.clone(), d]).unwrap_err();
        assert_eq!(err, ComplexError::NotAComplex { degree: 0 });
    }

    #[test]
    fn rejects_bad_shape() {
        let err = CochainComplex::new(2, vec![1, 2], vec![RationalMatrix::zeros(1, 1)]).unwrap_err();
        assert!(matches!(err, ComplexError::ShapeMismatch { degree: 2, .. }));
    }

    #[test]
    fn rejects_non_chain_map() {
        let c = CochainComplex::new(0, vec![1, 1], vec![RationalMatrix::identity(1)]).unwrap();
        let f = vec![RationalMatrix::identity(1), RationalMatrix::zeros(1, 1)];
        let err = ChainMap::new(c.clone(), c, f).unwrap_err();
        assert_eq!(err, ComplexError::NotAChainMap { degree: 0 });
    }
}
