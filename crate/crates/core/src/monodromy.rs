//! Nilpotent operators, their Jordan type, and the monodromy weight
//! filtration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::linalg::{rank, rational_rows, QuotientBasis, Rational, RationalMatrix, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MonodromyError {
    #[error("operator matrix is empty")]
    Empty,
    #[error("row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("operator is not nilpotent: N^{dimension} != 0")]
    NotNilpotent { dimension: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorData {
    #[serde(with = "rational_rows")]
    pub matrix: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "OperatorData", into = "OperatorData")]
pub struct NilpotentOperator {
    matrix: RationalMatrix,
}

impl TryFrom<OperatorData> for NilpotentOperator {
    type Error = MonodromyError;

    fn try_from(data: OperatorData) -> Result<Self, Self::Error> {
        let n = data.matrix.len();
        if n == 0 {
            return Err(MonodromyError::Empty);
        }
        for (row, r) in data.matrix.iter().enumerate() {
            if r.len() != n {
                return Err(MonodromyError::NotSquare {
                    row,
                    expected: n,
                    found: r.len(),
                });
            }
        }
        Self::new(RationalMatrix::from_rows(data.matrix))
    }
}

impl From<NilpotentOperator> for OperatorData {
    fn from(op: NilpotentOperator) -> Self {
        Self {
            matrix: op.matrix.to_dense(),
        }
    }
}

impl NilpotentOperator {
    pub fn new(matrix: RationalMatrix) -> Result<Self, MonodromyError> {
        let n = matrix.rows();
        if n == 0 {
            return Err(MonodromyError::Empty);
        }
        if matrix.cols() != n {
            return Err(MonodromyError::NotSquare {
                row: 0,
                expected: n,
                found: matrix.cols(),
            });
        }
        if !matrix.pow(n as u32).is_zero() {
            return Err(MonodromyError::NotNilpotent { dimension: n });
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn dimension(&self) -> usize {
        self.matrix.rows()
    }

    /// `rank(N^s)` for `s = 0..=dimension`.
    pub fn power_ranks(&self) -> Vec<usize> {
        (0..=self.dimension())
            .map(|s| rank(&self.matrix.pow(s as u32)))
            .collect()
    }

    /// Smallest `e` with `N^e = 0`.
    pub fn nilpotency_index(&self) -> usize {
        self.power_ranks()
            .iter()
            .position(|&r| r == 0)
            .expect("nilpotent")
    }

    /// `P N P^{-1}`.
    pub fn conjugate(&self, p: &RationalMatrix, p_inv: &RationalMatrix) -> Result<Self, MonodromyError> {
        Self::new(p.mul(&self.matrix).mul(p_inv))
    }

    fn kernel_of_power(&self, s: usize) -> Subspace {
        let d = self.dimension();
        Subspace::full(d).preimage_within(&self.matrix.pow(s as u32), &Subspace::zero(d))
    }

    fn image_of_power(&self, s: usize) -> Subspace {
        Subspace::span(&self.matrix.pow(s as u32))
    }
}

/// Jordan block sizes, largest first.
pub fn jordan_type(op: &NilpotentOperator) -> Vec<usize> {
    let ranks = op.power_ranks();
    let mut blocks = Vec::new();
    for s in (1..=op.dimension()).rev() {
        let at_least = ranks[s - 1] - ranks[s];
        let at_least_next = if s < op.dimension() {
            ranks[s] - ranks[s + 1]
        } else {
            0
        };
        blocks.extend(std::iter::repeat_n(s, at_least - at_least_next));
    }
    blocks
}

/// Largest Jordan block size.
pub fn stratum_weight(op: &NilpotentOperator) -> Rational {
    Rational::from_integer(op.nilpotency_index().max(1).into())
}

/// A Jordan basis: one chain `v, Nv, …, N^{s-1}v` per block, largest first.
pub fn jordan_chains(op: &NilpotentOperator) -> Vec<Vec<Vec<Rational>>> {
    let d = op.dimension();
    let e = op.nilpotency_index();
    let kernels: Vec<Subspace> = (0..=e + 1).map(|s| op.kernel_of_power(s.min(e))).collect();
    let mut chains = Vec::new();
    for s in (1..=e).rev() {
        let mut span = kernels[s - 1].sum(&kernels[s + 1].image(op.matrix()));
        for v in kernels[s].basis().columns() {
            if span.contains(&v) {
                continue;
            }
            span = span.sum(&Subspace::span(&RationalMatrix::from_columns(
                d,
                std::slice::from_ref(&v),
            )));
            let mut chain = vec![v];
            for _ in 1..s {
                let next = op.matrix().mul_vec(chain.last().expect("nonempty"));
                chain.push(next);
            }
            chains.push(chain);
        }
    }
    chains
}

#[derive(Clone, Debug)]
pub struct WeightFiltration {
    center: i64,
    dimension: usize,
    levels: BTreeMap<i64, Subspace>,
}

impl PartialEq for WeightFiltration {
    fn eq(&self, other: &Self) -> bool {
        self.center == other.center
            && self.dimension == other.dimension
            && self.levels.keys().eq(other.levels.keys())
            && self.levels.iter().all(|(l, w)| same_space(w, &other.levels[l]))
    }
}

pub fn same_space(a: &Subspace, b: &Subspace) -> bool {
    a.dim() == b.dim() && a.contains_subspace(b)
}

impl WeightFiltration {
    /// Build from explicit levels `center-dimension ..= center+dimension`.
    pub fn from_levels(center: i64, dimension: usize, levels: Vec<Subspace>) -> Self {
        let lo = center - dimension as i64;
        Self {
            center,
            dimension,
            levels: levels
                .into_iter()
                .enumerate()
                .map(|(i, w)| (lo + i as i64, w))
                .collect(),
        }
    }

    pub fn center(&self) -> i64 {
        self.center
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn range(&self) -> std::ops::RangeInclusive<i64> {
        let d = self.dimension as i64;
        self.center - d..=self.center + d
    }

    /// `W_l`; zero below the stored range, everything above.
    pub fn level(&self, l: i64) -> Subspace {
        match self.levels.get(&l) {
            Some(w) => w.clone(),
            None if l < self.center => Subspace::zero(self.dimension),
            None => Subspace::full(self.dimension),
        }
    }

    pub fn dims(&self) -> BTreeMap<i64, usize> {
        self.levels.iter().map(|(&l, w)| (l, w.dim())).collect()
    }

    pub fn graded_dims(&self) -> BTreeMap<i64, usize> {
        self.range()
            .map(|l| (l, self.level(l).dim() - self.level(l - 1).dim()))
            .collect()
    }

    /// `P · W_l` for every level.
    pub fn transform(&self, p: &RationalMatrix) -> Self {
        Self {
            center: self.center,
            dimension: self.dimension,
            levels: self.levels.iter().map(|(&l, w)| (l, w.image(p))).collect(),
        }
    }

    pub fn check(&self, op: &NilpotentOperator) -> AxiomReport {
        let d = self.dimension;
        let range: Vec<i64> = self.range().collect();
        let increasing = range
            .windows(2)
            .all(|w| self.level(w[1]).contains_subspace(&self.level(w[0])));
        let bounded = self.level(*range.first().expect("nonempty")).dim() == 0
            && self.level(*range.last().expect("nonempty")).dim() == d;
        let lowers_by_two = range.iter().all(|&l| {
            self.level(l - 2)
                .contains_subspace(&self.level(l).image(op.matrix()))
        });
        let graded_isomorphisms = (1..=d as i64).all(|l| self.graded_isomorphism(op, l));
        AxiomReport {
            increasing,
            bounded,
            lowers_by_two,
            graded_isomorphisms,
        }
    }

    /// Does `N^l` induce an isomorphism `Gr_{k+l} → Gr_{k-l}`?
    fn graded_isomorphism(&self, op: &NilpotentOperator, l: i64) -> bool {
        let k = self.center;
        let top = QuotientBasis::new(&self.level(k + l), &self.level(k + l - 1));
        let bottom = QuotientBasis::new(&self.level(k - l), &self.level(k - l - 1));
        if top.dim() != bottom.dim() {
            return false;
        }
        let power = op.matrix().pow(l as u32);
        let mut columns = Vec::with_capacity(top.dim());
        for v in top.representatives().columns() {
            match bottom.coordinates(&power.mul_vec(&v)) {
                Some(c) => columns.push(c),
                None => return false,
            }
        }
        rank(&RationalMatrix::from_columns(bottom.dim(), &columns)) == top.dim()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub increasing: bool,
    pub bounded: bool,
    pub lowers_by_two: bool,
    pub graded_isomorphisms: bool,
}

impl AxiomReport {
    pub fn holds(&self) -> bool {
        self.increasing && self.bounded && self.lowers_by_two && self.graded_isomorphisms
    }
}

/// The weight filtration of `N` centered at `center`. A block of size `s`
/// spans weights `center-(s-1), center-(s-3), …, center+(s-1)`, the head of
/// the chain carrying the top weight.
pub fn weight_filtration(op: &NilpotentOperator, center: i64) -> WeightFiltration {
    let d = op.dimension();
    let mut weighted: Vec<(i64, Vec<Rational>)> = Vec::with_capacity(d);
    for chain in jordan_chains(op) {
        let s = chain.len() as i64;
        for (j, v) in chain.into_iter().enumerate() {
            weighted.push((center + (s - 1) - 2 * j as i64, v));
        }
    }
    let lo = center - d as i64;
    let levels = (lo..=center + d as i64)
        .map(|l| {
            let cols: Vec<Vec<Rational>> = weighted
                .iter()
                .filter(|(w, _)| *w <= l)
                .map(|(_, v)| v.clone())
                .collect();
            Subspace::span(&RationalMatrix::from_columns(d, &cols))
        })
        .collect();
    let w = WeightFiltration::from_levels(center, d, levels);
    debug_assert!(w.check(op).holds());
    w
}

/// Subspaces generated under sums by `ker N^a ∩ im N^b`.
pub fn kernel_image_lattice(op: &NilpotentOperator) -> Vec<Subspace> {
    let d = op.dimension();
    let mut out: Vec<Subspace> = Vec::new();
    let push = |out: &mut Vec<Subspace>, s: Subspace| {
        if !out.iter().any(|t| same_space(t, &s)) {
            out.push(s);
        }
    };
    for a in 0..=d {
        for b in 0..=d {
            push(
                &mut out,
                op.kernel_of_power(a).intersection(&op.image_of_power(b)),
            );
        }
    }
    loop {
        let before = out.len();
        for i in 0..before {
            for j in i + 1..before {
                let s = out[i].sum(&out[j]);
                push(&mut out, s);
            }
        }
        if out.len() == before {
            break;
        }
    }
    out.sort_by_key(Subspace::dim);
    out
}

/// Every filtration by lattice subspaces, between `0` at `center-dim` and
/// everything at `center+dim`, that satisfies the weight axioms.
pub fn filtrations_satisfying_axioms(op: &NilpotentOperator, center: i64) -> Vec<WeightFiltration> {
    let d = op.dimension();
    let lattice = kernel_image_lattice(op);
    let mut found = Vec::new();
    let mut chain = vec![Subspace::zero(d)];
    search(op, center, &lattice, &mut chain, &mut found);
    found
}

fn search(
    op: &NilpotentOperator,
    center: i64,
    lattice: &[Subspace],
    chain: &mut Vec<Subspace>,
    found: &mut Vec<WeightFiltration>,
) {
    let d = op.dimension();
    let total = 2 * d + 1;
    if chain.len() == total - 1 {
        chain.push(Subspace::full(d));
        let w = WeightFiltration::from_levels(center, d, chain.clone());
        if w.check(op).holds() {
            found.push(w);
        }
        chain.pop();
        return;
    }
    let prev = chain.last().expect("nonempty").clone();
    let two_below = if chain.len() >= 2 {
        chain[chain.len() - 2].clone()
    } else {
        Subspace::zero(d)
    };
    for cand in lattice {
        if !cand.contains_subspace(&prev) || !two_below.contains_subspace(&cand.image(op.matrix())) {
            continue;
        }
        chain.push(cand.clone());
        search(op, center, lattice, chain, found);
        chain.pop();
    }
}

/// Summary emitted by the CLI.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonodromyReport {
    pub dimension: usize,
    pub center: i64,
    pub jordan_type: Vec<usize>,
    #[serde(with = "crate::linalg::rational_string")]
    pub stratum_weight: Rational,
    pub filtration_dims: BTreeMap<i64, usize>,
    pub graded_dims: BTreeMap<i64, usize>,
    pub axioms: AxiomReport,
}

pub fn monodromy_report(op: &NilpotentOperator, center: i64) -> MonodromyReport {
    let w = weight_filtration(op, center);
    MonodromyReport {
        dimension: op.dimension(),
        center,
        jordan_type: jordan_type(op),
        stratum_weight: stratum_weight(op),
        filtration_dims: w.dims(),
        graded_dims: w.graded_dims(),
        axioms: w.check(op),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{jordan_nilpotent, random_nilpotent, random_unimodular};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn op(blocks: &[usize]) -> NilpotentOperator {
        NilpotentOperator::new(jordan_nilpotent(blocks)).unwrap()
    }

    fn dims_at(w: &WeightFiltration, ls: std::ops::RangeInclusive<i64>) -> Vec<usize> {
        ls.map(|l| w.level(l).dim()).collect()
    }

    #[test]
    fn jordan_types() {
        assert_eq!(jordan_type(&op(&[1, 1, 1])), vec![1, 1, 1]);
        assert_eq!(jordan_type(&op(&[2])), vec![2]);
        let n = op(&[3, 1]);
        assert_eq!(n.power_ranks()[1..4], [2, 1, 0]);
        assert_eq!(jordan_type(&n), vec![3, 1]);
    }

    #[test]
    fn filtration_examples() {
        let w = weight_filtration(&op(&[1, 1, 1]), 0);
        assert_eq!(w.level(-1).dim(), 0);
        assert_eq!(w.level(0).dim(), 3);
        let w = weight_filtration(&op(&[2]), 0);
        assert_eq!(dims_at(&w, -1..=1), vec![1, 1, 2]);
        let gr: Vec<usize> = (-1..=1).map(|l| w.graded_dims()[&l]).collect();
        assert_eq!(gr, vec![1, 0, 1]);
        let w = weight_filtration(&op(&[3, 1]), 0);
        let gr: Vec<usize> = (-2..=2).map(|l| w.graded_dims()[&l]).collect();
        assert_eq!(gr, vec![1, 0, 2, 0, 1]);
        let shifted = weight_filtration(&op(&[3, 1]), 2);
        assert_eq!(shifted.graded_dims()[&4], 1);
    }

    #[test]
    fn stratum_weights() {
        assert_eq!(stratum_weight(&op(&[1, 1, 1])), Rational::from_integer(1.into()));
        assert_eq!(stratum_weight(&op(&[2])), Rational::from_integer(2.into()));
        assert_eq!(stratum_weight(&op(&[3, 1])), Rational::from_integer(3.into()));
    }

    #[test]
    fn rejects_non_nilpotent() {
        let m = RationalMatrix::from_i64_rows(&[vec![1, 0], vec![0, 0]]);
        assert_eq!(
            NilpotentOperator::new(m),
            Err(MonodromyError::NotNilpotent { dimension: 2 })
        );
        let bad: Result<NilpotentOperator, _> = serde_json::from_str(r#"{"matrix":[["0","1"],["0"]]}"#);
        assert!(bad.is_err());
        let ok: NilpotentOperator = serde_json::from_str(r#"{"matrix":[["0","1/2"],["0","0"]]}"#).unwrap();
        assert_eq!(jordan_type(&ok), vec![2]);
    }

    #[test]
    fn unique_in_small_dimensions() {
        for blocks in [
            vec![1],
            vec![2],
            vec![1, 1],
            vec![3],
            vec![2, 1],
            vec![4],
            vec![3, 1],
            vec![2, 2],
            vec![2, 1, 1],
        ] {
            let n = op(&blocks);
            let all = filtrations_satisfying_axioms(&n, 0);
            assert_eq!(all.len(), 1, "{blocks:?}");
            assert_eq!(all[0], weight_filtration(&n, 0));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn axioms_and_equivariance(seed in any::<u64>(), dim in 1usize..=7, center in -2i64..=2) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (m, mut blocks) = random_nilpotent(&mut rng, dim);
            let n = NilpotentOperator::new(m).unwrap();
            blocks.sort_unstable_by(|a, b| b.cmp(a));
            prop_assert_eq!(jordan_type(&n), blocks.clone());
            let w = weight_filtration(&n, center);
            prop_assert!(w.check(&n).holds());
            let top = (1..=dim as i64).rev().find(|&l| w.graded_dims()[&(center + l)] > 0).unwrap_or(0);
            prop_assert_eq!(Rational::from_integer((top + 1).into()), stratum_weight(&n));
            let (p, p_inv) = random_unimodular(&mut rng, dim, 2 * dim);
            let (p, p_inv) = (p.to_rational(), p_inv.to_rational());
            let conj = n.conjugate(&p, &p_inv).unwrap();
            prop_assert_eq!(weight_filtration(&conj, center), w.transform(&p));
            prop_assert_eq!(stratum_weight(&conj), stratum_weight(&n));
        }
    }
}
