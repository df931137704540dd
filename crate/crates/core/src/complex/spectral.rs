//! Filtered complexes and their spectral sequences.
//!
//! Pages are computed directly as subquotients of the underlying complex.
//! For a decreasing filtration `F^p` and `r >= 0`,
//!
//! ```text
//! Z_r^p   = { x in F^p : dx in F^{p+r} }
//! E_r^p   = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})
//! ```
//!
//! in each total degree, and `d_r : E_r^p -> E_r^{p+r}` is induced by `d`.
//! Bidegrees follow the usual convention `(p, q)` with total degree `p + q`.

use std::collections::BTreeMap;

use crate::linalg::{rank, QuotientBasis, Rational, RationalMatrix, Subspace};

use super::{CochainComplex, ComplexError};

/// A cochain complex with a finite decreasing filtration
/// `C = F^start ⊇ F^{start+1} ⊇ ... ⊇ F^{end} ⊇ 0`.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    complex: CochainComplex,
    start: i64,
    /// `levels[i][k - lo]` is `F^{start+i}` in degree `k`.
    levels: Vec<Vec<Subspace>>,
}

impl FilteredComplex {
    /// `levels[i]` lists, per degree of `complex`, a spanning matrix for
    /// `F^{start+i}`. The first level must be everything.
    pub fn new(
        complex: CochainComplex,
        start: i64,
        levels: Vec<Vec<RationalMatrix>>,
    ) -> Result<Self, ComplexError> {
        if levels.is_empty() {
            return Err(ComplexError::EmptyFiltration);
        }
        let ndeg = complex.dims().len();
        let mut spaces = Vec::with_capacity(levels.len());
        for (i, level) in levels.iter().enumerate() {
            let p = start + i as i64;
            if level.len() != ndeg {
                return Err(ComplexError::FiltrationDegreeCount {
                    level: p,
                    expected: ndeg,
                    found: level.len(),
                });
            }
            let mut row = Vec::with_capacity(ndeg);
            for (k, m) in complex.degrees().zip(level) {
                if m.rows() != complex.dim(k) {
                    return Err(ComplexError::FiltrationAmbient { level: p, degree: k });
                }
                row.push(Subspace::span(m));
            }
            spaces.push(row);
        }
        for k in complex.degrees() {
            let idx = (k - complex.lo()) as usize;
            if spaces[0][idx].dim() != complex.dim(k) {
                return Err(ComplexError::NotExhaustive { degree: k });
            }
        }
        for i in 1..spaces.len() {
            for k in complex.degrees() {
                let idx = (k - complex.lo()) as usize;
                if !spaces[i - 1][idx].contains_subspace(&spaces[i][idx]) {
                    return Err(ComplexError::NotNested {
                        level: start + i as i64,
                        degree: k,
                    });
                }
            }
        }
        let fc = Self {
            complex,
            start,
            levels: spaces,
        };
        for i in 0..fc.levels.len() {
            let p = start + i as i64;
            for k in fc.complex.degrees() {
                let image = fc.level(p, k).image(&fc.complex.differential(k));
                if !fc.level(p, k + 1).contains_subspace(&image) {
                    return Err(ComplexError::NotSubcomplex { level: p, degree: k });
                }
            }
        }
        Ok(fc)
    }

    /// The one-step filtration `F^0 = C`.
    pub fn trivial(complex: CochainComplex) -> Self {
        let level = complex
            .degrees()
            .map(|k| RationalMatrix::identity(complex.dim(k)))
            .collect();
        Self::new(complex, 0, vec![level]).expect("trivial filtration is valid")
    }

    /// The "stupid" filtration `F^p = C^{>= p}` over the complex's degree range.
    pub fn stupid(complex: CochainComplex) -> Self {
        let levels = complex
            .degrees()
            .map(|p| {
                complex
                    .degrees()
                    .map(|k| {
                        if k >= p {
                            RationalMatrix::identity(complex.dim(k))
                        } else {
                            RationalMatrix::zeros(complex.dim(k), 0)
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(complex.clone(), complex.lo(), levels).expect("stupid filtration is valid")
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last filtration index with a (possibly) nonzero level.
    pub fn end(&self) -> i64 {
        self.start + self.levels.len() as i64 - 1
    }

    /// Number of stored levels; `E_r` is stable for `r >= length`.
    pub fn length(&self) -> usize {
        self.levels.len()
    }

    /// `F^p C^k`.
    pub fn level(&self, p: i64, k: i64) -> Subspace {
        let dim = self.complex.dim(k);
        if !self.complex.degrees().contains(&k) {
            return Subspace::zero(0);
        }
        if p <= self.start {
            Subspace::full(dim)
        } else if p > self.end() {
            Subspace::zero(dim)
        } else {
            self.levels[(p - self.start) as usize][(k - self.complex.lo()) as usize].clone()
        }
    }

    /// `Z_r^p` in total degree `k`. For `r = -1` this is `F^p`.
    fn cycles(&self, r: i64, p: i64, k: i64) -> Subspace {
        let d = self.complex.differential(k);
        self.level(p, k).preimage_within(&d, &self.level(p + r, k + 1))
    }

    /// `E_r^p` in total degree `k` as a subquotient.
    fn term(&self, r: i64, p: i64, k: i64) -> QuotientBasis {
        let z = self.cycles(r, p, k);
        let upper = self.cycles(r - 1, p + 1, k);
        let boundary = self
            .cycles(r - 1, p - r + 1, k - 1)
            .image(&self.complex.differential(k - 1));
        QuotientBasis::new(&z, &upper.sum(&boundary))
    }

    fn filtration_indices(&self) -> std::ops::RangeInclusive<i64> {
        self.start..=self.end()
    }

    /// Page `E_r` with its differential.
    pub fn page(&self, r: usize) -> SpectralSequencePage {
        let ri = r as i64;
        let mut terms = BTreeMap::new();
        for p in self.filtration_indices() {
            for k in self.complex.degrees() {
                terms.insert((p, k), self.term(ri, p, k));
            }
        }
        let mut entries = BTreeMap::new();
        let mut differentials = BTreeMap::new();
        for (&(p, k), src) in &terms {
            entries.insert((p, k - p), src.dim());
            let d = self.complex.differential(k);
            let target_dim = terms.get(&(p + ri, k + 1)).map_or(0, QuotientBasis::dim);
            let cols: Vec<Vec<Rational>> = src
                .representatives()
                .columns()
                .iter()
                .map(|x| match terms.get(&(p + ri, k + 1)) {
                    Some(tgt) => tgt
                        .coordinates(&d.mul_vec(x))
                        .expect("d maps Z_r^p into Z_r^{p+r}"),
                    None => Vec::new(),
                })
                .collect();
            differentials.insert((p, k - p), RationalMatrix::from_columns(target_dim, &cols));
        }
        SpectralSequencePage {
            r,
            entries,
            differentials,
        }
    }

    /// `E_∞ = Gr_F H`, read off directly.
    pub fn e_infinity(&self) -> BTreeMap<(i64, i64), usize> {
        let mut out = BTreeMap::new();
        for p in self.filtration_indices() {
            for k in self.complex.degrees() {
                let cyc = self.complex.cocycles(k);
                let bdry = self.complex.coboundaries(k);
                let num = self.level(p, k).intersection(&cyc).sum(&bdry);
                let den = self.level(p + 1, k).intersection(&cyc).sum(&bdry);
                out.insert((p, k - p), num.dim() - den.dim());
            }
        }
        out
    }
}

/// One page `E_r` of a spectral sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralSequencePage {
    pub r: usize,
    /// `(p, q) -> dim E_r^{p,q}`.
    pub entries: BTreeMap<(i64, i64), usize>,
    /// `(p, q) -> d_r : E_r^{p,q} -> E_r^{p+r, q-r+1}`.
    pub differentials: BTreeMap<(i64, i64), RationalMatrix>,
}

impl SpectralSequencePage {
    pub fn dim(&self, p: i64, q: i64) -> usize {
        self.entries.get(&(p, q)).copied().unwrap_or(0)
    }

    fn differential_rank(&self, p: i64, q: i64) -> usize {
        self.differentials.get(&(p, q)).map_or(0, rank)
    }

    pub fn has_nonzero_differential(&self) -> bool {
        self.differentials.values().any(|d| !d.is_zero())
    }

    /// Cohomology of `(E_r, d_r)`, which must match the next page.
    pub fn cohomology(&self) -> BTreeMap<(i64, i64), usize> {
        let r = self.r as i64;
        self.entries
            .iter()
            .map(|(&(p, q), &dim)| {
                let out = self.differential_rank(p, q);
                let inc = self.differential_rank(p - r, q + r - 1);
                ((p, q), dim - out - inc)
            })
            .collect()
    }

    /// Totals `Σ_{p+q=k} dim E^{p,q}`.
    pub fn totals(&self) -> BTreeMap<i64, usize> {
        totals(&self.entries)
    }
}

pub fn totals(entries: &BTreeMap<(i64, i64), usize>) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for (&(p, q), &d) in entries {
        *out.entry(p + q).or_insert(0) += d;
    }
    out
}

/// Full output of [`spectral_sequence`].
#[derive(Clone, Debug)]
pub struct SpectralSequence {
    pub pages: Vec<SpectralSequencePage>,
    pub e_infinity: BTreeMap<(i64, i64), usize>,
    /// First `r` from which every later page equals `E_∞`.
    pub stable_from: usize,
}

/// Pages `E_0 ..= E_{r_max}` plus `E_∞`.
pub fn spectral_sequence(fc: &FilteredComplex, r_max: usize) -> SpectralSequence {
    let pages: Vec<SpectralSequencePage> = (0..=r_max).map(|r| fc.page(r)).collect();
    let e_infinity = fc.e_infinity();
    let stable_from = (0..=fc.length())
        .find(|&r| {
            (r..=fc.length()).all(|s| {
                let page = pages.get(s).cloned().unwrap_or_else(|| fc.page(s));
                page.entries == e_infinity
            })
        })
        .unwrap_or(fc.length());
    SpectralSequence {
        pages,
        e_infinity,
        stable_from,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DegenerationReport {
    pub degenerates_at_e1: bool,
    pub first_nonzero_differential: Option<usize>,
}

/// Checks whether every `d_r` with `r >= 1` vanishes. Pages past the
/// filtration length have zero differentials, so only those are inspected.
pub fn degeneration_check(fc: &FilteredComplex) -> DegenerationReport {
    let first = (1..=fc.length()).find(|&r| fc.page(r).has_nonzero_differential());
    DegenerationReport {
        degenerates_at_e1: first.is_none(),
        first_nonzero_differential: first,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> CochainComplex {
        let d0 = RationalMatrix::from_i64_rows(&[vec![-1, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]]);
        CochainComplex::new(0, vec![3, 3], vec![d0]).unwrap()
    }

    #[test]
    fn trivial_filtration_e1_is_cohomology() {
        let c = circle();
        let fc = FilteredComplex::trivial(c.clone());
        let ss = spectral_sequence(&fc, 3);
        assert_eq!(ss.pages[1].entries, BTreeMap::from([((0, 0), 1), ((0, 1), 1)]));
        assert_eq!(ss.pages[1].totals(), c.cohomology_dims());
        assert_eq!(ss.stable_from, 1);
        assert!(degeneration_check(&fc).degenerates_at_e1);
    }

    #[test]
    fn stupid_filtration_of_circle() {
        let fc = FilteredComplex::stupid(circle());
        let ss = spectral_sequence(&fc, 3);
        // E_0^{p,0} = C^p, d_0 = 0, so E_1 = C
        assert_eq!(
            ss.pages[1].entries,
            BTreeMap::from([((0, 0), 3), ((1, -1), 0), ((0, 1), 0), ((1, 0), 3)])
        );
        assert_eq!(ss.pages[2].totals(), BTreeMap::from([(0, 1), (1, 1)]));
        assert_eq!(ss.pages[2].entries, ss.e_infinity);
        let report = degeneration_check(&fc);
        assert!(!report.degenerates_at_e1);
        assert_eq!(report.first_nonzero_differential, Some(1));
    }

    #[test]
    fn two_step_filtration_of_acyclic_complex() {
        let c = CochainComplex::new(0, vec![1, 1], vec![RationalMatrix::identity(1)]).unwrap();
        let fc = FilteredComplex::stupid(c);
        let ss = spectral_sequence(&fc, 2);
        assert!(ss.e_infinity.values().all(|&d| d == 0));
    }

    #[test]
    fn split_differential_has_nonzero_d1() {
        // C^0 = ℚ → C^1 = ℚ by 1; F^1 = C^1 only. d crosses filtration levels.
        let c = CochainComplex::new(0, vec![1, 1], vec![RationalMatrix::identity(1)]).unwrap();
        let levels = vec![
            vec![RationalMatrix::identity(1), RationalMatrix::identity(1)],
            vec![RationalMatrix::zeros(1, 0), RationalMatrix::identity(1)],
        ];
        let fc = FilteredComplex::new(c, 0, levels).unwrap();
        let report = degeneration_check(&fc);
        assert_eq!(report.first_nonzero_differential, Some(1));
        assert!(!report.degenerates_at_e1);
    }

    #[test]
    fn rejects_non_subcomplex() {
        // F^1 = C^0 only: d(F^1) lands outside F^1
        let c = CochainComplex::new(0, vec![1, 1], vec![RationalMatrix::identity(1)]).unwrap();
        let levels = vec![
            vec![RationalMatrix::identity(1), RationalMatrix::identity(1)],
            vec![RationalMatrix::identity(1), RationalMatrix::zeros(1, 0)],
        ];
        let err = FilteredComplex::new(c, 0, levels).unwrap_err();
        assert_eq!(err, ComplexError::NotSubcomplex { level: 1, degree: 0 });
    }

    #[test]
    fn rejects_non_nested_and_non_exhaustive() {
        let c = CochainComplex::zero_differentials(0, vec![2]).unwrap();
        let e1 = RationalMatrix::from_i64_rows(&[vec![1], vec![0]]);
        let e2 = RationalMatrix::from_i64_rows(&[vec![0], vec![1]]);
        let err = FilteredComplex::new(c.clone(), 0, vec![vec![e1.clone()]]).unwrap_err();
        assert_eq!(err, ComplexError::NotExhaustive { degree: 0 });
        let levels = vec![vec![RationalMatrix::identity(2)], vec![e1], vec![e2]];
        let err = FilteredComplex::new(c, 0, levels).unwrap_err();
        assert_eq!(err, ComplexError::NotNested { level: 2, degree: 0 });
    }
}
