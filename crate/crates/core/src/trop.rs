//! Weighted tropical cochains on a cone complex and the filtration by
//! weight thresholds.
//!
//! The weighted coboundary is `d_w = W^{-1} δ W`, where `δ` is the
//! simplicial coboundary and `W` scales each cell by its weight:
//! `(d_w f)(σ) = Σ_τ sign(τ, σ) · w(τ)/w(σ) · f(τ)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::{spectral_sequence, CochainComplex, FilteredComplex};
use crate::conecx::{CellId, ConeComplex};
use crate::linalg::{format_rational, Rational, RationalMatrix};
use crate::weights::{CellWeights, WeightError, WeightFunction};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TropError {
    #[error(transparent)]
    Weights(#[from] WeightError),
    #[error("thresholds must be strictly increasing; {previous} is followed by {next}")]
    UnsortedThresholds { previous: String, next: String },
    #[error(
        "threshold {threshold}: cell {cell:?} (weight {cell_weight}) has coface {coface:?} \
         (weight {coface_weight}) below it; weights must not decrease from a cell to its cofaces"
    )]
    NotSubcomplex {
        threshold: String,
        cell: String,
        cell_weight: String,
        coface: String,
        coface_weight: String,
    },
}

#[derive(Clone, Debug)]
pub struct WeightedTropComplex {
    base: ConeComplex,
    weights: CellWeights,
    complex: CochainComplex,
}

pub fn weighted_complex(base: &ConeComplex, weights: &CellWeights) -> WeightedTropComplex {
    let diffs = (0..base.max_dim())
        .map(|p| {
            let delta = base.coboundary(p);
            let mut d = RationalMatrix::zeros(delta.rows(), delta.cols());
            for (row, col, v) in delta.entries() {
                let tau = weights.get(CellId { dim: p, index: col });
                let sigma = weights.get(CellId {
                    dim: p + 1,
                    index: row,
                });
                d.set(row, col, v * tau / sigma);
            }
            d
        })
        .collect();
    let complex =
        CochainComplex::new(0, base.cell_counts(), diffs).expect("conjugate of a complex is a complex");
    WeightedTropComplex {
        base: base.clone(),
        weights: weights.clone(),
        complex,
    }
}

/// Cell weights derived from ray values by summation.
pub fn weighted_complex_from_rays(
    base: &ConeComplex,
    w: &WeightFunction,
) -> Result<WeightedTropComplex, TropError> {
    Ok(weighted_complex(
        base,
        &CellWeights::from_weight_function(base, w)?,
    ))
}

impl WeightedTropComplex {
    pub fn base(&self) -> &ConeComplex {
        &self.base
    }

    pub fn weights(&self) -> &CellWeights {
        &self.weights
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.complex
    }
}

pub fn tropical_cohomology(t: &WeightedTropComplex) -> BTreeMap<i64, usize> {
    t.complex.cohomology_dims()
}

/// `F^0` is everything and `F^i` is spanned by the cells of weight at least
/// `thresholds[i-1]`.
pub fn threshold_filtration(
    t: &WeightedTropComplex,
    thresholds: &[Rational],
) -> Result<FilteredComplex, TropError> {
    for pair in thresholds.windows(2) {
        if pair[0] >= pair[1] {
            return Err(TropError::UnsortedThresholds {
                previous: format_rational(&pair[0]),
                next: format_rational(&pair[1]),
            });
        }
    }
    let c = &t.base;
    for th in thresholds {
        for id in c.cell_ids() {
            let wt = t.weights.get(id);
            if wt < th {
                continue;
            }
            for up in c.cofacets(id) {
                let wu = t.weights.get(up);
                if wu < th {
                    return Err(TropError::NotSubcomplex {
                        threshold: format_rational(th),
                        cell: c.label(id),
                        cell_weight: format_rational(wt),
                        coface: c.label(up),
                        coface_weight: format_rational(wu),
                    });
                }
            }
        }
    }
    let counts = c.cell_counts();
    let level = |min: Option<&Rational>| -> Vec<RationalMatrix> {
        counts
            .iter()
            .enumerate()
            .map(|(dim, &n)| {
                let cols: Vec<Vec<Rational>> = (0..n)
                    .filter(|&index| min.is_none_or(|m| t.weights.get(CellId { dim, index }) >= m))
                    .map(|index| {
                        let mut e = vec![Rational::from_integer(0.into()); n];
                        e[index] = Rational::from_integer(1.into());
                        e
                    })
                    .collect();
                RationalMatrix::from_columns(n, &cols)
            })
            .collect()
    };
    let mut levels = vec![level(None)];
    levels.extend(thresholds.iter().map(|th| level(Some(th))));
    Ok(FilteredComplex::new(t.complex.clone(), 0, levels).expect("threshold levels are subcomplexes"))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bidegree {
    pub p: i64,
    pub q: i64,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PageSummary {
    pub r: usize,
    pub entries: Vec<Bidegree>,
    pub nonzero_differential: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TropSpectralReport {
    pub thresholds: Vec<String>,
    pub pages: Vec<PageSummary>,
    pub e_infinity: Vec<Bidegree>,
    pub e_infinity_totals: BTreeMap<i64, usize>,
    pub cohomology: BTreeMap<i64, usize>,
    pub degenerates_at_e1: bool,
    pub first_nonzero_differential: Option<usize>,
}

fn bidegrees(entries: &BTreeMap<(i64, i64), usize>) -> Vec<Bidegree> {
    entries
        .iter()
        .filter(|(_, &d)| d > 0)
        .map(|(&(p, q), &dim)| Bidegree { p, q, dim })
        .collect()
}

/// Spectral sequence of the threshold filtration. Without explicit
/// thresholds the sorted distinct cell weights are used.
pub fn weight_filtration_ss(
    t: &WeightedTropComplex,
    thresholds: Option<&[Rational]>,
) -> Result<TropSpectralReport, TropError> {
    let default;
    let thresholds = match thresholds {
        Some(th) => th,
        None => {
            default = t.weights.distinct_values();
            &default
        }
    };
    let fc = threshold_filtration(t, thresholds)?;
    let ss = spectral_sequence(&fc, fc.length().max(1));
    // pages past the filtration length have zero differentials
    let first_nonzero_differential = ss
        .pages
        .iter()
        .skip(1)
        .find(|page| page.has_nonzero_differential())
        .map(|page| page.r);
    Ok(TropSpectralReport {
        thresholds: thresholds.iter().map(format_rational).collect(),
        pages: ss
            .pages
            .iter()
            .skip(1)
            .map(|page| PageSummary {
                r: page.r,
                entries: bidegrees(&page.entries),
                nonzero_differential: page.has_nonzero_differential(),
            })
            .collect(),
        e_infinity: bidegrees(&ss.e_infinity),
        e_infinity_totals: crate::complex::totals(&ss.e_infinity),
        cohomology: tropical_cohomology(t),
        degenerates_at_e1: first_nonzero_differential.is_none(),
        first_nonzero_differential,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conecx::{build_cone_complex, IntersectionData};
    use crate::linalg::rational;
    use crate::testing::{random_cell_weights, random_simplicial_data};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn parse(json: &str) -> ConeComplex {
        let data: IntersectionData = serde_json::from_str(json).unwrap();
        build_cone_complex(&data).unwrap()
    }

    fn circle() -> ConeComplex {
        parse(
            r#"{"components":["H1","H2","H3"],"strata":[{"components":["H1","H2"]},{"components":["H1","H3"]},{"components":["H2","H3"]}]}"#,
        )
    }

    fn labelled(c: &ConeComplex, f: impl Fn(CellId) -> Rational) -> CellWeights {
        let given = c.cell_ids().map(|id| (c.label(id), f(id))).collect();
        CellWeights::resolve(c, &given).unwrap()
    }

    fn dims(v: &[(i64, usize)]) -> BTreeMap<i64, usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn constant_one_is_unweighted() {
        let c = circle();
        let t = weighted_complex(&c, &CellWeights::constant(&c, rational(1, 1)).unwrap());
        assert_eq!(t.complex().differential(0), c.coboundary(0));
        assert_eq!(tropical_cohomology(&t), dims(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn examples() {
        let c = circle();
        let w = labelled(&c, |id| rational(id.index as i64 + 2 * id.dim as i64 + 1, 3));
        assert_eq!(
            tropical_cohomology(&weighted_complex(&c, &w)),
            dims(&[(0, 1), (1, 1)])
        );
        let simplex = parse(
            r#"{"components":["A","B","C"],"strata":[{"components":["A","B"]},{"components":["A","C"]},{"components":["B","C"]},{"components":["A","B","C"]}]}"#,
        );
        let w = labelled(&simplex, |id| rational(id.index as i64 + 1, 1));
        assert_eq!(
            tropical_cohomology(&weighted_complex(&simplex, &w)),
            dims(&[(0, 1), (1, 0), (2, 0)])
        );
        let points = parse(r#"{"components":["A","B"]}"#);
        let w = CellWeights::constant(&points, rational(5, 2)).unwrap();
        assert_eq!(
            tropical_cohomology(&weighted_complex(&points, &w)),
            dims(&[(0, 2)])
        );
    }

    #[test]
    fn threshold_spectral_sequences() {
        let c = circle();
        let w = labelled(&c, |id| rational(id.dim as i64 + 1, 1));
        let t = weighted_complex(&c, &w);
        let trivial = weight_filtration_ss(&t, Some(&[rational(1, 2)])).unwrap();
        assert!(trivial.degenerates_at_e1);
        assert_eq!(trivial.pages[0].entries.iter().map(|b| b.dim).sum::<usize>(), 2);
        let edges = weight_filtration_ss(&t, Some(&[rational(2, 1)])).unwrap();
        assert_eq!(edges.e_infinity_totals, dims(&[(0, 1), (1, 1)]));
        assert_eq!(edges.first_nonzero_differential, Some(1));
        let default = weight_filtration_ss(&t, None).unwrap();
        assert_eq!(default.thresholds, vec!["1", "2"]);
    }

    #[test]
    fn rejects_decreasing_weights() {
        let c = circle();
        let w = labelled(&c, |id| rational(3 - id.dim as i64, 1));
        let t = weighted_complex(&c, &w);
        let err = weight_filtration_ss(&t, Some(&[rational(3, 1)])).unwrap_err();
        match err {
            TropError::NotSubcomplex { cell, coface, .. } => {
                assert_eq!(cell, "H1");
                assert_eq!(coface, "H1,H2");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            weight_filtration_ss(&t, Some(&[rational(2, 1), rational(1, 1)])),
            Err(TropError::UnsortedThresholds { .. })
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn weight_invariance_and_e_infinity(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = build_cone_complex(&random_simplicial_data(&mut rng, 6, 4)).unwrap();
            let plain = c.simplicial_cohomology();
            let w = random_cell_weights(&mut rng, &c);
            let t = weighted_complex(&c, &w);
            prop_assert_eq!(&tropical_cohomology(&t), &plain);
            let d = t.complex();
            for k in 0..c.max_dim() as i64 {
                prop_assert!(d.differential(k + 1).mul(&d.differential(k)).is_zero());
            }
            // weights increasing along cofaces make every threshold admissible
            let mono = labelled(&c, |id| w.get(CellId { dim: 0, index: 0 }).clone() + Rational::from_integer((id.dim as i64).into()));
            let tm = weighted_complex(&c, &mono);
            let report = weight_filtration_ss(&tm, None).unwrap();
            prop_assert_eq!(report.e_infinity_totals.into_iter().filter(|(_, d)| *d > 0).collect::<BTreeMap<_, _>>(),
                plain.into_iter().filter(|(_, d)| *d > 0).collect::<BTreeMap<_, _>>());
        }
    }
}
