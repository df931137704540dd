//! Weight functions on cone complexes.
//!
//! A weight function assigns a rational to every ray (0-cell). Its value on
//! a higher cell is the value of the linear extension at the sum of the
//! cell's primitive ray generators, i.e. the sum of its ray values. Callers
//! that need other cell values supply them explicitly through
//! [`CellWeights`].

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::conecx::{CellId, ConeComplex};
use crate::linalg::{rational_map, solve_rational, Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WeightError {
    #[error("no weight for ray {0:?}")]
    MissingRay(String),
    #[error("weight given for {0:?}, which is not a cell of the complex")]
    UnknownCell(String),
    #[error("weight of {cell:?} is {value}, but weights must be positive")]
    NonPositive { cell: String, value: Rational },
    #[error("the complex has no ray coordinates")]
    MissingRayCoordinates,
    #[error("maximal cell {0:?} is not simplicial: its rays are linearly dependent")]
    NonSimplicial(String),
}

/// Ray name -> value. Values are stored as given; positivity is checked by
/// [`validate_positivity`] and by every operation that needs it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WeightFunction {
    #[serde(with = "rational_map")]
    values: BTreeMap<String, Rational>,
}

impl WeightFunction {
    pub fn new(values: BTreeMap<String, Rational>) -> Self {
        Self { values }
    }

    /// The same value on every ray of `c`.
    pub fn constant(c: &ConeComplex, value: Rational) -> Self {
        Self::new(
            c.components()
                .iter()
                .map(|n| (n.clone(), value.clone()))
                .collect(),
        )
    }

    pub fn values(&self) -> &BTreeMap<String, Rational> {
        &self.values
    }

    pub fn get(&self, ray: &str) -> Option<&Rational> {
        self.values.get(ray)
    }

    /// Multiplies every value by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Self {
        Self::new(self.values.iter().map(|(k, v)| (k.clone(), v * factor)).collect())
    }

    /// Values in component order of `c`.
    pub fn ray_values(&self, c: &ConeComplex) -> Result<Vec<Rational>, WeightError> {
        c.components()
            .iter()
            .map(|n| {
                self.values
                    .get(n)
                    .cloned()
                    .ok_or_else(|| WeightError::MissingRay(n.clone()))
            })
            .collect()
    }

    /// Sum of the ray values of the cell.
    pub fn cell_value(&self, c: &ConeComplex, id: CellId) -> Result<Rational, WeightError> {
        let rays = self.ray_values(c)?;
        let cell = c
            .cell(id)
            .map_err(|_| WeightError::UnknownCell(format!("{}:{}", id.dim, id.index)))?;
        Ok(cell.vertices.iter().map(|&v| rays[v].clone()).sum())
    }

    fn check_keys(&self, c: &ConeComplex) -> Result<(), WeightError> {
        for name in self.values.keys() {
            if !c.components().contains(name) {
                return Err(WeightError::UnknownCell(name.clone()));
            }
        }
        Ok(())
    }
}

/// A positive value on every cell of a complex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellWeights {
    values: Vec<Vec<Rational>>,
}

impl CellWeights {
    /// Cell values derived from ray values by summation.
    pub fn from_weight_function(c: &ConeComplex, w: &WeightFunction) -> Result<Self, WeightError> {
        Self::resolve(c, w.values())
    }

    /// `value` on every cell, rays and higher cells alike.
    pub fn constant(c: &ConeComplex, value: Rational) -> Result<Self, WeightError> {
        let map = c.cell_ids().map(|id| (c.label(id), value.clone())).collect();
        Self::resolve(c, &map)
    }

    /// Looks up every cell by label in `given`; cells of dimension at least
    /// one that are absent get the sum of their ray values. Every ray must be
    /// present and every resulting value must be positive.
    pub fn resolve(c: &ConeComplex, given: &BTreeMap<String, Rational>) -> Result<Self, WeightError> {
        let labels: BTreeMap<String, CellId> = c.cell_ids().map(|id| (c.label(id), id)).collect();
        for key in given.keys() {
            if !labels.contains_key(key) {
                return Err(WeightError::UnknownCell(key.clone()));
            }
        }
        let mut values: Vec<Vec<Rational>> = c
            .cell_counts()
            .iter()
            .map(|&n| vec![Rational::zero(); n])
            .collect();
        for id in c.cell_ids() {
            let label = c.label(id);
            let value = match given.get(&label) {
                Some(v) => v.clone(),
                None if id.dim == 0 => return Err(WeightError::MissingRay(label)),
                None => {
                    let cell = c.cell(id).expect("listed cell");
                    cell.vertices.iter().map(|&v| values[0][v].clone()).sum()
                }
            };
            if !value.is_positive() {
                return Err(WeightError::NonPositive { cell: label, value });
            }
            values[id.dim][id.index] = value;
        }
        Ok(Self { values })
    }

    pub fn get(&self, id: CellId) -> &Rational {
        &self.values[id.dim][id.index]
    }

    /// Values of the cells of one dimension, in cell order.
    pub fn of_dim(&self, dim: usize) -> &[Rational] {
        self.values.get(dim).map_or(&[], Vec::as_slice)
    }

    /// Sorted distinct values.
    pub fn distinct_values(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.values.iter().flatten().cloned().collect();
        v.sort();
        v.dedup();
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    /// Rays with value `<= 0`, with their values.
    #[serde(with = "rational_map")]
    pub non_positive: BTreeMap<String, Rational>,
}

impl PositivityReport {
    pub fn is_valid(&self) -> bool {
        self.non_positive.is_empty()
    }
}

/// Checks every ray of `c` has a positive weight.
pub fn validate_positivity(w: &WeightFunction, c: &ConeComplex) -> Result<PositivityReport, WeightError> {
    w.check_keys(c)?;
    let values = w.ray_values(c)?;
    let non_positive = c
        .components()
        .iter()
        .zip(values)
        .filter(|(_, v)| !v.is_positive())
        .map(|(n, v)| (n.clone(), v))
        .collect();
    Ok(PositivityReport { non_positive })
}

/// One failed inequality `ℓ_cone(v_ray) <= w(ray)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexityViolation {
    pub cone: String,
    pub neighbour: String,
    pub ray: String,
    #[serde(with = "crate::linalg::rational_string")]
    pub linear_value: Rational,
    #[serde(with = "crate::linalg::rational_string")]
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvexityReport {
    /// Ordered pairs of adjacent maximal cells that were compared.
    pub pairs_checked: usize,
    /// Pairs skipped because the neighbour's extra ray is outside the span
    /// of the cone, where the linear piece is not determined.
    pub pairs_skipped: usize,
    pub violations: Vec<ConvexityViolation>,
}

impl ConvexityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks that the piecewise-linear extension of `w` is convex across every
/// pair of adjacent maximal cells: on each cone, the linear function agreeing
/// with `w` on its rays must not exceed `w` on the extra ray of a neighbour.
pub fn validate_convexity(w: &WeightFunction, c: &ConeComplex) -> Result<ConvexityReport, WeightError> {
    w.check_keys(c)?;
    let rays = c.rays().ok_or(WeightError::MissingRayCoordinates)?;
    let values = w.ray_values(c)?;
    let maximal = c.maximal_cells();
    let mut generators = BTreeMap::new();
    for &id in &maximal {
        let cell = c.cell(id).expect("maximal cell");
        let cols: Vec<Vec<Rational>> = cell
            .vertices
            .iter()
            .map(|&v| {
                rays[v]
                    .iter()
                    .map(|&x| Rational::from_integer(x.into()))
                    .collect()
            })
            .collect();
        let m = RationalMatrix::from_columns(rays[0].len(), &cols);
        if crate::linalg::rank(&m) != cell.vertices.len() {
            return Err(WeightError::NonSimplicial(c.label(id)));
        }
        generators.insert(id, m);
    }

    let mut report = ConvexityReport {
        pairs_checked: 0,
        pairs_skipped: 0,
        violations: Vec::new(),
    };
    for &a in &maximal {
        let va = &c.cell(a).expect("maximal cell").vertices;
        for &b in &maximal {
            if a == b || a.dim != b.dim || a.dim == 0 {
                continue;
            }
            let vb = &c.cell(b).expect("maximal cell").vertices;
            let extra: Vec<usize> = vb.iter().copied().filter(|v| !va.contains(v)).collect();
            if extra.len() != 1 {
                continue;
            }
            let shared = c
                .closure(a)
                .intersection(&c.closure(b))
                .any(|f| f.dim + 1 == a.dim);
            if !shared {
                continue;
            }
            let rho = extra[0];
            let target: Vec<Rational> = rays[rho]
                .iter()
                .map(|&x| Rational::from_integer(x.into()))
                .collect();
            let Some(lambda) = solve_rational(&generators[&a], &target) else {
                report.pairs_skipped += 1;
                continue;
            };
            report.pairs_checked += 1;
            let linear_value: Rational = va.iter().zip(&lambda).map(|(&v, l)| l * &values[v]).sum();
            if linear_value > values[rho] {
                report.violations.push(ConvexityViolation {
                    cone: c.label(a),
                    neighbour: c.label(b),
                    ray: c.components()[rho].clone(),
                    linear_value,
                    weight: values[rho].clone(),
                });
            }
        }
    }
    Ok(report)
}

/// Minimum-norm solution `c` of `Σ c_i f_i = target`, namely
/// `c_i = target · f_i / Σ f_j²`. `None` if every `f_i` is zero.
pub fn compatibility_coefficients(target: &Rational, faces: &[Rational]) -> Option<Vec<Rational>> {
    let norm: Rational = faces.iter().map(|f| f * f).sum();
    if norm.is_zero() {
        return None;
    }
    Some(faces.iter().map(|f| target * f / &norm).collect())
}

/// For every cell of dimension at least one, coefficients over its facets
/// expressing its weight as a combination of theirs.
pub fn face_compatibility(
    c: &ConeComplex,
    weights: &CellWeights,
) -> BTreeMap<CellId, Vec<(CellId, Rational)>> {
    let mut out = BTreeMap::new();
    for id in c.cell_ids().filter(|id| id.dim > 0) {
        let facets: Vec<CellId> = c.facets(id).into_iter().map(|(f, _)| f).collect();
        let face_values: Vec<Rational> = facets.iter().map(|&f| weights.get(f).clone()).collect();
        let coeffs = compatibility_coefficients(weights.get(id), &face_values)
            .expect("positive weights have positive norm");
        out.insert(id, facets.into_iter().zip(coeffs).collect());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conecx::{build_cone_complex, IntersectionData, Stratum};
    use crate::linalg::rational;

    fn three_lines() -> ConeComplex {
        let s = |a: &str, b: &str| Stratum {
            components: vec![a.into(), b.into()],
            tag: String::new(),
            faces: BTreeMap::new(),
        };
        build_cone_complex(&IntersectionData {
            components: vec!["H1".into(), "H2".into(), "H3".into()],
            strata: vec![s("H1", "H2"), s("H1", "H3"), s("H2", "H3")],
            rays: None,
        })
        .unwrap()
    }

    fn two_cones() -> ConeComplex {
        ConeComplex::from_fan(&[vec![1, 0], vec![1, 1], vec![0, 1]], &[vec![0, 1], vec![1, 2]]).unwrap()
    }

    fn weights(values: &[(&str, Rational)]) -> WeightFunction {
        WeightFunction::new(values.iter().map(|(k, v)| (k.to_string(), v.clone())).collect())
    }

    #[test]
    fn positivity() {
        let c = three_lines();
        let one = WeightFunction::constant(&c, rational(1, 1));
        assert!(validate_positivity(&one, &c).unwrap().is_valid());
        let w = weights(&[
            ("H1", rational(1, 1)),
            ("H2", rational(0, 1)),
            ("H3", rational(1, 1)),
        ]);
        let report = validate_positivity(&w, &c).unwrap();
        assert_eq!(report.non_positive.keys().collect::<Vec<_>>(), vec!["H2"]);
        let w = weights(&[
            ("H1", rational(1, 2)),
            ("H2", rational(3, 1)),
            ("H3", rational(7, 5)),
        ]);
        assert!(validate_positivity(&w, &c).unwrap().is_valid());
        let w = weights(&[("H1", rational(1, 1))]);
        assert_eq!(
            validate_positivity(&w, &c),
            Err(WeightError::MissingRay("H2".into()))
        );
    }

    #[test]
    fn convexity_examples() {
        let c = two_cones();
        let ones = weights(&[
            ("r0", rational(1, 1)),
            ("r1", rational(1, 1)),
            ("r2", rational(1, 1)),
        ]);
        let report = validate_convexity(&ones, &c).unwrap();
        assert!(report.is_valid());
        assert_eq!(report.pairs_checked, 2);

        let bent = weights(&[
            ("r0", rational(1, 1)),
            ("r1", rational(3, 1)),
            ("r2", rational(1, 1)),
        ]);
        let report = validate_convexity(&bent, &c).unwrap();
        assert!(!report.is_valid());
        let v = &report.violations[0];
        assert_eq!((v.cone.as_str(), v.ray.as_str()), ("r0,r1", "r2"));
        assert_eq!(v.linear_value, rational(2, 1));
        assert_eq!(v.weight, rational(1, 1));

        let single = ConeComplex::from_fan(&[vec![1, 0], vec![0, 1]], &[vec![0, 1]]).unwrap();
        let w = weights(&[("r0", rational(5, 1)), ("r1", rational(1, 7))]);
        let report = validate_convexity(&w, &single).unwrap();
        assert!(report.is_valid());
        assert_eq!(report.pairs_checked, 0);
    }

    #[test]
    fn convexity_needs_rays() {
        let c = three_lines();
        let w = WeightFunction::constant(&c, rational(1, 1));
        assert_eq!(
            validate_convexity(&w, &c),
            Err(WeightError::MissingRayCoordinates)
        );
    }

    #[test]
    fn compatibility_examples() {
        let c = three_lines();
        let cw = CellWeights::constant(&c, rational(1, 1)).unwrap();
        let fc = face_compatibility(&c, &cw);
        for coeffs in fc.values() {
            let cs: Vec<Rational> = coeffs.iter().map(|(_, q)| q.clone()).collect();
            assert_eq!(cs, vec![rational(1, 2), rational(1, 2)]);
        }
        let cs = compatibility_coefficients(&rational(3, 1), &[rational(1, 1), rational(2, 1)]).unwrap();
        assert_eq!(cs, vec![rational(3, 5), rational(6, 5)]);
        let cs = compatibility_coefficients(&rational(5, 1), &[rational(2, 1)]).unwrap();
        assert_eq!(cs, vec![rational(5, 2)]);
    }

    #[test]
    fn compatibility_identity_holds() {
        let c = three_lines();
        let w = weights(&[
            ("H1", rational(1, 2)),
            ("H2", rational(3, 1)),
            ("H3", rational(7, 5)),
        ]);
        let cw = CellWeights::from_weight_function(&c, &w).unwrap();
        for (id, coeffs) in face_compatibility(&c, &cw) {
            let total: Rational = coeffs.iter().map(|(f, q)| q * cw.get(*f)).sum();
            assert_eq!(&total, cw.get(id));
        }
    }

    #[test]
    fn derived_cell_values_are_ray_sums() {
        let c = three_lines();
        let w = weights(&[
            ("H1", rational(1, 2)),
            ("H2", rational(3, 1)),
            ("H3", rational(7, 5)),
        ]);
        let cw = CellWeights::from_weight_function(&c, &w).unwrap();
        let e = c.find("H1,H2").unwrap();
        assert_eq!(cw.get(e), &rational(7, 2));
        assert_eq!(w.cell_value(&c, e).unwrap(), rational(7, 2));
    }

    #[test]
    fn explicit_cell_values_override() {
        let c = three_lines();
        let mut given: BTreeMap<String, Rational> = c
            .components()
            .iter()
            .map(|n| (n.clone(), rational(1, 1)))
            .collect();
        given.insert("H1,H3".into(), rational(9, 1));
        let cw = CellWeights::resolve(&c, &given).unwrap();
        assert_eq!(cw.get(c.find("H1,H3").unwrap()), &rational(9, 1));
        assert_eq!(cw.get(c.find("H2,H3").unwrap()), &rational(2, 1));
        given.insert("H1,H3".into(), rational(-1, 1));
        assert!(matches!(
            CellWeights::resolve(&c, &given),
            Err(WeightError::NonPositive { .. })
        ));
        given.insert("nope".into(), rational(1, 1));
        assert_eq!(
            CellWeights::resolve(&c, &given),
            Err(WeightError::UnknownCell("nope".into()))
        );
    }

    #[test]
    fn json_uses_strings() {
        let w = weights(&[("a", rational(1, 2)), ("b", rational(3, 1))]);
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, r#"{"a":"1/2","b":"3"}"#);
        let back: WeightFunction = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }
}
