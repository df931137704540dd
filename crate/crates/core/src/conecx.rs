//! Cone complexes of boundary divisors.
//!
//! Vertices are the boundary components; a `p`-cell is a connected component
//! of an intersection of `p + 1` of them. Connected components are given
//! explicitly by a tag, since they cannot be recovered from the subsets.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::complex::CochainComplex;
use crate::linalg::{Rational, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeComplexError {
    #[error("no components given")]
    NoComponents,
    #[error("component {0:?} is listed twice")]
    DuplicateComponent(String),
    #[error("stratum {stratum:?} mentions unknown component {name:?}")]
    UnknownComponent { stratum: Vec<String>, name: String },
    #[error("stratum {0:?} must list at least two distinct components")]
    StratumTooSmall(Vec<String>),
    #[error("stratum {components:?} with tag {tag:?} is listed twice")]
    DuplicateStratum { components: Vec<String>, tag: String },
    #[error("stratum {stratum:?} is present but no stratum covers its subset {missing:?}")]
    MissingFace {
        stratum: Vec<String>,
        missing: Vec<String>,
    },
    #[error("stratum {stratum:?} has several candidate faces over {face:?}; name one under \"faces\"")]
    AmbiguousFace { stratum: Vec<String>, face: Vec<String> },
    #[error("stratum {stratum:?} names face tag {tag:?} over {face:?}, which does not exist")]
    UnknownFaceTag {
        stratum: Vec<String>,
        face: Vec<String>,
        tag: String,
    },
    #[error("ray for {0:?} is missing")]
    MissingRay(String),
    #[error("ray given for unknown component {0:?}")]
    UnknownRay(String),
    #[error("ray for {0:?} is not primitive")]
    RayNotPrimitive(String),
    #[error("rays have inconsistent lengths")]
    RayDimensionMismatch,
    #[error("unknown cell {0}")]
    UnknownCell(String),
}

/// A stratum of codimension at least two.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stratum {
    pub components: Vec<String>,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub tag: String,
    /// Omitted component -> tag of the face obtained by dropping it. Only
    /// needed when that face is ambiguous.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub faces: BTreeMap<String, String>,
}

/// Boundary components, the strata where they meet, and optional ray vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntersectionData {
    pub components: Vec<String>,
    #[serde(default)]
    pub strata: Vec<Stratum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rays: Option<BTreeMap<String, Vec<i64>>>,
}

/// `(dimension, index within that dimension)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId {
    pub dim: usize,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    /// Sorted component indices.
    pub vertices: Vec<usize>,
    pub tag: String,
    /// Codimension-one faces with incidence signs.
    pub facets: Vec<(usize, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IntersectionData", into = "IntersectionData")]
pub struct ConeComplex {
    components: Vec<String>,
    cells: Vec<Vec<Cell>>,
    rays: Option<Vec<Vec<i64>>>,
}

impl TryFrom<IntersectionData> for ConeComplex {
    type Error = ConeComplexError;

    fn try_from(d: IntersectionData) -> Result<Self, Self::Error> {
        build_cone_complex(&d)
    }
}

impl From<ConeComplex> for IntersectionData {
    fn from(c: ConeComplex) -> Self {
        c.intersection_data()
    }
}

/// Validates the data and assembles the cells with deterministic order:
/// by dimension, then lexicographically by component indices, then by tag.
pub fn build_cone_complex(d: &IntersectionData) -> Result<ConeComplex, ConeComplexError> {
    if d.components.is_empty() {
        return Err(ConeComplexError::NoComponents);
    }
    let mut index = BTreeMap::new();
    for (i, name) in d.components.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(ConeComplexError::DuplicateComponent(name.clone()));
        }
    }

    // (sorted vertices) -> tag -> face choices keyed by omitted vertex
    let mut strata: BTreeMap<Vec<usize>, BTreeMap<String, BTreeMap<usize, String>>> = BTreeMap::new();
    for (i, _) in d.components.iter().enumerate() {
        strata
            .entry(vec![i])
            .or_default()
            .insert(String::new(), BTreeMap::new());
    }
    for s in &d.strata {
        let mut verts = BTreeSet::new();
        for name in &s.components {
            let &i = index
                .get(name)
                .ok_or_else(|| ConeComplexError::UnknownComponent {
                    stratum: s.components.clone(),
                    name: name.clone(),
                })?;
            verts.insert(i);
        }
        if verts.len() < 2 || verts.len() != s.components.len() {
            return Err(ConeComplexError::StratumTooSmall(s.components.clone()));
        }
        let mut faces = BTreeMap::new();
        for (name, tag) in &s.faces {
            let &i = index
                .get(name)
                .ok_or_else(|| ConeComplexError::UnknownComponent {
                    stratum: s.components.clone(),
                    name: name.clone(),
                })?;
            faces.insert(i, tag.clone());
        }
        let key: Vec<usize> = verts.into_iter().collect();
        let tags = strata.entry(key.clone()).or_default();
        if tags.insert(s.tag.clone(), faces).is_some() {
            return Err(ConeComplexError::DuplicateStratum {
                components: names(&d.components, &key),
                tag: s.tag.clone(),
            });
        }
    }

    let max_dim = strata.keys().map(|k| k.len() - 1).max().unwrap_or(0);
    let mut cells: Vec<Vec<Cell>> = vec![Vec::new(); max_dim + 1];
    let mut lookup: BTreeMap<(Vec<usize>, String), usize> = BTreeMap::new();
    // BTreeMap order on Vec<usize> is lexicographic, which within a fixed
    // length is the required cell order.
    #[allow(clippy::needless_range_loop)] // lower dimensions are read while filling `cells[dim]`
    for dim in 0..=max_dim {
        for (verts, tags) in strata.iter().filter(|(v, _)| v.len() == dim + 1) {
            for (tag, face_choice) in tags {
                let mut facets = Vec::new();
                if dim > 0 {
                    for (pos, &omit) in verts.iter().enumerate() {
                        let face: Vec<usize> = verts.iter().copied().filter(|&v| v != omit).collect();
                        let face_tag = match face_choice.get(&omit) {
                            Some(t) => {
                                if !lookup.contains_key(&(face.clone(), t.clone())) {
                                    return Err(ConeComplexError::UnknownFaceTag {
                                        stratum: names(&d.components, verts),
                                        face: names(&d.components, &face),
                                        tag: t.clone(),
                                    });
                                }
                                t.clone()
                            }
                            None => {
                                let candidates =
                                    strata.get(&face).ok_or_else(|| ConeComplexError::MissingFace {
                                        stratum: names(&d.components, verts),
                                        missing: names(&d.components, &face),
                                    })?;
                                if candidates.len() > 1 {
                                    return Err(ConeComplexError::AmbiguousFace {
                                        stratum: names(&d.components, verts),
                                        face: names(&d.components, &face),
                                    });
                                }
                                candidates.keys().next().unwrap().clone()
                            }
                        };
                        let sign = if pos % 2 == 0 { 1 } else { -1 };
                        facets.push((lookup[&(face, face_tag)], sign));
                    }
                }
                lookup.insert((verts.clone(), tag.clone()), cells[dim].len());
                cells[dim].push(Cell {
                    vertices: verts.clone(),
                    tag: tag.clone(),
                    facets,
                });
            }
        }
    }

    let rays = match &d.rays {
        None => None,
        Some(map) => {
            for name in map.keys() {
                if !index.contains_key(name) {
                    return Err(ConeComplexError::UnknownRay(name.clone()));
                }
            }
            let mut out = Vec::with_capacity(d.components.len());
            for name in &d.components {
                let v = map
                    .get(name)
                    .ok_or_else(|| ConeComplexError::MissingRay(name.clone()))?;
                if !is_primitive(v) {
                    return Err(ConeComplexError::RayNotPrimitive(name.clone()));
                }
                out.push(v.clone());
            }
            if out.windows(2).any(|w| w[0].len() != w[1].len()) {
                return Err(ConeComplexError::RayDimensionMismatch);
            }
            Some(out)
        }
    };

    Ok(ConeComplex {
        components: d.components.clone(),
        cells,
        rays,
    })
}

fn names(components: &[String], verts: &[usize]) -> Vec<String> {
    verts.iter().map(|&v| components[v].clone()).collect()
}

/// Nonzero with entries of gcd 1.
pub fn is_primitive(v: &[i64]) -> bool {
    v.iter().fold(0i64, |g, &x| g.gcd(&x)) == 1
}

impl ConeComplex {
    /// The cone complex of a simplicial fan: rays become components named
    /// `r0, r1, ...` and every face of a listed cone becomes a cell.
    pub fn from_fan(rays: &[Vec<i64>], cones: &[Vec<usize>]) -> Result<Self, ConeComplexError> {
        let components: Vec<String> = (0..rays.len()).map(|i| format!("r{i}")).collect();
        let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
        for cone in cones {
            let mut c = cone.clone();
            c.sort_unstable();
            c.dedup();
            for mask in 1u64..(1 << c.len()) {
                let face: Vec<usize> = (0..c.len())
                    .filter(|&i| mask >> i & 1 == 1)
                    .map(|i| c[i])
                    .collect();
                if face.len() >= 2 {
                    faces.insert(face);
                }
            }
        }
        let strata = faces
            .into_iter()
            .map(|f| Stratum {
                components: f
                    .iter()
                    .map(|&i| components.get(i).cloned().unwrap_or_else(|| format!("r{i}")))
                    .collect(),
                tag: String::new(),
                faces: BTreeMap::new(),
            })
            .collect();
        let rays = components.iter().cloned().zip(rays.iter().cloned()).collect();
        build_cone_complex(&IntersectionData {
            components,
            strata,
            rays: Some(rays),
        })
    }

    pub fn components(&self) -> &[String] {
        &self.components
    }

    pub fn max_dim(&self) -> usize {
        self.cells.len() - 1
    }

    pub fn num_cells(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, Vec::len)
    }

    /// Cell counts per dimension.
    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn cell_ids(&self) -> impl Iterator<Item = CellId> + '_ {
        self.cells
            .iter()
            .enumerate()
            .flat_map(|(dim, cs)| (0..cs.len()).map(move |index| CellId { dim, index }))
    }

    pub fn cell(&self, id: CellId) -> Result<&Cell, ConeComplexError> {
        self.cells
            .get(id.dim)
            .and_then(|cs| cs.get(id.index))
            .ok_or_else(|| ConeComplexError::UnknownCell(format!("{}:{}", id.dim, id.index)))
    }

    /// `H1,H2` or `H1,H2#tag`.
    pub fn label(&self, id: CellId) -> String {
        let c = &self.cells[id.dim][id.index];
        let mut s = names(&self.components, &c.vertices).join(",");
        if !c.tag.is_empty() {
            s.push('#');
            s.push_str(&c.tag);
        }
        s
    }

    pub fn find(&self, label: &str) -> Result<CellId, ConeComplexError> {
        self.cell_ids()
            .find(|&id| self.label(id) == label)
            .ok_or_else(|| ConeComplexError::UnknownCell(label.to_string()))
    }

    pub fn vertex_id(&self, component: usize) -> CellId {
        CellId {
            dim: 0,
            index: component,
        }
    }

    pub fn facets(&self, id: CellId) -> Vec<(CellId, i64)> {
        if id.dim == 0 {
            return Vec::new();
        }
        self.cells[id.dim][id.index]
            .facets
            .iter()
            .map(|&(index, s)| {
                (
                    CellId {
                        dim: id.dim - 1,
                        index,
                    },
                    s,
                )
            })
            .collect()
    }

    pub fn cofacets(&self, id: CellId) -> Vec<CellId> {
        let Some(up) = self.cells.get(id.dim + 1) else {
            return Vec::new();
        };
        up.iter()
            .enumerate()
            .filter(|(_, c)| c.facets.iter().any(|&(f, _)| f == id.index))
            .map(|(index, _)| CellId {
                dim: id.dim + 1,
                index,
            })
            .collect()
    }

    /// Cells that are not a face of any other cell.
    pub fn maximal_cells(&self) -> Vec<CellId> {
        self.cell_ids()
            .filter(|&id| self.cofacets(id).is_empty())
            .collect()
    }

    /// Ray vectors indexed by component, if present.
    pub fn rays(&self) -> Option<&[Vec<i64>]> {
        self.rays.as_deref()
    }

    /// `δ_p : C^p -> C^{p+1}`, the transpose of the boundary map.
    pub fn coboundary(&self, p: usize) -> RationalMatrix {
        let mut m = RationalMatrix::zeros(self.num_cells(p + 1), self.num_cells(p));
        if let Some(up) = self.cells.get(p + 1) {
            for (row, c) in up.iter().enumerate() {
                for &(col, s) in &c.facets {
                    m.set(row, col, Rational::from_integer(s.into()));
                }
            }
        }
        m
    }

    /// The simplicial cochain complex in degrees `0..=max_dim`.
    pub fn cochain_complex(&self) -> CochainComplex {
        let dims = self.cell_counts();
        let diffs = (0..self.max_dim()).map(|p| self.coboundary(p)).collect();
        CochainComplex::new(0, dims, diffs).expect("face signs give a complex")
    }

    pub fn simplicial_cohomology(&self) -> BTreeMap<i64, usize> {
        self.cochain_complex().cohomology_dims()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(p, cs)| {
                if p % 2 == 0 {
                    cs.len() as i64
                } else {
                    -(cs.len() as i64)
                }
            })
            .sum()
    }

    /// All faces of `id`, including itself.
    pub fn closure(&self, id: CellId) -> BTreeSet<CellId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(c) = stack.pop() {
            if out.insert(c) {
                stack.extend(self.facets(c).into_iter().map(|(f, _)| f));
            }
        }
        out
    }

    /// All cells having `id` as a face, including itself.
    pub fn upper_set(&self, id: CellId) -> BTreeSet<CellId> {
        let mut out = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(c) = stack.pop() {
            if out.insert(c) {
                stack.extend(self.cofacets(c));
            }
        }
        out
    }

    /// Cells containing `id` together with all their faces.
    pub fn star(&self, id: CellId) -> Result<ConeComplex, ConeComplexError> {
        self.cell(id)?;
        let mut keep = BTreeSet::new();
        for c in self.upper_set(id) {
            keep.extend(self.closure(c));
        }
        Ok(self.subcomplex(&keep))
    }

    /// The subcomplex on a face-closed set of cells.
    fn subcomplex(&self, keep: &BTreeSet<CellId>) -> ConeComplex {
        let verts: Vec<usize> = keep.iter().filter(|c| c.dim == 0).map(|c| c.index).collect();
        let components: Vec<String> = verts.iter().map(|&v| self.components[v].clone()).collect();
        let strata = keep
            .iter()
            .filter(|c| c.dim > 0)
            .map(|&c| self.stratum(c))
            .collect();
        let rays = self.rays.as_ref().map(|r| {
            verts
                .iter()
                .map(|&v| (self.components[v].clone(), r[v].clone()))
                .collect()
        });
        build_cone_complex(&IntersectionData {
            components,
            strata,
            rays,
        })
        .expect("face-closed subset of a valid complex")
    }

    fn stratum(&self, id: CellId) -> Stratum {
        let c = &self.cells[id.dim][id.index];
        let mut faces = BTreeMap::new();
        for (pos, &(f, _)) in c.facets.iter().enumerate() {
            let face = &self.cells[id.dim - 1][f];
            if id.dim >= 2 {
                faces.insert(self.components[c.vertices[pos]].clone(), face.tag.clone());
            }
        }
        Stratum {
            components: names(&self.components, &c.vertices),
            tag: c.tag.clone(),
            faces,
        }
    }

    /// Serializable description that rebuilds this complex.
    pub fn intersection_data(&self) -> IntersectionData {
        let strata = self
            .cell_ids()
            .filter(|c| c.dim > 0)
            .map(|c| self.stratum(c))
            .collect();
        let rays = self
            .rays
            .as_ref()
            .map(|r| self.components.iter().cloned().zip(r.iter().cloned()).collect());
        IntersectionData {
            components: self.components.clone(),
            strata,
            rays,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stratum(names: &[&str]) -> Stratum {
        Stratum {
            components: names.iter().map(|s| s.to_string()).collect(),
            tag: String::new(),
            faces: BTreeMap::new(),
        }
    }

    fn data(components: &[&str], strata: &[&[&str]]) -> IntersectionData {
        IntersectionData {
            components: components.iter().map(|s| s.to_string()).collect(),
            strata: strata.iter().map(|s| stratum(s)).collect(),
            rays: None,
        }
    }

    pub(crate) fn three_lines() -> ConeComplex {
        build_cone_complex(&data(
            &["H1", "H2", "H3"],
            &[&["H1", "H2"], &["H1", "H3"], &["H2", "H3"]],
        ))
        .unwrap()
    }

    #[test]
    fn three_lines_is_a_circle() {
        let c = three_lines();
        assert_eq!(c.cell_counts(), vec![3, 3]);
        assert_eq!(c.simplicial_cohomology(), BTreeMap::from([(0, 1), (1, 1)]));
    }

    #[test]
    fn disjoint_and_single_components() {
        let c = build_cone_complex(&data(&["0", "inf"], &[])).unwrap();
        assert_eq!(c.cell_counts(), vec![2]);
        assert_eq!(c.simplicial_cohomology(), BTreeMap::from([(0, 2)]));
        let c = build_cone_complex(&data(&["D"], &[])).unwrap();
        assert_eq!(c.cell_counts(), vec![1]);
    }

    #[test]
    fn full_simplex_is_contractible() {
        let c = build_cone_complex(&data(
            &["A", "B", "C"],
            &[&["A", "B"], &["A", "C"], &["B", "C"], &["A", "B", "C"]],
        ))
        .unwrap();
        assert_eq!(
            c.simplicial_cohomology(),
            BTreeMap::from([(0, 1), (1, 0), (2, 0)])
        );
    }

    #[test]
    fn missing_face_is_named() {
        let err = build_cone_complex(&data(&["A", "B", "C"], &[&["A", "B"], &["A", "B", "C"]])).unwrap_err();
        assert_eq!(
            err,
            ConeComplexError::MissingFace {
                stratum: vec!["A".into(), "B".into(), "C".into()],
                missing: vec!["B".into(), "C".into()],
            }
        );
    }

    #[test]
    fn two_tagged_components_of_an_intersection() {
        // two conics meeting in two points: a circle made of two edges
        let mut d = data(&["C1", "C2"], &[&["C1", "C2"], &["C1", "C2"]]);
        d.strata[0].tag = "p".into();
        d.strata[1].tag = "q".into();
        let c = build_cone_complex(&d).unwrap();
        assert_eq!(c.cell_counts(), vec![2, 2]);
        assert_eq!(c.simplicial_cohomology(), BTreeMap::from([(0, 1), (1, 1)]));
        assert_eq!(c.label(CellId { dim: 1, index: 1 }), "C1,C2#q");
    }

    #[test]
    fn ambiguous_face_needs_a_choice() {
        let mut d = data(
            &["A", "B", "C"],
            &[
                &["A", "B"],
                &["A", "B"],
                &["A", "C"],
                &["B", "C"],
                &["A", "B", "C"],
            ],
        );
        d.strata[0].tag = "x".into();
        d.strata[1].tag = "y".into();
        assert!(matches!(
            build_cone_complex(&d),
            Err(ConeComplexError::AmbiguousFace { .. })
        ));
        d.strata[4].faces.insert("C".into(), "y".into());
        let c = build_cone_complex(&d).unwrap();
        assert_eq!(c.cell_counts(), vec![3, 4, 1]);
        // a filled triangle on the y edge plus a second A-B edge: one loop
        assert_eq!(
            c.simplicial_cohomology(),
            BTreeMap::from([(0, 1), (1, 1), (2, 0)])
        );
        d.strata[4].faces.insert("C".into(), "z".into());
        assert!(matches!(
            build_cone_complex(&d),
            Err(ConeComplexError::UnknownFaceTag { .. })
        ));
    }

    #[test]
    fn boundary_squares_to_zero() {
        let c = build_cone_complex(&data(
            &["A", "B", "C", "D"],
            &[
                &["A", "B"],
                &["A", "C"],
                &["A", "D"],
                &["B", "C"],
                &["B", "D"],
                &["C", "D"],
                &["A", "B", "C"],
                &["A", "B", "D"],
                &["A", "C", "D"],
                &["B", "C", "D"],
            ],
        ))
        .unwrap();
        for p in 0..c.max_dim() {
            assert!(c.coboundary(p + 1).mul(&c.coboundary(p)).is_zero());
        }
        assert_eq!(
            c.simplicial_cohomology(),
            BTreeMap::from([(0, 1), (1, 0), (2, 1)])
        );
    }

    #[test]
    fn stars_in_the_triangle() {
        let c = three_lines();
        let edge = c.find("H1,H2").unwrap();
        assert_eq!(c.star(edge).unwrap().cell_counts(), vec![2, 1]);
        let vertex = c.find("H1").unwrap();
        let s = c.star(vertex).unwrap();
        assert_eq!(s.cell_counts(), vec![3, 2]);
        let iso = build_cone_complex(&data(&["A", "B"], &[])).unwrap();
        assert_eq!(iso.star(iso.find("A").unwrap()).unwrap().cell_counts(), vec![1]);
        assert!(c.star(CellId { dim: 2, index: 0 }).is_err());
    }

    #[test]
    fn serialization_round_trip() {
        let mut d = data(
            &["C1", "C2", "C3"],
            &[&["C1", "C2"], &["C1", "C2"], &["C2", "C3"]],
        );
        d.strata[0].tag = "p".into();
        d.strata[1].tag = "q".into();
        d.rays = Some(BTreeMap::from([
            ("C1".to_string(), vec![1, 0]),
            ("C2".to_string(), vec![0, 1]),
            ("C3".to_string(), vec![-1, -1]),
        ]));
        let c = build_cone_complex(&d).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: ConeComplex = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rays_must_be_primitive() {
        let mut d = data(&["A"], &[]);
        d.rays = Some(BTreeMap::from([("A".to_string(), vec![2, 4])]));
        assert_eq!(
            build_cone_complex(&d).unwrap_err(),
            ConeComplexError::RayNotPrimitive("A".into())
        );
    }

    #[test]
    fn fan_of_the_projective_plane() {
        let c = ConeComplex::from_fan(
            &[vec![1, 0], vec![0, 1], vec![-1, -1]],
            &[vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap();
        assert_eq!(c.cell_counts(), vec![3, 3]);
        assert_eq!(c.maximal_cells().len(), 3);
    }
}
