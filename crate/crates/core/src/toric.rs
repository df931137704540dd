//! Smooth complete toric varieties: line bundle cohomology and logarithmic
//! Hodge numbers for the full toric boundary.
//!
//! `h^q(X, O(D))` for `D = Σ a_ρ D_ρ` is computed character by character:
//! the `m`-graded piece of `H^q` is the reduced cohomology `H̃^{q-1}` of the
//! subcomplex of the fan spanned by rays with `⟨m, u_ρ⟩ < -a_ρ`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::conecx::{is_primitive, ConeComplex, ConeComplexError};
use crate::linalg::{rank, smith_normal_form, solve_rational, IntegerMatrix, Rational, RationalMatrix};
use crate::weights::WeightFunction;

pub const MAX_RANK: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ToricError {
    #[error("fan has no rays")]
    NoRays,
    #[error("ambient rank {0} is unsupported (1 to {MAX_RANK})")]
    UnsupportedRank(usize),
    #[error("ray {0} has the wrong length")]
    RayLength(usize),
    #[error("ray {0} is not primitive")]
    RayNotPrimitive(usize),
    #[error("cone {cone} refers to ray {ray}, which does not exist")]
    UnknownRay { cone: usize, ray: usize },
    #[error("cone {0} is empty or repeats a ray")]
    BadCone(usize),
    #[error("cone {0} is not simplicial")]
    NotSimplicial(usize),
    #[error("cone {0} is not smooth: its rays are not part of a lattice basis")]
    NotSmooth(usize),
    #[error("fan is not complete: {0}")]
    Incomplete(String),
    #[error("cones {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("divisor has {found} coefficients, fan has {expected} rays")]
    DivisorLength { expected: usize, found: usize },
    #[error("weight function rays {found:?} do not match fan rays {expected:?}")]
    MismatchedRays {
        expected: Vec<String>,
        found: Vec<String>,
    },
}

/// JSON shape of a fan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanData {
    pub rays: Vec<Vec<i64>>,
    pub cones: Vec<Vec<usize>>,
}

/// A smooth complete fan of rank at most three.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FanData", into = "FanData")]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
}

impl TryFrom<FanData> for Fan {
    type Error = ToricError;

    fn try_from(d: FanData) -> Result<Self, ToricError> {
        Fan::new(d.rays, d.cones)
    }
}

impl From<Fan> for FanData {
    fn from(f: Fan) -> Self {
        FanData {
            rays: f.rays,
            cones: f.cones,
        }
    }
}

fn to_q(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

fn ray_matrix(rays: &[Vec<i64>], cone: &[usize], n: usize) -> RationalMatrix {
    let cols: Vec<Vec<Rational>> = cone.iter().map(|&i| to_q(&rays[i])).collect();
    RationalMatrix::from_columns(n, &cols)
}

/// Coefficients of `x` in the basis of a full-dimensional simplicial cone.
fn cone_coordinates(basis: &RationalMatrix, x: &[i64]) -> Vec<Rational> {
    solve_rational(basis, &to_q(x)).expect("full-rank cone basis")
}

impl Fan {
    /// Validates primitivity, smoothness and completeness.
    ///
    /// Completeness is checked by facet pairing (each facet of a maximal cone
    /// lies in exactly two maximal cones, on opposite sides) and by sampling
    /// every lattice point of `[-3, 3]^n`: each must lie in some cone and no
    /// point interior to a cone may lie in another.
    pub fn new(rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Self, ToricError> {
        let n = rays.first().ok_or(ToricError::NoRays)?.len();
        if n == 0 || n > MAX_RANK {
            return Err(ToricError::UnsupportedRank(n));
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != n {
                return Err(ToricError::RayLength(i));
            }
            if !is_primitive(r) {
                return Err(ToricError::RayNotPrimitive(i));
            }
        }
        let mut sorted = Vec::with_capacity(cones.len());
        for (ci, cone) in cones.iter().enumerate() {
            for &r in cone {
                if r >= rays.len() {
                    return Err(ToricError::UnknownRay { cone: ci, ray: r });
                }
            }
            let mut c = cone.clone();
            c.sort_unstable();
            c.dedup();
            if c.is_empty() || c.len() != cone.len() {
                return Err(ToricError::BadCone(ci));
            }
            let m = ray_matrix(&rays, &c, n);
            if rank(&m) != c.len() {
                return Err(ToricError::NotSimplicial(ci));
            }
            let int = IntegerMatrix::from_i64_rows(
                &(0..n)
                    .map(|row| c.iter().map(|&r| rays[r][row]).collect())
                    .collect::<Vec<_>>(),
            );
            if smith_normal_form(&int)
                .invariant_factors()
                .iter()
                .any(|d| !d.is_one())
            {
                return Err(ToricError::NotSmooth(ci));
            }
            if c.len() != n {
                return Err(ToricError::Incomplete(format!(
                    "cone {ci} is not full-dimensional"
                )));
            }
            sorted.push(c);
        }
        let used: BTreeSet<usize> = sorted.iter().flatten().copied().collect();
        if let Some(r) = (0..rays.len()).find(|r| !used.contains(r)) {
            return Err(ToricError::Incomplete(format!("ray {r} lies in no cone")));
        }
        let fan = Self {
            rank: n,
            rays,
            cones: sorted,
        };
        fan.check_facet_pairing()?;
        fan.check_by_sampling(3)?;
        Ok(fan)
    }

    fn check_facet_pairing(&self) -> Result<(), ToricError> {
        let mut facets: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (ci, c) in self.cones.iter().enumerate() {
            for &omit in c {
                let f: Vec<usize> = c.iter().copied().filter(|&r| r != omit).collect();
                facets.entry(f).or_default().push((ci, omit));
            }
        }
        for (f, owners) in &facets {
            if owners.len() != 2 {
                return Err(ToricError::Incomplete(format!(
                    "facet spanned by rays {f:?} lies in {} maximal cones",
                    owners.len()
                )));
            }
            // the two opposite rays must lie on opposite sides of the facet
            let (a, b) = (owners[0], owners[1]);
            let mut cols: Vec<Vec<Rational>> = f.iter().map(|&r| to_q(&self.rays[r])).collect();
            cols.push(to_q(&self.rays[a.1]));
            let basis = RationalMatrix::from_columns(self.rank, &cols);
            let coords = cone_coordinates(&basis, &self.rays[b.1]);
            if !coords.last().expect("nonempty").is_negative() {
                return Err(ToricError::Overlap(a.0, b.0));
            }
        }
        Ok(())
    }

    fn check_by_sampling(&self, bound: i64) -> Result<(), ToricError> {
        let bases: Vec<RationalMatrix> = self
            .cones
            .iter()
            .map(|c| ray_matrix(&self.rays, c, self.rank))
            .collect();
        for x in lattice_box(&vec![(-bound, bound); self.rank]) {
            if x.iter().all(|&v| v == 0) {
                continue;
            }
            let mut containing = Vec::new();
            let mut interior = None;
            for (ci, b) in bases.iter().enumerate() {
                let coords = cone_coordinates(b, &x);
                if coords.iter().all(|c| !c.is_negative()) {
                    containing.push(ci);
                    if coords.iter().all(Signed::is_positive) {
                        interior = Some(ci);
                    }
                }
            }
            if containing.is_empty() {
                return Err(ToricError::Incomplete(format!("point {x:?} lies in no cone")));
            }
            if let Some(ci) = interior {
                if let Some(&other) = containing.iter().find(|&&o| o != ci) {
                    return Err(ToricError::Overlap(ci, other));
                }
            }
        }
        Ok(())
    }

    pub fn projective_line() -> Self {
        Self::new(vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).expect("valid fan")
    }

    pub fn projective_plane() -> Self {
        Self::new(
            vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .expect("valid fan")
    }

    /// `F_a` with rays `e1, e2, -e1 + a e2, -e2`.
    pub fn hirzebruch(a: i64) -> Self {
        Self::new(
            vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]],
            vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]],
        )
        .expect("valid fan")
    }

    pub fn projective_space_3() -> Self {
        let rays = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![-1, -1, -1]];
        let cones = (0..4)
            .map(|omit| (0..4).filter(|&i| i != omit).collect())
            .collect();
        Self::new(rays, cones).expect("valid fan")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    /// Names matching [`ConeComplex::from_fan`]: `r0, r1, ...`.
    pub fn ray_names(&self) -> Vec<String> {
        (0..self.rays.len()).map(|i| format!("r{i}")).collect()
    }

    pub fn cone_complex(&self) -> Result<ConeComplex, ConeComplexError> {
        ConeComplex::from_fan(&self.rays, &self.cones)
    }

    /// Every subset of rays lying in a common cone, the empty set included.
    fn faces(&self) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for c in &self.cones {
            for mask in 0u32..(1 << c.len()) {
                out.insert(
                    (0..c.len())
                        .filter(|&i| mask >> i & 1 == 1)
                        .map(|i| c[i])
                        .collect(),
                );
            }
        }
        out
    }
}

fn lattice_box(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(lo, hi) in ranges {
        out = out
            .into_iter()
            .flat_map(|p| {
                (lo..=hi).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// A ℚ-divisor `Σ a_ρ D_ρ`, coefficients in ray order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QDivisor {
    #[serde(with = "rational_vec")]
    coefficients: Vec<Rational>,
}

mod rational_vec {
    use serde::{de::Error, Deserialize, Deserializer, Serialize, Serializer};

    use crate::linalg::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(format_rational).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| parse_rational(t).map_err(D::Error::custom))
            .collect()
    }
}

impl QDivisor {
    pub fn new(coefficients: Vec<Rational>) -> Self {
        Self { coefficients }
    }

    pub fn zero(fan: &Fan) -> Self {
        Self::new(vec![Rational::zero(); fan.rays().len()])
    }

    pub fn from_integers(coefficients: &[i64]) -> Self {
        Self::new(to_q(coefficients))
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    /// Componentwise floor.
    pub fn floor(&self) -> Vec<i64> {
        self.coefficients
            .iter()
            .map(|q| {
                q.floor()
                    .to_integer()
                    .to_i64()
                    .expect("divisor coefficient fits in i64")
            })
            .collect()
    }

    fn check(&self, fan: &Fan) -> Result<(), ToricError> {
        if self.coefficients.len() != fan.rays().len() {
            return Err(ToricError::DivisorLength {
                expected: fan.rays().len(),
                found: self.coefficients.len(),
            });
        }
        Ok(())
    }
}

/// Characters `m` that can contribute to `H^*(O(D))`.
///
/// The characters sharing a set `{ρ : ⟨m, u_ρ⟩ < -a_ρ}` are the lattice
/// points of a rational polyhedron cut out by the hyperplanes
/// `⟨m, u_ρ⟩ = -a_ρ` and `⟨m, u_ρ⟩ = -a_ρ - 1`. Unbounded ones contribute
/// nothing (cohomology is finite-dimensional), and bounded ones lie in the
/// bounding box of the arrangement's vertices.
fn character_box(fan: &Fan, a: &[i64]) -> Vec<(i64, i64)> {
    let n = fan.rank();
    let mut planes: Vec<(&[i64], i64)> = Vec::new();
    for (u, &ai) in fan.rays().iter().zip(a) {
        planes.push((u, -ai));
        planes.push((u, -ai - 1));
    }
    let mut lo = vec![i64::MAX; n];
    let mut hi = vec![i64::MIN; n];
    let mut visit = |choice: &[usize]| {
        let rows: Vec<Vec<Rational>> = choice.iter().map(|&i| to_q(planes[i].0)).collect();
        let m = RationalMatrix::from_rows(rows);
        let rhs: Vec<Rational> = choice
            .iter()
            .map(|&i| Rational::from_integer(planes[i].1.into()))
            .collect();
        if rank(&m) < n {
            return;
        }
        if let Some(x) = solve_rational(&m, &rhs) {
            for (k, v) in x.iter().enumerate() {
                let f = v.floor().to_integer().to_i64().expect("small");
                let c = v.ceil().to_integer().to_i64().expect("small");
                lo[k] = lo[k].min(f);
                hi[k] = hi[k].max(c);
            }
        }
    };
    for_each_subset(planes.len(), n, &mut visit);
    (0..n).map(|k| (lo[k] - 1, hi[k] + 1)).collect()
}

fn for_each_subset(len: usize, k: usize, f: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..len {
            cur.push(i);
            rec(i + 1, len, k, cur, f);
            cur.pop();
        }
    }
    rec(0, len, k, &mut Vec::new(), f);
}

/// Reduced cohomology dims `H̃^{-1..}` of the complex of faces inside `verts`.
fn reduced_cohomology(faces: &BTreeSet<Vec<usize>>, verts: &BTreeSet<usize>) -> BTreeMap<i64, usize> {
    let inside: Vec<&Vec<usize>> = faces
        .iter()
        .filter(|f| f.iter().all(|v| verts.contains(v)))
        .collect();
    let top = inside.iter().map(|f| f.len()).max().unwrap_or(0);
    // degree k holds faces with k + 1 vertices, k = -1 ..= top - 1
    let by_size: Vec<Vec<&Vec<usize>>> = (0..=top)
        .map(|s| inside.iter().copied().filter(|f| f.len() == s).collect())
        .collect();
    let mut diffs = Vec::new();
    for s in 0..top {
        let index: BTreeMap<&Vec<usize>, usize> =
            by_size[s].iter().enumerate().map(|(i, f)| (*f, i)).collect();
        let mut d = RationalMatrix::zeros(by_size[s + 1].len(), by_size[s].len());
        for (row, f) in by_size[s + 1].iter().enumerate() {
            for pos in 0..f.len() {
                let mut face = (*f).clone();
                face.remove(pos);
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                d.set(row, index[&face], Rational::from_integer(sign.into()));
            }
        }
        diffs.push(d);
    }
    let dims = by_size.iter().map(Vec::len).collect();
    crate::complex::CochainComplex::new(-1, dims, diffs)
        .expect("augmented simplicial cochains")
        .cohomology_dims()
}

/// `(h^0, ..., h^n)` of `O(D)` for an integral divisor in ray order.
pub fn divisor_cohomology(fan: &Fan, divisor: &[i64]) -> Result<Vec<usize>, ToricError> {
    if divisor.len() != fan.rays().len() {
        return Err(ToricError::DivisorLength {
            expected: fan.rays().len(),
            found: divisor.len(),
        });
    }
    let n = fan.rank();
    let faces = fan.faces();
    let mut h = vec![0usize; n + 1];
    let mut cache: BTreeMap<BTreeSet<usize>, BTreeMap<i64, usize>> = BTreeMap::new();
    for m in lattice_box(&character_box(fan, divisor)) {
        let negative: BTreeSet<usize> = fan
            .rays()
            .iter()
            .zip(divisor)
            .enumerate()
            .filter(|(_, (u, &a))| u.iter().zip(&m).map(|(x, y)| x * y).sum::<i64>() < -a)
            .map(|(i, _)| i)
            .collect();
        let reduced = cache
            .entry(negative.clone())
            .or_insert_with(|| reduced_cohomology(&faces, &negative));
        for (&k, &d) in reduced.iter() {
            if d > 0 {
                h[(k + 1) as usize] += d;
            }
        }
    }
    Ok(h)
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogHodgeTable {
    pub rank: usize,
    /// `(p, q) -> h^q(Ω^p(log D) ⊗ O(⌊twist⌋))`.
    pub entries: BTreeMap<(usize, usize), usize>,
    pub variety: String,
    pub weight: String,
}

impl LogHodgeTable {
    pub fn get(&self, p: usize, q: usize) -> usize {
        self.entries.get(&(p, q)).copied().unwrap_or(0)
    }
}

/// Uses `Ω^p(log D) ≅ O^{C(n, p)}` for the full toric boundary `D`.
pub fn log_hodge_numbers(
    fan: &Fan,
    twist: &QDivisor,
    variety: &str,
    weight: &str,
) -> Result<LogHodgeTable, ToricError> {
    twist.check(fan)?;
    let n = fan.rank();
    let h = divisor_cohomology(fan, &twist.floor())?;
    let entries = (0..=n)
        .flat_map(|p| (0..=n).map(move |q| (p, q)))
        .map(|(p, q)| ((p, q), binomial(n, p) * h[q]))
        .collect();
    Ok(LogHodgeTable {
        rank: n,
        entries,
        variety: variety.to_string(),
        weight: weight.to_string(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct E1SumRow {
    pub observed: usize,
    pub expected: usize,
    pub pass: bool,
}

/// Compares `Σ_{p+q=k} h^{p,q}` with the Betti numbers `C(n, k)` of the
/// open torus.
pub fn e1_sum_check(t: &LogHodgeTable) -> BTreeMap<usize, E1SumRow> {
    (0..=2 * t.rank)
        .map(|k| {
            let observed = (0..=k.min(t.rank)).map(|p| t.get(p, k - p)).sum();
            let expected = binomial(t.rank, k);
            (
                k,
                E1SumRow {
                    observed,
                    expected,
                    pass: observed == expected,
                },
            )
        })
        .collect()
}

/// `L(w) = Σ w(ρ) D_ρ` over the rays of the fan.
pub fn weight_divisor(w: &WeightFunction, fan: &Fan) -> Result<QDivisor, ToricError> {
    let expected = fan.ray_names();
    let found: Vec<String> = w.values().keys().cloned().collect();
    let mut sorted_expected = expected.clone();
    sorted_expected.sort();
    if sorted_expected != found {
        return Err(ToricError::MismatchedRays { expected, found });
    }
    Ok(QDivisor::new(
        expected
            .iter()
            .map(|n| w.get(n).expect("checked").clone())
            .collect(),
    ))
}

/// `Σ_ρ a_ρ D_ρ` as a class `d·H` on the projective plane fan.
pub fn plane_degree(a: &[i64]) -> i64 {
    a.iter().sum()
}
