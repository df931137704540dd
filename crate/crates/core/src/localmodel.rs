//! Multigraded models of differential forms on `(ℂ^n, {z_1⋯z_r = 0})`.
//!
//! Every form is written as `z^m · dlog z_S` with `m ∈ ℤ^n` and `S` a set
//! of coordinates, where `dlog z_i = dz_i / z_i`. Then
//! `d(z^m dlog z_S) = Σ_{i∉S} m_i z^m dlog z_i ∧ dlog z_S`, so the
//! multidegree `m` is preserved and each complex splits into finite blocks,
//! one Koszul complex per `m`. The flavors differ only in which `(S, m)` are
//! allowed:
//!
//! * holomorphic: `m_i >= 1` for `i ∈ S`, `m_i >= 0` otherwise;
//! * logarithmic: `m_i >= 0` for all `i`, and `m_j >= 1` for `j ∈ S`, `j > r`;
//! * Laurent: `m_i` arbitrary for `i <= r`, the holomorphic rule for `j > r`.
//!
//! Localizing at `z_i` (`i <= r`) lifts every constraint on coordinate `i`.
//! Because `d` preserves `m`, truncating to a box of multidegrees is exact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::complex::{
    degeneration_check, mapping_cone, ChainMap, CochainComplex, FilteredComplex, SpectralSequencePage,
};
use crate::linalg::{Rational, RationalMatrix};
use crate::toric::{binomial, Fan};

pub const MAX_AMBIENT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LocalModelError {
    #[error("ambient dimension {0} is outside 1..={MAX_AMBIENT}")]
    Ambient(usize),
    #[error("boundary count r = {r} exceeds n = {n}")]
    BoundaryCount { n: usize, r: usize },
    #[error("window must be at least 1")]
    WindowTooSmall,
    #[error("support subset must be nonempty")]
    EmptySubset,
    #[error("support index {index} is not a boundary coordinate (1..={r})")]
    SubsetOutOfRange { index: usize, r: usize },
    #[error("form degree {p} exceeds n = {n}")]
    FormDegree { p: usize, n: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Holomorphic,
    Logarithmic,
    Laurent,
}

/// Source of the comparison map into Laurent forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Holomorphic,
    Logarithmic,
}

impl From<Source> for Flavor {
    fn from(s: Source) -> Self {
        match s {
            Source::Holomorphic => Flavor::Holomorphic,
            Source::Logarithmic => Flavor::Logarithmic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalModel {
    pub n: usize,
    pub r: usize,
    pub window: i64,
}

impl LocalModel {
    pub fn new(n: usize, r: usize, window: i64) -> Result<Self, LocalModelError> {
        if n == 0 || n > MAX_AMBIENT {
            return Err(LocalModelError::Ambient(n));
        }
        if r > n {
            return Err(LocalModelError::BoundaryCount { n, r });
        }
        if window < 1 {
            return Err(LocalModelError::WindowTooSmall);
        }
        Ok(Self { n, r, window })
    }

    /// All multidegrees of the Laurent window: `|m_i| <= B` for boundary
    /// coordinates, `0 <= m_j <= B` otherwise. Every flavor lives inside it.
    pub fn multidegrees(&self) -> Vec<Vec<i64>> {
        let ranges: Vec<(i64, i64)> = (0..self.n)
            .map(|i| {
                if i < self.r {
                    (-self.window, self.window)
                } else {
                    (0, self.window)
                }
            })
            .collect();
        let mut out = vec![Vec::new()];
        for (lo, hi) in ranges {
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

    /// Is `z^m dlog z_S` a generator of `flavor` localized at the boundary
    /// coordinates in `localized`?
    fn allowed(&self, flavor: Flavor, localized: u32, s: u32, m: &[i64]) -> bool {
        (0..self.n).all(|i| {
            let in_s = s >> i & 1 == 1;
            let holo_rule = if in_s { m[i] >= 1 } else { m[i] >= 0 };
            if i < self.r && (localized >> i & 1 == 1 || flavor == Flavor::Laurent) {
                return true;
            }
            match flavor {
                Flavor::Holomorphic | Flavor::Laurent => holo_rule,
                Flavor::Logarithmic if i < self.r => m[i] >= 0,
                Flavor::Logarithmic => holo_rule,
            }
        })
    }

    /// Generators of one block, grouped by form degree, each degree sorted.
    fn generators(&self, flavor: Flavor, localized: u32, m: &[i64]) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.n + 1];
        for s in 0u32..(1 << self.n) {
            if self.allowed(flavor, localized, s, m) {
                out[s.count_ones() as usize].push(s);
            }
        }
        out
    }

    fn block(&self, flavor: Flavor, localized: u32, m: &[i64]) -> Block {
        Block::koszul(self.n, m, self.generators(flavor, localized, m))
    }

    pub fn form_module(&self, flavor: Flavor) -> FormModule {
        FormModule { model: *self, flavor }
    }
}

fn bit_sign(s: u32, i: usize) -> i64 {
    if (s & ((1u32 << i) - 1)).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn q(x: i64) -> Rational {
    Rational::from_integer(x.into())
}

/// One multidegree block: generators per degree and its Koszul complex.
#[derive(Clone, Debug)]
struct Block {
    gens: Vec<Vec<u32>>,
    complex: CochainComplex,
}

impl Block {
    fn koszul(n: usize, m: &[i64], gens: Vec<Vec<u32>>) -> Self {
        let mut diffs = Vec::with_capacity(n);
        for p in 0..n {
            let index: BTreeMap<u32, usize> = gens[p + 1].iter().enumerate().map(|(k, &s)| (s, k)).collect();
            let mut d = RationalMatrix::zeros(gens[p + 1].len(), gens[p].len());
            for (col, &s) in gens[p].iter().enumerate() {
                for (i, &mi) in m.iter().enumerate() {
                    if s >> i & 1 == 1 || mi == 0 {
                        continue;
                    }
                    if let Some(&row) = index.get(&(s | 1 << i)) {
                        d.set(row, col, q(mi * bit_sign(s, i)));
                    }
                }
            }
            diffs.push(d);
        }
        let dims = gens.iter().map(Vec::len).collect();
        let complex = CochainComplex::new(0, dims, diffs).expect("Koszul complex");
        Self { gens, complex }
    }

    fn is_empty(&self) -> bool {
        self.gens.iter().all(Vec::is_empty)
    }

    /// Inclusion into a block with a superset of generators.
    fn inclusion(&self, target: &Block) -> ChainMap {
        let comps = (0..self.gens.len())
            .map(|p| {
                let mut f = RationalMatrix::zeros(target.gens[p].len(), self.gens[p].len());
                for (col, s) in self.gens[p].iter().enumerate() {
                    let row = target.gens[p]
                        .iter()
                        .position(|t| t == s)
                        .expect("source generators lie in the target");
                    f.set(row, col, q(1));
                }
                f
            })
            .collect();
        ChainMap::new(self.complex.clone(), target.complex.clone(), comps).expect("inclusion commutes with d")
    }
}

/// A flavor of forms on a local model, truncated to the model's window.
#[derive(Clone, Copy, Debug)]
pub struct FormModule {
    model: LocalModel,
    flavor: Flavor,
}

impl FormModule {
    pub fn model(&self) -> LocalModel {
        self.model
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// The complex restricted to multidegree `m`.
    pub fn block(&self, m: &[i64]) -> CochainComplex {
        self.model.block(self.flavor, 0, m).complex
    }

    /// Multidegrees with at least one generator.
    pub fn multidegrees(&self) -> Vec<Vec<i64>> {
        self.model
            .multidegrees()
            .into_iter()
            .filter(|m| !self.model.block(self.flavor, 0, m).is_empty())
            .collect()
    }

    /// Cohomology per multidegree, nonzero blocks only.
    pub fn graded_cohomology(&self) -> BTreeMap<Vec<i64>, BTreeMap<i64, usize>> {
        self.multidegrees()
            .into_iter()
            .filter_map(|m| {
                let h = self.block(&m).cohomology_dims();
                h.values().any(|&d| d > 0).then_some((m, h))
            })
            .collect()
    }

    /// Total cohomology, summed over blocks.
    pub fn cohomology_dims(&self) -> BTreeMap<i64, usize> {
        let mut total: BTreeMap<i64, usize> = (0..=self.model.n as i64).map(|k| (k, 0)).collect();
        for h in self.graded_cohomology().values() {
            for (&k, &d) in h {
                *total.get_mut(&k).expect("degree in range") += d;
            }
        }
        total
    }
}

/// The full truncated complex in degrees `0..=n`, blocks ordered by
/// multidegree. Cohomology is better computed blockwise via
/// [`FormModule::cohomology_dims`]; this is the assembled object.
pub fn build_form_complex(model: &LocalModel, flavor: Flavor) -> CochainComplex {
    let blocks: Vec<CochainComplex> = model
        .form_module(flavor)
        .multidegrees()
        .iter()
        .map(|m| model.block(flavor, 0, m).complex)
        .collect();
    direct_sum(0, model.n, &blocks)
}

fn direct_sum(lo: i64, len: usize, blocks: &[CochainComplex]) -> CochainComplex {
    let hi = lo + len as i64;
    let dims: Vec<usize> = (lo..=hi).map(|k| blocks.iter().map(|b| b.dim(k)).sum()).collect();
    let mut diffs = Vec::new();
    for k in lo..hi {
        let mut d = RationalMatrix::zeros(dims[(k + 1 - lo) as usize], dims[(k - lo) as usize]);
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            d.set_block(r, c, &b.differential(k));
            r += b.dim(k + 1);
            c += b.dim(k);
        }
        diffs.push(d);
    }
    CochainComplex::new(lo, dims, diffs).expect("direct sum of complexes")
}

/// The comparison map `source ↪ Laurent` as one global chain map.
pub fn inclusion_map(model: &LocalModel, source: Source) -> ChainMap {
    let ms = model.multidegrees();
    let src_blocks: Vec<Block> = ms.iter().map(|m| model.block(source.into(), 0, m)).collect();
    let tgt_blocks: Vec<Block> = ms.iter().map(|m| model.block(Flavor::Laurent, 0, m)).collect();
    let s = direct_sum(
        0,
        model.n,
        &src_blocks.iter().map(|b| b.complex.clone()).collect::<Vec<_>>(),
    );
    let t = direct_sum(
        0,
        model.n,
        &tgt_blocks.iter().map(|b| b.complex.clone()).collect::<Vec<_>>(),
    );
    let comps = (0..=model.n as i64)
        .map(|k| {
            let mut f = RationalMatrix::zeros(t.dim(k), s.dim(k));
            let (mut r, mut c) = (0, 0);
            for (sb, tb) in src_blocks.iter().zip(&tgt_blocks) {
                f.set_block(r, c, &sb.inclusion(tb).component(k));
                r += tb.complex.dim(k);
                c += sb.complex.dim(k);
            }
            f
        })
        .collect();
    ChainMap::new(s, t, comps).expect("blockwise inclusion")
}

fn add_into(total: &mut BTreeMap<i64, usize>, h: &BTreeMap<i64, usize>) {
    for (&k, &d) in h {
        *total.entry(k).or_insert(0) += d;
    }
}

fn nonzero(h: &BTreeMap<i64, usize>) -> bool {
    h.values().any(|&d| d > 0)
}

/// Cohomology of the cone of `source ↪ Laurent`, degrees `-1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectCone {
    pub dims: BTreeMap<i64, usize>,
    /// Nonzero multidegree blocks only.
    pub by_multidegree: BTreeMap<Vec<i64>, BTreeMap<i64, usize>>,
}

pub fn obstruction_cone(model: &LocalModel, source: Source) -> DirectCone {
    let mut dims: BTreeMap<i64, usize> = (-1..=model.n as i64).map(|k| (k, 0)).collect();
    let mut by_multidegree = BTreeMap::new();
    for m in model.multidegrees() {
        let src = model.block(source.into(), 0, &m);
        let tgt = model.block(Flavor::Laurent, 0, &m);
        if tgt.is_empty() {
            continue;
        }
        let h = mapping_cone(&src.inclusion(&tgt)).cohomology_dims();
        add_into(&mut dims, &h);
        if nonzero(&h) {
            by_multidegree.insert(m, h);
        }
    }
    DirectCone { dims, by_multidegree }
}

/// Local cohomology of the source complex with supports in intersections
/// of boundary components, assembled over the nerve of the components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AssembledStalk {
    /// `I` (1-based) -> dims of `H^k_{E_I}` of the source complex.
    pub contributions: BTreeMap<Vec<usize>, BTreeMap<i64, usize>>,
    /// Support in the whole boundary, shifted to cone indexing: entry `p`
    /// is `H^{p+1}_E`.
    pub dims: BTreeMap<i64, usize>,
    pub by_multidegree: BTreeMap<Vec<i64>, BTreeMap<i64, usize>>,
}

/// Generators of the nerve total complex at one multidegree: a triple
/// `(I, J, S)` with `∅ ≠ I ⊆ [r]`, `J ⊆ I` the localized coordinates, and
/// `S` a form of the source localized at `J`. Its degree is
/// `|S| + |J| - (|I| - 1)`.
fn nerve_total(model: &LocalModel, source: Flavor, m: &[i64], only: Option<u32>) -> CochainComplex {
    let r = model.r;
    let n = model.n;
    let mut gens: BTreeMap<i64, Vec<(u32, u32, u32)>> = BTreeMap::new();
    for i_set in 1u32..(1 << r) {
        if only.is_some_and(|o| o != i_set) {
            continue;
        }
        let mut j_set = i_set;
        loop {
            for (p, ss) in model.generators(source, j_set, m).iter().enumerate() {
                for &s in ss {
                    let shift = if only.is_some() {
                        0
                    } else {
                        i_set.count_ones() as i64 - 1
                    };
                    let deg = p as i64 + j_set.count_ones() as i64 - shift;
                    gens.entry(deg).or_default().push((i_set, j_set, s));
                }
            }
            if j_set == 0 {
                break;
            }
            j_set = (j_set - 1) & i_set;
        }
    }
    let lo = -(r as i64);
    let hi = (n + r) as i64;
    for k in lo..=hi {
        gens.entry(k).or_default().sort_unstable();
    }
    let index: BTreeMap<(u32, u32, u32), usize> = gens
        .values()
        .flat_map(|v| v.iter().enumerate().map(|(k, &g)| (g, k)))
        .collect();
    let mut diffs = Vec::new();
    for k in lo..hi {
        let (src, tgt) = (&gens[&k], &gens[&(k + 1)]);
        let mut d = RationalMatrix::zeros(tgt.len(), src.len());
        let put = |d: &mut RationalMatrix, row: (u32, u32, u32), col: usize, v: i64| {
            if let Some(&rw) = index.get(&row) {
                if tgt.get(rw) == Some(&row) {
                    let cur = d.get(rw, col);
                    d.set(rw, col, cur + q(v));
                }
            }
        };
        for (col, &(i_set, j_set, s)) in src.iter().enumerate() {
            // pending coordinates I \ J carry odd degree -1 and come first
            let pending = i_set & !j_set;
            for i in 0..r {
                if pending >> i & 1 == 0 {
                    continue;
                }
                let sign = bit_sign(pending, i);
                // Čech step: localize at z_i
                put(&mut d, (i_set, j_set | 1 << i, s), col, sign);
                // nerve step: forget coordinate i from the support
                if only.is_none() && i_set & !(1 << i) != 0 {
                    put(&mut d, (i_set & !(1 << i), j_set, s), col, sign);
                }
            }
            let form_sign = if pending.count_ones() % 2 == 0 { 1 } else { -1 };
            for (i, &mi) in m.iter().enumerate() {
                if s >> i & 1 == 1 || mi == 0 {
                    continue;
                }
                put(
                    &mut d,
                    (i_set, j_set, s | 1 << i),
                    col,
                    form_sign * mi * bit_sign(s, i),
                );
            }
        }
        diffs.push(d);
    }
    let dims = (lo..=hi).map(|k| gens[&k].len()).collect();
    CochainComplex::new(lo, dims, diffs).expect("nerve total complex squares to zero")
}

pub fn assemble_stalk(model: &LocalModel, source: Source) -> AssembledStalk {
    let flavor: Flavor = source.into();
    let mut dims: BTreeMap<i64, usize> = (-1..=model.n as i64).map(|k| (k, 0)).collect();
    let mut by_multidegree = BTreeMap::new();
    let mut contributions: BTreeMap<Vec<usize>, BTreeMap<i64, usize>> = BTreeMap::new();
    for m in model.multidegrees() {
        let tot = nerve_total(model, flavor, &m, None);
        let shifted: BTreeMap<i64, usize> = tot
            .cohomology_dims()
            .into_iter()
            .filter(|&(k, d)| d > 0 || (0..=model.n as i64 + 1).contains(&k))
            .map(|(k, d)| (k - 1, d))
            .collect();
        add_into(&mut dims, &shifted);
        if nonzero(&shifted) {
            by_multidegree.insert(m.clone(), shifted.into_iter().filter(|&(_, d)| d > 0).collect());
        }
        for i_set in 1u32..(1 << model.r) {
            let label: Vec<usize> = (0..model.r)
                .filter(|i| i_set >> i & 1 == 1)
                .map(|i| i + 1)
                .collect();
            let h = nerve_total(model, flavor, &m, Some(i_set)).cohomology_dims();
            let entry = contributions.entry(label).or_default();
            add_into(entry, &h.into_iter().filter(|&(_, d)| d > 0).collect());
        }
    }
    AssembledStalk {
        contributions,
        dims,
        by_multidegree,
    }
}

/// Direct cone cohomology next to the assembled local cohomology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionStalkReport {
    pub model: LocalModel,
    pub source: Source,
    pub direct: DirectCone,
    pub assembled: AssembledStalk,
    /// Degreewise and multidegreewise equality.
    pub matches: bool,
}

pub fn obstruction_stalk(model: &LocalModel, source: Source) -> ObstructionStalkReport {
    let direct = obstruction_cone(model, source);
    let assembled = assemble_stalk(model, source);
    let strip = |h: &BTreeMap<i64, usize>| -> BTreeMap<i64, usize> {
        h.iter().filter(|(_, &d)| d > 0).map(|(&k, &d)| (k, d)).collect()
    };
    let multidegree_match = direct.by_multidegree.len() == assembled.by_multidegree.len()
        && direct
            .by_multidegree
            .iter()
            .all(|(m, h)| assembled.by_multidegree.get(m).map(strip) == Some(strip(h)));
    let matches = strip(&direct.dims) == strip(&assembled.dims) && multidegree_match;
    ObstructionStalkReport {
        model: *model,
        source,
        direct,
        assembled,
        matches,
    }
}

/// `H^{|I|}_{(z_i : i ∈ I)}` of the `p`-forms with log poles, graded by the
/// exponent of the coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalCohomologyReport {
    pub subset: Vec<usize>,
    pub form_degree: usize,
    pub support_degree: usize,
    /// From the Čech complex on `{z_i ≠ 0 : i ∈ I}`.
    pub cech: BTreeMap<Vec<i64>, usize>,
    /// From the inverse-monomial description of the same module.
    pub monomials: BTreeMap<Vec<i64>, usize>,
    /// Čech cohomology outside degree `|I|` vanished everywhere.
    pub concentrated: bool,
    pub agree: bool,
}

impl LocalCohomologyReport {
    pub fn total(&self) -> usize {
        self.cech.values().sum()
    }
}

/// `subset` holds 1-based boundary coordinates.
pub fn koszul_local_cohomology(
    model: &LocalModel,
    subset: &[usize],
    p: usize,
) -> Result<LocalCohomologyReport, LocalModelError> {
    if subset.is_empty() {
        return Err(LocalModelError::EmptySubset);
    }
    let mut support = 0u32;
    for &i in subset {
        if i == 0 || i > model.r {
            return Err(LocalModelError::SubsetOutOfRange { index: i, r: model.r });
        }
        support |= 1 << (i - 1);
    }
    if p > model.n {
        return Err(LocalModelError::FormDegree { p, n: model.n });
    }
    let frames = binomial(model.n, p);
    let size = support.count_ones() as usize;
    let b = model.window;
    let mut cech = BTreeMap::new();
    let mut monomials = BTreeMap::new();
    let mut concentrated = true;
    let mut a_all = vec![Vec::new()];
    for _ in 0..model.n {
        a_all = a_all
            .into_iter()
            .flat_map(|p| {
                (-b..=b).map(move |x| {
                    let mut v = p.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    let members: Vec<usize> = (0..model.n).filter(|i| support >> i & 1 == 1).collect();
    for a in a_all {
        // Čech complex: J ⊆ I in degree |J|, z^a present in the localization
        // at z_J iff a_j >= 0 for every j outside J.
        let present = |j_set: u32| (0..model.n).all(|j| j_set >> j & 1 == 1 || a[j] >= 0);
        let mut by_deg: Vec<Vec<u32>> = vec![Vec::new(); size + 1];
        for mask in 0u32..(1 << size) {
            let j_set = members
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .fold(0u32, |acc, (_, &i)| acc | 1 << i);
            if present(j_set) {
                by_deg[j_set.count_ones() as usize].push(j_set);
            }
        }
        let mut diffs = Vec::new();
        for s in 0..size {
            let mut d = RationalMatrix::zeros(by_deg[s + 1].len(), by_deg[s].len());
            for (col, &j_set) in by_deg[s].iter().enumerate() {
                for &i in &members {
                    if j_set >> i & 1 == 1 {
                        continue;
                    }
                    if let Some(row) = by_deg[s + 1].iter().position(|&t| t == j_set | 1 << i) {
                        d.set(row, col, q(bit_sign(j_set, i)));
                    }
                }
            }
            diffs.push(d);
        }
        let h = CochainComplex::new(0, by_deg.iter().map(Vec::len).collect(), diffs)
            .expect("Čech complex")
            .cohomology_dims();
        for (&k, &d) in &h {
            if d == 0 {
                continue;
            }
            if k as usize == size {
                cech.insert(a.clone(), d * frames);
            } else {
                concentrated = false;
            }
        }
        let inverse = (0..model.n).all(|i| {
            if support >> i & 1 == 1 {
                a[i] <= -1
            } else {
                a[i] >= 0
            }
        });
        if inverse && frames > 0 {
            monomials.insert(a, frames);
        }
    }
    let agree = cech == monomials;
    Ok(LocalCohomologyReport {
        subset: subset.to_vec(),
        form_degree: p,
        support_degree: size,
        cech,
        monomials,
        concentrated,
        agree,
    })
}

/// Čech–de Rham model of a smooth complete toric variety with log poles
/// along the whole toric boundary, one filtered complex per character `m`.
///
/// The chart of a cone `σ` holds `χ^m ⊗ Λ^p(M_ℚ)` for `⟨m, u_ρ⟩ >= 0` on the
/// rays of `σ`; `d(χ^m ⊗ ω) = χ^m ⊗ (m ∧ ω)`. The Čech direction runs over
/// nonempty sets of maximal cones, and the filtration is by form degree.
pub fn toric_cech_de_rham(fan: &Fan, window: i64) -> Vec<(Vec<i64>, FilteredComplex)> {
    let n = fan.rank();
    let cones = fan.cones();
    let k = cones.len();
    let mut out = Vec::new();
    let mut chars = vec![Vec::new()];
    for _ in 0..n {
        chars = chars
            .into_iter()
            .flat_map(|p| {
                (-window..=window).map(move |x| {
                    let mut v = p.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    for m in chars {
        let admissible = |set: u32| -> bool {
            let rays: Vec<usize> = (0..fan.rays().len())
                .filter(|&ray| (0..k).all(|c| set >> c & 1 == 0 || cones[c].contains(&ray)))
                .collect();
            rays.iter()
                .all(|&ray| fan.rays()[ray].iter().zip(&m).map(|(u, x)| u * x).sum::<i64>() >= 0)
        };
        // generators (cone set A, form set P), degree |A| - 1 + |P|
        let mut gens: Vec<Vec<(u32, u32)>> = vec![Vec::new(); k + n];
        for a in 1u32..(1 << k) {
            if !admissible(a) {
                continue;
            }
            for p in 0u32..(1 << n) {
                gens[a.count_ones() as usize - 1 + p.count_ones() as usize].push((a, p));
            }
        }
        let mut diffs = Vec::new();
        for deg in 0..gens.len() - 1 {
            let mut d = RationalMatrix::zeros(gens[deg + 1].len(), gens[deg].len());
            for (col, &(a, p)) in gens[deg].iter().enumerate() {
                for c in 0..k {
                    if a >> c & 1 == 1 {
                        continue;
                    }
                    if let Some(row) = gens[deg + 1].iter().position(|&g| g == (a | 1 << c, p)) {
                        d.set(row, col, q(bit_sign(a, c)));
                    }
                }
                let sign = if (a.count_ones() - 1) % 2 == 0 { 1 } else { -1 };
                for (i, &mi) in m.iter().enumerate() {
                    if p >> i & 1 == 1 || mi == 0 {
                        continue;
                    }
                    if let Some(row) = gens[deg + 1].iter().position(|&g| g == (a, p | 1 << i)) {
                        d.set(row, col, q(sign * mi * bit_sign(p, i)));
                    }
                }
            }
            diffs.push(d);
        }
        let dims: Vec<usize> = gens.iter().map(Vec::len).collect();
        if dims.iter().all(|&d| d == 0) {
            continue;
        }
        let complex = CochainComplex::new(0, dims, diffs).expect("Čech–de Rham complex");
        let levels = (0..=n)
            .map(|level| {
                gens.iter()
                    .map(|g| {
                        let cols: Vec<Vec<Rational>> = g
                            .iter()
                            .enumerate()
                            .filter(|(_, &(_, p))| p.count_ones() as usize >= level)
                            .map(|(idx, _)| {
                                let mut e = vec![q(0); g.len()];
                                e[idx] = q(1);
                                e
                            })
                            .collect();
                        RationalMatrix::from_columns(g.len(), &cols)
                    })
                    .collect()
            })
            .collect();
        let fc = FilteredComplex::new(complex, 0, levels).expect("form degree filtration");
        out.push((m, fc));
    }
    out
}

/// Summed `E_1` table, cohomology, and degeneration verdict over all blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeDegeneration {
    /// `(p, q) -> dim E_1^{p,q}`.
    pub e1: BTreeMap<(i64, i64), usize>,
    pub cohomology: BTreeMap<i64, usize>,
    pub degenerates_at_e1: bool,
    pub first_nonzero_differential: Option<usize>,
}

pub fn toric_hodge_degeneration(fan: &Fan, window: i64) -> HodgeDegeneration {
    let mut e1 = BTreeMap::new();
    let mut cohomology = BTreeMap::new();
    let mut first: Option<usize> = None;
    for (_, fc) in toric_cech_de_rham(fan, window) {
        let page: SpectralSequencePage = fc.page(1);
        for (&pq, &d) in &page.entries {
            *e1.entry(pq).or_insert(0) += d;
        }
        add_into(&mut cohomology, &fc.complex().cohomology_dims());
        if let Some(r) = degeneration_check(&fc).first_nonzero_differential {
            first = Some(first.map_or(r, |f| f.min(r)));
        }
    }
    e1.retain(|_, d| *d > 0);
    cohomology.retain(|_, d| *d > 0);
    HodgeDegeneration {
        e1,
        cohomology,
        degenerates_at_e1: first.is_none(),
        first_nonzero_differential: first,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(n: usize, r: usize, b: i64) -> LocalModel {
        LocalModel::new(n, r, b).unwrap()
    }

    fn dims(v: &[(i64, usize)]) -> BTreeMap<i64, usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn one_variable_flavors() {
        let log = model(1, 1, 3).form_module(Flavor::Logarithmic);
        assert_eq!(log.cohomology_dims(), dims(&[(0, 1), (1, 1)]));
        let holo = model(1, 0, 3).form_module(Flavor::Holomorphic);
        assert_eq!(holo.cohomology_dims(), dims(&[(0, 1), (1, 0)]));
        let laurent = model(1, 1, 3).form_module(Flavor::Laurent);
        assert_eq!(laurent.cohomology_dims(), dims(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn blockwise_equals_global() {
        for (n, r) in [(1, 1), (2, 1), (2, 2)] {
            let lm = model(n, r, 2);
            for flavor in [Flavor::Holomorphic, Flavor::Logarithmic, Flavor::Laurent] {
                let global = build_form_complex(&lm, flavor).cohomology_dims();
                assert_eq!(
                    global,
                    lm.form_module(flavor).cohomology_dims(),
                    "{n} {r} {flavor:?}"
                );
            }
            for source in [Source::Holomorphic, Source::Logarithmic] {
                let global = mapping_cone(&inclusion_map(&lm, source)).cohomology_dims();
                let mut blockwise = obstruction_cone(&lm, source).dims;
                blockwise.retain(|_, d| *d > 0);
                let mut g = global;
                g.retain(|_, d| *d > 0);
                assert_eq!(g, blockwise);
            }
        }
    }

    #[test]
    fn log_cohomology_is_exterior() {
        for n in 1..=3 {
            for r in 0..=n {
                for b in 2..=4 {
                    let h = model(n, r, b).form_module(Flavor::Logarithmic).cohomology_dims();
                    for p in 0..=n {
                        assert_eq!(h[&(p as i64)], binomial(r, p), "n={n} r={r} B={b} p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn obstruction_cones() {
        let lm = model(1, 1, 4);
        let holo = obstruction_cone(&lm, Source::Holomorphic);
        assert_eq!(holo.dims[&0], 0);
        assert_eq!(holo.dims[&1], 1);
        assert!(obstruction_cone(&lm, Source::Logarithmic)
            .dims
            .values()
            .all(|&d| d == 0));
        let none = model(2, 0, 3);
        for s in [Source::Holomorphic, Source::Logarithmic] {
            assert!(obstruction_cone(&none, s).dims.values().all(|&d| d == 0));
        }
    }

    #[test]
    fn assembled_matches_direct() {
        for (n, r) in [(1, 1), (2, 1), (2, 2)] {
            for s in [Source::Holomorphic, Source::Logarithmic] {
                let report = obstruction_stalk(&model(n, r, 3), s);
                assert!(report.matches, "n={n} r={r} {s:?}: {report:?}");
            }
        }
        let report = obstruction_stalk(&model(1, 1, 4), Source::Holomorphic);
        assert_eq!(report.assembled.dims[&1], 1);
        let report = obstruction_stalk(&model(2, 2, 3), Source::Holomorphic);
        assert_eq!(report.direct.dims, dims(&[(-1, 0), (0, 0), (1, 2), (2, 1)]));
    }

    #[test]
    fn local_cohomology_examples() {
        let rep = koszul_local_cohomology(&model(2, 1, 2), &[1], 0).unwrap();
        assert!(rep.agree && rep.concentrated);
        assert_eq!(rep.total(), 6);
        assert!(rep.cech.keys().all(|a| a[0] < 0 && a[1] >= 0));
        let rep = koszul_local_cohomology(&model(2, 2, 1), &[1, 2], 0).unwrap();
        assert_eq!(rep.cech, BTreeMap::from([(vec![-1, -1], 1)]));
        for n in 1..=3 {
            let lm = model(n, n, 1);
            let all: Vec<usize> = (1..=n).collect();
            let top = koszul_local_cohomology(&lm, &all, n).unwrap();
            let zero = koszul_local_cohomology(&lm, &all, 0).unwrap();
            assert_eq!(top.cech, zero.cech);
        }
    }

    #[test]
    fn local_cohomology_errors() {
        let lm = model(2, 1, 2);
        assert_eq!(
            koszul_local_cohomology(&lm, &[], 0),
            Err(LocalModelError::EmptySubset)
        );
        assert_eq!(
            koszul_local_cohomology(&lm, &[2], 0),
            Err(LocalModelError::SubsetOutOfRange { index: 2, r: 1 })
        );
        assert!(LocalModel::new(2, 3, 2).is_err());
        assert!(LocalModel::new(2, 1, 0).is_err());
    }

    #[test]
    fn toric_hodge_spectral_sequence() {
        let p1 = Fan::projective_line();
        let report = toric_hodge_degeneration(&p1, 3);
        assert!(report.degenerates_at_e1);
        assert_eq!(report.e1, BTreeMap::from([((0, 0), 1), ((1, 0), 1)]));
        assert_eq!(report.cohomology, BTreeMap::from([(0, 1), (1, 1)]));
        let p2 = Fan::projective_plane();
        let report = toric_hodge_degeneration(&p2, 2);
        assert!(report.degenerates_at_e1);
        assert_eq!(report.cohomology, BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
    }
}
