//! Random generators with known answers, for property tests and the
//! acceptance suite.
//!
//! Complexes are direct sums of elementary pieces (a single class, or an
//! acyclic pair joined by the identity) written in a random unimodular basis
//! of each degree, so their cohomology is known by construction.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::{ChainMap, CochainComplex};
use crate::conecx::{ConeComplex, IntersectionData, Stratum};
use crate::linalg::{IntegerMatrix, Rational, RationalMatrix};
use crate::weights::CellWeights;

/// A unimodular matrix and its inverse, built from elementary row operations.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize, steps: usize) -> (IntegerMatrix, IntegerMatrix) {
    let mut m = identity(n);
    let mut inv = identity(n);
    if n < 2 {
        if n == 1 && rng.gen_bool(0.5) {
            m[0][0] = BigInt::from(-1);
            inv[0][0] = BigInt::from(-1);
        }
        return (dense(n, n, m), dense(n, n, inv));
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        // m <- E m with E = I + c e_ij ; inv <- inv E^{-1}
        let row_j = m[j].clone();
        for (x, y) in m[i].iter_mut().zip(&row_j) {
            *x += &c * y;
        }
        for row in inv.iter_mut() {
            let delta = &c * &row[i];
            row[j] -= delta;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let m: Vec<Vec<BigInt>> = order.iter().map(|&i| m[i].clone()).collect();
    let inv: Vec<Vec<BigInt>> = inv
        .iter()
        .map(|row| order.iter().map(|&i| row[i].clone()).collect())
        .collect();
    (dense(n, n, m), dense(n, n, inv))
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect()
}

fn dense(rows: usize, cols: usize, a: Vec<Vec<BigInt>>) -> IntegerMatrix {
    let mut m = IntegerMatrix::zeros(rows, cols);
    for (i, row) in a.into_iter().enumerate() {
        for (j, x) in row.into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    m
}

pub fn random_integer_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, bound: i64) -> IntegerMatrix {
    let a = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| BigInt::from(rng.gen_range(-bound..=bound)))
                .collect()
        })
        .collect();
    dense(rows, cols, a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Piece {
    /// One basis vector in degree `k` carrying a class.
    Class(i64),
    /// Basis vectors in degrees `k` and `k + 1` with `d = 1` between them.
    Pair(i64),
}

/// A random complex with its known cohomology and the data needed to build
/// chain maps into or out of it.
#[derive(Clone, Debug)]
pub struct KnownComplex {
    pub complex: CochainComplex,
    pub cohomology: BTreeMap<i64, usize>,
    pieces: Vec<Piece>,
    /// Per degree: the piece slots `(piece index, is top of a pair)` in
    /// block order.
    slots: Vec<Vec<(usize, bool)>>,
    /// Per degree: change of basis (block basis -> stored basis) and inverse.
    basis: Vec<(RationalMatrix, RationalMatrix)>,
}

impl KnownComplex {
    fn block_index(&self, k: i64, piece: usize, top: bool) -> Option<usize> {
        let idx = k - self.complex.lo();
        if idx < 0 || idx as usize >= self.slots.len() {
            return None;
        }
        self.slots[idx as usize].iter().position(|&s| s == (piece, top))
    }
}

/// A random complex on degrees `lo..=hi` with total dimension at most
/// `max_total`.
pub fn random_complex<R: Rng>(rng: &mut R, lo: i64, hi: i64, max_total: usize) -> KnownComplex {
    let mut pieces = Vec::new();
    let mut total = 0;
    let target = rng.gen_range(1..=max_total.max(1));
    while total < target {
        let k = rng.gen_range(lo..=hi);
        if k < hi && total + 2 <= max_total && rng.gen_bool(0.5) {
            pieces.push(Piece::Pair(k));
            total += 2;
        } else {
            pieces.push(Piece::Class(k));
            total += 1;
        }
    }
    pieces.shuffle(rng);

    let ndeg = (hi - lo + 1) as usize;
    let mut slots = vec![Vec::new(); ndeg];
    let mut cohomology: BTreeMap<i64, usize> = (lo..=hi).map(|k| (k, 0)).collect();
    for (i, p) in pieces.iter().enumerate() {
        match *p {
            Piece::Class(k) => {
                slots[(k - lo) as usize].push((i, false));
                *cohomology.get_mut(&k).unwrap() += 1;
            }
            Piece::Pair(k) => {
                slots[(k - lo) as usize].push((i, false));
                slots[(k - lo + 1) as usize].push((i, true));
            }
        }
    }
    let dims: Vec<usize> = slots.iter().map(Vec::len).collect();
    let basis: Vec<(RationalMatrix, RationalMatrix)> = dims
        .iter()
        .map(|&n| {
            let (p, pinv) = random_unimodular(rng, n, 3 * n);
            (p.to_rational(), pinv.to_rational())
        })
        .collect();
    let mut diffs = Vec::new();
    for i in 0..ndeg.saturating_sub(1) {
        let mut block = RationalMatrix::zeros(dims[i + 1], dims[i]);
        for (c, &(piece, top)) in slots[i].iter().enumerate() {
            if !top && matches!(pieces[piece], Piece::Pair(_)) {
                let r = slots[i + 1].iter().position(|&s| s == (piece, true)).unwrap();
                block.set(r, c, one());
            }
        }
        diffs.push(basis[i + 1].0.mul(&block).mul(&basis[i].1));
    }
    let complex = CochainComplex::new(lo, dims, diffs).expect("conjugated block complex");
    KnownComplex {
        complex,
        cohomology,
        pieces,
        slots,
        basis,
    }
}

fn one() -> Rational {
    Rational::from_integer(1.into())
}

fn small<R: Rng>(rng: &mut R) -> Rational {
    Rational::from_integer(rng.gen_range(-3i64..=3).into())
}

/// A random chain map between two known complexes on the same degrees.
///
/// The map is a sum of piece-level maps that commute with `d` by
/// construction plus a null-homotopic term `d h + h d`.
pub fn random_chain_map<R: Rng>(rng: &mut R, source: &KnownComplex, target: &KnownComplex) -> ChainMap {
    let s = &source.complex;
    let t = &target.complex;
    let lo = s.lo();
    let mut blocks: Vec<RationalMatrix> = s
        .degrees()
        .map(|k| RationalMatrix::zeros(t.dim(k), s.dim(k)))
        .collect();
    for (i, sp) in source.pieces.iter().enumerate() {
        for (j, tp) in target.pieces.iter().enumerate() {
            let c = small(rng);
            match (*sp, *tp) {
                (Piece::Class(a), Piece::Class(b)) if a == b => {
                    let col = source.block_index(a, i, false).unwrap();
                    let row = target.block_index(a, j, false).unwrap();
                    blocks[(a - lo) as usize].set(row, col, c);
                }
                (Piece::Pair(a), Piece::Pair(b)) if a == b => {
                    for (k, top) in [(a, false), (a + 1, true)] {
                        let col = source.block_index(k, i, top).unwrap();
                        let row = target.block_index(k, j, top).unwrap();
                        blocks[(k - lo) as usize].set(row, col, c.clone());
                    }
                }
                // a class may land on the top of an acyclic pair
                (Piece::Class(a), Piece::Pair(b)) if a == b + 1 => {
                    let col = source.block_index(a, i, false).unwrap();
                    let row = target.block_index(a, j, true).unwrap();
                    blocks[(a - lo) as usize].set(row, col, c);
                }
                // the bottom of an acyclic pair may map onto a class
                (Piece::Pair(a), Piece::Class(b)) if a == b => {
                    let col = source.block_index(a, i, false).unwrap();
                    let row = target.block_index(a, j, false).unwrap();
                    blocks[(a - lo) as usize].set(row, col, c);
                }
                _ => {}
            }
        }
    }
    let mut components: Vec<RationalMatrix> = s
        .degrees()
        .map(|k| {
            let idx = (k - lo) as usize;
            target.basis[idx].0.mul(&blocks[idx]).mul(&source.basis[idx].1)
        })
        .collect();
    // homotopy h_k : S^k -> T^{k-1}
    let homotopy: Vec<RationalMatrix> = s
        .degrees()
        .map(|k| random_rational_matrix(rng, t.dim(k - 1), s.dim(k)))
        .collect();
    let h = |k: i64| -> RationalMatrix {
        if s.degrees().contains(&k) {
            homotopy[(k - lo) as usize].clone()
        } else {
            RationalMatrix::zeros(t.dim(k - 1), s.dim(k))
        }
    };
    for k in s.degrees() {
        let term = t
            .differential(k - 1)
            .mul(&h(k))
            .add(&h(k + 1).mul(&s.differential(k)));
        let idx = (k - lo) as usize;
        components[idx] = components[idx].add(&term);
    }
    ChainMap::new(s.clone(), t.clone(), components).expect("constructed to commute")
}

pub fn random_rational_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> RationalMatrix {
    let mut m = RationalMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(0.5) {
                m.set(i, j, small(rng));
            }
        }
    }
    m
}

/// A random partition of `n` in nonincreasing order.
pub fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.gen_range(1..=left);
        parts.push(s);
        left -= s;
    }
    parts.sort_unstable_by(|a, b| b.cmp(a));
    parts
}

/// Nilpotent Jordan matrix with the given block sizes.
pub fn jordan_nilpotent(blocks: &[usize]) -> RationalMatrix {
    let n = blocks.iter().sum();
    let mut m = RationalMatrix::zeros(n, n);
    let mut start = 0;
    for &s in blocks {
        for i in 0..s.saturating_sub(1) {
            m.set(start + i, start + i + 1, one());
        }
        start += s;
    }
    m
}

/// A random nilpotent matrix of size `n` together with its Jordan type.
pub fn random_nilpotent<R: Rng>(rng: &mut R, n: usize) -> (RationalMatrix, Vec<usize>) {
    let blocks = random_partition(rng, n);
    let (p, pinv) = random_unimodular(rng, n, 3 * n);
    let m = p
        .to_rational()
        .mul(&jordan_nilpotent(&blocks))
        .mul(&pinv.to_rational());
    (m, blocks)
}

/// A random simplicial complex on at most `max_vertices` vertices, built from
/// up to `max_simplices` random simplices of dimension at most 3 and closed
/// downward.
pub fn random_simplicial_data<R: Rng>(
    rng: &mut R,
    max_vertices: usize,
    max_simplices: usize,
) -> IntersectionData {
    let nv = rng.gen_range(1..=max_vertices.max(1));
    let names: Vec<String> = (0..nv).map(|i| format!("D{i}")).collect();
    let mut faces: BTreeSet<Vec<usize>> = BTreeSet::new();
    for _ in 0..rng.gen_range(0..=max_simplices) {
        let size = rng.gen_range(2..=4.min(nv).max(2));
        if size > nv {
            continue;
        }
        let mut verts: Vec<usize> = (0..nv).collect();
        verts.shuffle(rng);
        verts.truncate(size);
        verts.sort_unstable();
        for mask in 1u32..(1 << size) {
            if mask.count_ones() >= 2 {
                faces.insert(
                    (0..size)
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| verts[i])
                        .collect(),
                );
            }
        }
    }
    IntersectionData {
        components: names.clone(),
        strata: faces
            .into_iter()
            .map(|f| Stratum {
                components: f.iter().map(|&v| names[v].clone()).collect(),
                tag: String::new(),
                faces: BTreeMap::new(),
            })
            .collect(),
        rays: None,
    }
}

/// Random positive values `p/q` with `1 <= p <= 9`, `1 <= q <= 4` on every cell.
pub fn random_cell_weights<R: Rng>(rng: &mut R, c: &ConeComplex) -> CellWeights {
    let given = c
        .cell_ids()
        .map(|id| {
            (
                c.label(id),
                Rational::new(rng.gen_range(1..=9).into(), rng.gen_range(1..=4).into()),
            )
        })
        .collect();
    CellWeights::resolve(c, &given).expect("positive weights on listed cells")
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::linalg::rank;

    #[test]
    fn unimodular_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 0..6 {
            let (m, inv) = random_unimodular(&mut rng, n, 20);
            assert_eq!(m.mul(&inv), IntegerMatrix::identity(n));
        }
    }

    #[test]
    fn known_cohomology_matches() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let kc = random_complex(&mut rng, -1, 2, 8);
            assert_eq!(kc.complex.cohomology_dims(), kc.cohomology);
            assert!(kc.complex.total_dim() <= 8);
        }
    }

    #[test]
    fn chain_maps_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let a = random_complex(&mut rng, 0, 2, 6);
            let b = random_complex(&mut rng, 0, 2, 6);
            random_chain_map(&mut rng, &a, &b);
        }
    }

    #[test]
    fn nilpotent_rank_profile() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let (m, blocks) = random_nilpotent(&mut rng, 6);
        let expected = blocks.iter().map(|&s| s - 1).sum::<usize>();
        assert_eq!(rank(&m), expected);
        assert!(m.pow(blocks[0] as u32).is_zero());
    }
}
