//! Mapping cones and the long exact sequence of a chain map.

use crate::linalg::{rank, Rational, RationalMatrix};

use super::{ChainMap, CochainComplex};

/// Cone of `f: S -> T`.
///
/// `Cone^k = T^k ⊕ S^{k+1}` with `d(t, s) = (d_T t + f(s), -d_S s)`, so the
/// target block comes first in every degree. The result spans degrees
/// `lo - 1 ..= hi` of the map's range.
pub fn mapping_cone(f: &ChainMap) -> CochainComplex {
    let (s, t) = (f.source(), f.target());
    let lo = s.lo() - 1;
    let hi = s.hi();
    let dims: Vec<usize> = (lo..=hi).map(|k| t.dim(k) + s.dim(k + 1)).collect();
    let mut diffs = Vec::new();
    for k in lo..hi {
        let (tk, tk1) = (t.dim(k), t.dim(k + 1));
        let mut d = RationalMatrix::zeros(tk1 + s.dim(k + 2), tk + s.dim(k + 1));
        d.set_block(0, 0, &t.differential(k));
        d.set_block(0, tk, &f.component(k + 1));
        d.set_block(tk1, tk, &s.differential(k + 1).neg());
        diffs.push(d);
    }
    CochainComplex::new(lo, dims, diffs).expect("cone of a chain map is a complex")
}

/// Which of the three cohomology groups a node of the sequence is.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LesTerm {
    Source,
    Target,
    Cone,
}

/// One group `H^k(term)` of the long exact sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LesNode {
    pub term: LesTerm,
    pub degree: i64,
    pub dim: usize,
    /// Rank of the map arriving at this node.
    pub incoming_rank: usize,
    /// Rank of the map leaving this node.
    pub outgoing_rank: usize,
}

impl LesNode {
    /// `im(incoming) = ker(outgoing)` as a dimension count; the inclusion
    /// `im ⊆ ker` is checked separately through the composite maps.
    pub fn is_exact(&self) -> bool {
        self.incoming_rank + self.outgoing_rank == self.dim
    }
}

/// `... -> H^k(S) -> H^k(T) -> H^k(Cone) -> H^{k+1}(S) -> ...` with explicit
/// matrices in chosen cohomology bases.
#[derive(Clone, Debug)]
pub struct LongExactSequence {
    pub nodes: Vec<LesNode>,
    /// `maps[i]` goes from `nodes[i]` to `nodes[i + 1]`.
    pub maps: Vec<RationalMatrix>,
    /// Every composite of consecutive maps vanishes.
    pub composites_vanish: bool,
}

impl LongExactSequence {
    pub fn is_exact(&self) -> bool {
        self.composites_vanish && self.nodes.iter().all(LesNode::is_exact)
    }
}

fn induced_map(
    reps: &RationalMatrix,
    apply: impl Fn(&[Rational]) -> Vec<Rational>,
    coords: impl Fn(&[Rational]) -> Vec<Rational>,
    target_dim: usize,
) -> RationalMatrix {
    let cols: Vec<Vec<Rational>> = reps.columns().iter().map(|v| coords(&apply(v))).collect();
    RationalMatrix::from_columns(target_dim, &cols)
}

pub fn long_exact_sequence(f: &ChainMap) -> LongExactSequence {
    let (s, t) = (f.source(), f.target());
    let cone = mapping_cone(f);
    let lo = cone.lo();
    let hi = cone.hi();

    let mut nodes = Vec::new();
    let mut maps = Vec::new();
    for k in lo..=hi {
        let hs = s.cohomology_basis(k);
        let ht = t.cohomology_basis(k);
        let hc = cone.cohomology_basis(k);
        let hs_next = s.cohomology_basis(k + 1);
        let (tk, sk1) = (t.dim(k), s.dim(k + 1));
        let fk = f.component(k);

        let f_star = induced_map(
            hs.representatives(),
            |v| fk.mul_vec(v),
            |w| ht.coordinates(w).expect("image of a cocycle is a cocycle"),
            ht.dim(),
        );
        let i_star = induced_map(
            ht.representatives(),
            |v| {
                let mut out = v.to_vec();
                out.resize(tk + sk1, Rational::default());
                out
            },
            |w| hc.coordinates(w).expect("inclusion of a cocycle"),
            hc.dim(),
        );
        let delta = induced_map(
            hc.representatives(),
            |v| v[tk..].to_vec(),
            |w| hs_next.coordinates(w).expect("projection of a cone cocycle"),
            hs_next.dim(),
        );
        nodes.push((LesTerm::Source, k, hs.dim()));
        nodes.push((LesTerm::Target, k, ht.dim()));
        nodes.push((LesTerm::Cone, k, hc.dim()));
        maps.push(f_star);
        maps.push(i_star);
        maps.push(delta);
    }
    // the final connecting map lands in H^{hi+1}(S) = 0
    nodes.push((LesTerm::Source, hi + 1, 0));

    let mut composites_vanish = true;
    for pair in maps.windows(2) {
        if !pair[1].mul(&pair[0]).is_zero() {
            composites_vanish = false;
        }
    }

    let ranks: Vec<usize> = maps.iter().map(rank).collect();
    let nodes = nodes
        .into_iter()
        .enumerate()
        .map(|(i, (term, degree, dim))| LesNode {
            term,
            degree,
            dim,
            incoming_rank: if i == 0 { 0 } else { ranks[i - 1] },
            outgoing_rank: ranks.get(i).copied().unwrap_or(0),
        })
        .collect();
    LongExactSequence {
        nodes,
        maps,
        composites_vanish,
    }
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::complex::{euler_of, ChainMap};

    fn one_term(dim: usize) -> CochainComplex {
        CochainComplex::zero_differentials(0, vec![dim]).unwrap()
    }

    fn circle() -> CochainComplex {
        let d0 = RationalMatrix::from_i64_rows(&[vec![-1, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]]);
        CochainComplex::new(0, vec![3, 3], vec![d0]).unwrap()
    }

    #[test]
    fn cone_of_identity_is_acyclic() {
        let c = circle();
        let cone = mapping_cone(&ChainMap::identity(&c));
        assert!(cone.cohomology_dims().values().all(|&h| h == 0));
    }

    #[test]
    fn cone_of_zero_map_on_points() {
        let f = ChainMap::new(one_term(1), one_term(1), vec![RationalMatrix::zeros(1, 1)]).unwrap();
        let h = mapping_cone(&f).cohomology_dims();
        assert_eq!(h, BTreeMap::from([(-1, 1), (0, 1)]));
    }

    #[test]
    fn cone_of_inclusion_is_cokernel() {
        let inc = RationalMatrix::from_i64_rows(&[vec![1], vec![0]]);
        let f = ChainMap::new(one_term(1), one_term(2), vec![inc]).unwrap();
        let h = mapping_cone(&f).cohomology_dims();
        assert_eq!(h, BTreeMap::from([(-1, 0), (0, 1)]));
    }

    #[test]
    fn les_of_quasi_isomorphism() {
        let c = circle();
        let les = long_exact_sequence(&ChainMap::identity(&c));
        assert!(les.is_exact());
        for (node, map) in les.nodes.iter().zip(&les.maps) {
            match node.term {
                LesTerm::Cone => assert_eq!(node.dim, 0),
                LesTerm::Source => {
                    // f_* is an isomorphism
                    assert_eq!(rank(map), node.dim);
                }
                LesTerm::Target => {}
            }
        }
    }

    #[test]
    fn les_of_zero_map_between_circles() {
        let c = circle();
        let zeros = c
            .degrees()
            .map(|k| RationalMatrix::zeros(c.dim(k), c.dim(k)))
            .collect();
        let f = ChainMap::new(c.clone(), c, zeros).unwrap();
        let les = long_exact_sequence(&f);
        assert!(les.is_exact());
        // connecting maps H^k(Cone) -> H^{k+1}(S) are onto H^{k+1}(S)
        for (i, node) in les.nodes.iter().enumerate() {
            if node.term == LesTerm::Cone {
                let next = &les.nodes[i + 1];
                assert_eq!(rank(&les.maps[i]), next.dim, "degree {}", node.degree);
            }
        }
        let cone = mapping_cone(&f);
        assert_eq!(
            euler_of(&cone.cohomology_dims()),
            euler_of(&f.target().cohomology_dims()) - euler_of(&f.source().cohomology_dims())
        );
    }
}
