//! The comparison map `Φ_{g,n}` and the checks built on it.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::bvside::build_feyn_bv;
use super::complex::{Combination, GraphComplex};
use super::dgraph::{canonicalize, DGraph, EdgeDeco};
use super::qside::{build_afeyn_qbv, top_weight};
use crate::linalg::{cohomology_dims, euler_characteristic, factorial, RankMode, SparseMatrix};
use crate::{Error, Rational, Result};

/// Normalization of the leg map `Δ^k ↦ c_k v^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LegNorm {
    /// `c_k = 1/k!`.
    Factorial,
    /// `c_k = 1`.
    Literal,
}

fn inv_fact(k: u32) -> Rational {
    Rational::new(BigInt::one(), factorial(k))
}

/// Coefficients of `φ_E(Δ^k) = Σ_j c_j v^j ⊗ u ⊗ v^{k−j}`.
pub fn phi_e_coefficients(k: u32) -> Vec<Rational> {
    (0..=k)
        .map(|j| {
            let c = inv_fact(j) * inv_fact(k - j);
            if (k - j).is_multiple_of(2) {
                c
            } else {
                -c
            }
        })
        .collect()
}

/// `Φ` on one graph of the `BV` side.
pub fn phi_graph(g: &DGraph, legs: LegNorm) -> Combination {
    let mut partial: Vec<(DGraph, Rational)> = vec![(g.clone(), Rational::one())];
    for i in 0..g.edges.len() {
        let EdgeDeco::Delta(k) = g.edges[i].deco else {
            panic!("Q-side edge in a BV graph")
        };
        let coeffs = phi_e_coefficients(k);
        let mut next = Vec::new();
        for (h, c) in partial {
            for (j, cj) in coeffs.iter().enumerate() {
                let mut x = h.clone();
                x.edges[i].a.exp = j as u32;
                x.edges[i].b.exp = k - j as u32;
                x.edges[i].deco = EdgeDeco::U(vec![1]);
                next.push((x, &c * cj));
            }
        }
        partial = next;
    }
    let mut out = Combination::new();
    for (mut h, mut c) in partial {
        for l in &mut h.legs {
            if legs == LegNorm::Factorial {
                c *= inv_fact(l.k);
            }
            l.end.exp = l.k;
            l.k = 0;
        }
        let (h, s) = canonicalize(&h);
        if s != 0 {
            *out.entry(h).or_insert_with(Rational::zero) += c * Rational::from_integer(s.into());
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Matrices of `Φ` from degree `d` of `source` to degree `d + top` of `target`.
pub fn phi_matrix_between(
    source: &GraphComplex,
    target: &GraphComplex,
    legs: LegNorm,
) -> Result<BTreeMap<i32, SparseMatrix>> {
    let shift = top_weight(source.label.g, source.label.n);
    let mut out = BTreeMap::new();
    for (&deg, gs) in &source.basis {
        let rows = target.basis.get(&(deg + shift)).map_or(0, Vec::len);
        let mut trip = Vec::new();
        for (col, g) in gs.iter().enumerate() {
            if let Some((d, coords)) = target.coordinates(&phi_graph(g, legs))? {
                if d != deg + shift {
                    return Err(Error::MalformedComplex(format!(
                        "Φ({g}) lands in degree {d}"
                    )));
                }
                trip.extend(coords.into_iter().map(|(row, c)| (row, col, c)));
            }
        }
        out.insert(deg, SparseMatrix::from_triplets(rows, gs.len(), trip)?);
    }
    Ok(out)
}

pub fn phi_matrix(g: u32, n: u32, w: i32, legs: LegNorm) -> Result<BTreeMap<i32, SparseMatrix>> {
    let source = build_feyn_bv(g, n, w)?;
    let target = build_afeyn_qbv(g, n, top_weight(g, n) - w)?;
    phi_matrix_between(&source, &target, legs)
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiReport {
    pub g: u32,
    pub n: u32,
    pub weight: i32,
    pub legs: LegNorm,
    pub chain_map: bool,
    pub weights: bool,
    pub quasi_iso: bool,
    pub source_dims: BTreeMap<i32, usize>,
    pub target_dims: BTreeMap<i32, usize>,
}

impl PhiReport {
    pub fn passed(&self) -> bool {
        self.chain_map && self.weights && self.quasi_iso
    }
}

/// `d ∘ Φ − Φ ∘ d = 0` in every degree.
pub fn is_chain_map(
    source: &GraphComplex,
    target: &GraphComplex,
    phi: &BTreeMap<i32, SparseMatrix>,
) -> Result<bool> {
    let shift = top_weight(source.label.g, source.label.n);
    for (&deg, p) in phi {
        let lhs = target.complex.differential(deg + shift).mul(p)?;
        let next = phi.get(&(deg + 1)).cloned().unwrap_or_else(|| {
            SparseMatrix::zero(
                target.complex.dim(deg + 1 + shift),
                source.complex.dim(deg + 1),
            )
        });
        let rhs = next.mul(&source.complex.differential(deg))?;
        if !lhs.sub(&rhs)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every term of every `Φ(Γ)` has the complementary weight.
pub fn weights_complementary(source: &GraphComplex, legs: LegNorm) -> bool {
    let top = top_weight(source.label.g, source.label.n);
    source.basis.values().flatten().all(|g| {
        let w = g.bv_weight();
        phi_graph(g, legs).keys().all(|h| h.q_weight() == top - w)
    })
}

/// Target cohomology moved back to source degrees.
fn shifted(dims: &BTreeMap<i32, usize>, shift: i32) -> BTreeMap<i32, usize> {
    dims.iter().map(|(d, n)| (d - shift, *n)).collect()
}

pub fn verify_phi_between(
    source: &GraphComplex,
    target: &GraphComplex,
    legs: LegNorm,
    mode: RankMode,
) -> Result<PhiReport> {
    let (g, n, w) = (source.label.g, source.label.n, source.label.weight);
    let phi = phi_matrix_between(source, target, legs)?;
    let chain_map = is_chain_map(source, target, &phi)?;
    let weights = weights_complementary(source, legs);
    let source_dims = cohomology_dims(&source.complex, mode)?;
    let target_dims = cohomology_dims(&target.complex, mode)?;
    let quasi_iso = source_dims == shifted(&target_dims, top_weight(g, n));
    Ok(PhiReport {
        g,
        n,
        weight: w,
        legs,
        chain_map,
        weights,
        quasi_iso,
        source_dims,
        target_dims,
    })
}

pub fn verify_phi(g: u32, n: u32, w: i32, legs: LegNorm, mode: RankMode) -> Result<PhiReport> {
    let source = build_feyn_bv(g, n, w)?;
    let target = build_afeyn_qbv(g, n, top_weight(g, n) - w)?;
    verify_phi_between(&source, &target, legs, mode)
}

/// Runs the chain-map check with the factorial leg map and falls back to
/// the literal one if it fails.
pub fn verify_phi_auto(g: u32, n: u32, w: i32, mode: RankMode) -> Result<PhiReport> {
    let source = build_feyn_bv(g, n, w)?;
    let target = build_afeyn_qbv(g, n, top_weight(g, n) - w)?;
    let first = verify_phi_between(&source, &target, LegNorm::Factorial, mode)?;
    if first.chain_map {
        return Ok(first);
    }
    verify_phi_between(&source, &target, LegNorm::Literal, mode)
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub g: u32,
    pub n: u32,
    pub weight: i32,
    /// `k ↦ dim gr_W H^{−k}` of the `BV` side.
    pub feyn_bv: BTreeMap<i32, usize>,
    /// `k ↦ dim gr_{top−W} H^{top−k}` of the Q side.
    pub afeyn_qbv: BTreeMap<i32, usize>,
    pub euler_feyn_bv: i64,
    pub euler_afeyn_qbv: i64,
    pub equal: bool,
}

/// Euler characteristic of a complex from its basis sizes.
pub fn euler_of(c: &GraphComplex) -> i64 {
    let dims: BTreeMap<i32, usize> = c.basis.iter().map(|(d, b)| (*d, b.len())).collect();
    euler_characteristic(&dims)
}

/// Cohomology tables of both sides indexed by `k`. The Euler
/// characteristics are compared first; if they differ the ranks are
/// still computed so that both tables can be reported.
pub fn compare_cohomology_between(
    source: &GraphComplex,
    target: &GraphComplex,
    mode: RankMode,
) -> Result<Comparison> {
    let (g, n, w) = (source.label.g, source.label.n, source.label.weight);
    let top = top_weight(g, n);
    let euler_feyn_bv = euler_of(source);
    let euler_afeyn_qbv = if top % 2 == 0 {
        euler_of(target)
    } else {
        -euler_of(target)
    };
    let feyn_bv: BTreeMap<i32, usize> = cohomology_dims(&source.complex, mode)?
        .into_iter()
        .map(|(d, x)| (-d, x))
        .collect();
    let afeyn_qbv: BTreeMap<i32, usize> = cohomology_dims(&target.complex, mode)?
        .into_iter()
        .map(|(d, x)| (top - d, x))
        .collect();
    let equal = euler_feyn_bv == euler_afeyn_qbv && feyn_bv == afeyn_qbv;
    Ok(Comparison {
        g,
        n,
        weight: w,
        feyn_bv,
        afeyn_qbv,
        euler_feyn_bv,
        euler_afeyn_qbv,
        equal,
    })
}

pub fn compare_cohomology(g: u32, n: u32, w: i32, mode: RankMode) -> Result<Comparison> {
    let source = build_feyn_bv(g, n, w)?;
    let target = build_afeyn_qbv(g, n, top_weight(g, n) - w)?;
    compare_cohomology_between(&source, &target, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feyn::dgraph::{DEdge, DLeg, End, VKind};
    use crate::linalg::rat;
    use num_traits::Signed;

    fn tree(k: u32) -> DGraph {
        let end = |v| End {
            v,
            flag: false,
            exp: 0,
        };
        DGraph {
            kinds: vec![VKind::C, VKind::C],
            edges: vec![DEdge {
                a: end(0),
                b: end(1),
                deco: EdgeDeco::Delta(k),
            }],
            legs: [0, 0, 1, 1]
                .iter()
                .map(|&v| DLeg { end: end(v), k: 0 })
                .collect(),
        }
    }

    fn with_exps(a: u32, b: u32) -> DGraph {
        let mut g = tree(0);
        g.edges[0].deco = EdgeDeco::U(vec![1]);
        g.edges[0].a.exp = a;
        g.edges[0].b.exp = b;
        g
    }

    fn single(g: DGraph, c: Rational) -> Combination {
        let (h, s) = canonicalize(&g);
        [(h, c * Rational::from_integer(s.into()))].into()
    }

    #[test]
    fn edge_images() {
        assert_eq!(
            phi_graph(&tree(0), LegNorm::Factorial),
            single(with_exps(0, 0), rat(1, 1))
        );
        let mut want = single(with_exps(1, 0), rat(1, 1));
        want.extend(single(with_exps(0, 1), rat(-1, 1)));
        assert_eq!(phi_graph(&tree(1), LegNorm::Factorial), want);
        assert_eq!(
            phi_e_coefficients(2),
            vec![rat(1, 2), rat(-1, 1), rat(1, 2)]
        );
    }

    #[test]
    fn tripod_map_is_the_identity() {
        let m = phi_matrix(0, 3, 0, LegNorm::Factorial).unwrap();
        assert_eq!(m[&0], SparseMatrix::identity(1));
        let r = verify_phi(0, 3, 0, LegNorm::Factorial, RankMode::Exact).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn leg_normalizations_agree_up_to_one_delta() {
        let g = tree(0);
        let mut h = g.clone();
        h.legs[0].k = 1;
        assert_eq!(
            phi_graph(&h, LegNorm::Factorial),
            phi_graph(&h, LegNorm::Literal)
        );
        h.legs[0].k = 2;
        let f = phi_graph(&h, LegNorm::Factorial);
        let l = phi_graph(&h, LegNorm::Literal);
        assert_eq!(
            f.values().next().unwrap() * rat(2, 1),
            *l.values().next().unwrap()
        );
    }

    #[test]
    fn small_cases_pass() {
        for (g, n, w) in [(0, 4, 0), (0, 4, 2), (1, 1, 0), (1, 1, 2), (1, 2, 2)] {
            let r = verify_phi(g, n, w, LegNorm::Factorial, RankMode::Exact).unwrap();
            assert!(r.passed(), "{r:?}");
            let c = compare_cohomology(g, n, w, RankMode::Exact).unwrap();
            assert!(c.equal, "{c:?}");
        }
    }

    #[test]
    fn chain_map_check_catches_a_wrong_edge_sign() {
        let source = build_feyn_bv(0, 4, 2).unwrap();
        let target = build_afeyn_qbv(0, 4, 0).unwrap();
        let mut phi = phi_matrix_between(&source, &target, LegNorm::Factorial).unwrap();
        assert!(is_chain_map(&source, &target, &phi).unwrap());
        // drop the sign of every edge image with one Δ
        let deg = -3;
        let col_of: Vec<bool> = source.basis[&deg]
            .iter()
            .map(|g| g.edges.iter().any(|e| e.deco == EdgeDeco::Delta(1)))
            .collect();
        let m = &phi[&deg];
        let trip: Vec<_> = m
            .triplets()
            .map(|(r, c, q)| (r, c, if col_of[c] { q.abs() } else { q.clone() }))
            .collect();
        phi.insert(
            deg,
            SparseMatrix::from_triplets(m.rows(), m.cols(), trip).unwrap(),
        );
        assert!(!is_chain_map(&source, &target, &phi).unwrap());
    }

    #[test]
    fn tables_are_indexed_by_k() {
        let c = compare_cohomology(0, 4, 0, RankMode::Exact).unwrap();
        assert_eq!(c.feyn_bv, [(1, 2)].into());
        assert_eq!(c.afeyn_qbv, [(1, 2)].into());
        assert_eq!(c.euler_feyn_bv, -2);
    }
}
