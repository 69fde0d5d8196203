//! The edge complex `(V_E′, d_E)` and the check that `φ_E` and `φ_L` are
//! quasi-isomorphisms on finite truncations.
//!
//! An element `v^a ⊗ u^{k_1} ⊗ … ⊗ u^{k_r} ⊗ v^b` is realized as the
//! decoration of the one internal edge of the tree with legs `{1,2 | 3,4}`,
//! and `d_E` is the part of the graph differential that merges `u`'s or
//! absorbs one into an end. It preserves `m − U` (total `v`-exponent minus
//! total `u`-exponent); the stratum of `φ_E(Δ^k)` is `m − U = k − 1`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::Serialize;

use super::complex::{assemble, Combination};
use super::dgraph::{canonicalize, DEdge, DGraph, DLeg, EdgeDeco, End, VKind};
use super::phi::phi_e_coefficients;
use super::qside::{fold, Flat, Parts};
use crate::linalg::{cohomology_dims, factorial, rank, ComplexLabel, RankMode, Side, SparseMatrix};
use crate::{Rational, Result};

const EDGE_ONLY: Parts = Parts {
    vertex: false,
    contract: false,
    edge: true,
    ternary: false,
};

/// `v^a ⊗ u^{ks} ⊗ v^b` on the test tree, before canonicalization.
fn edge_graph(a: u32, ks: &[u32], b: u32) -> DGraph {
    let end = |v: u32, exp: u32| End {
        v,
        flag: false,
        exp,
    };
    DGraph {
        kinds: vec![VKind::C, VKind::C],
        edges: vec![DEdge {
            a: end(0, a),
            b: end(1, b),
            deco: EdgeDeco::U(ks.to_vec()),
        }],
        legs: [0, 0, 1, 1]
            .iter()
            .map(|&v| DLeg {
                end: end(v, 0),
                k: 0,
            })
            .collect(),
    }
}

/// The element as a combination of canonical graphs.
fn element(a: u32, ks: &[u32], b: u32, c: Rational) -> Combination {
    let (g, s) = canonicalize(&edge_graph(a, ks, b));
    let mut out = Combination::new();
    if s != 0 {
        out.insert(g, c * Rational::from_integer(s.into()));
    }
    out
}

fn add_into(acc: &mut Combination, x: &Combination, c: &Rational) {
    for (g, q) in x {
        *acc.entry(g.clone()).or_insert_with(Rational::zero) += q * c;
    }
    acc.retain(|_, q| !q.is_zero());
}

pub fn d_e(g: &DGraph) -> Result<Combination> {
    fold(Flat::from_graph(g).differential(EDGE_ONLY))
}

fn d_e_of(x: &Combination) -> Result<Combination> {
    let mut out = Combination::new();
    for (g, c) in x {
        add_into(&mut out, &d_e(g)?, c);
    }
    Ok(out)
}

/// `φ_E(Δ^k)` in the edge complex.
pub fn phi_e_image(k: u32) -> Combination {
    let mut out = Combination::new();
    for (j, c) in phi_e_coefficients(k).into_iter().enumerate() {
        add_into(
            &mut out,
            &element(j as u32, &[1], k - j as u32, Rational::one()),
            &c,
        );
    }
    out
}

fn compositions_up_to(total: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for first in 1..=total {
        for rest in compositions_up_to(total - first) {
            let mut ks = vec![first];
            ks.extend(rest);
            out.push(ks);
        }
    }
    out
}

fn inv_fact2(a: u32, b: u32) -> Rational {
    Rational::new(1.into(), factorial(a) * factorial(b))
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumRow {
    /// Number of `Δ`s in the expected class.
    pub k: u32,
    pub dims: BTreeMap<i32, usize>,
    pub represented_by_phi: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct KernelRow {
    pub n: u32,
    /// Rank of `f_{n,·} ↦ e_{n,·}`; `n + 1` when surjective.
    pub rank: usize,
    pub alternating_kernel: bool,
    /// `d f_{n,a} = ε(e_{n,a−1} + e_{n,a})` with one sign `ε` for all `a`.
    pub shape_matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiEReport {
    pub truncation: u32,
    pub strata: Vec<StratumRow>,
    pub kernels: Vec<KernelRow>,
    pub phi_l_iso: bool,
}

impl PhiEReport {
    pub fn passed(&self) -> bool {
        self.phi_l_iso
            && self
                .strata
                .iter()
                .all(|s| s.represented_by_phi && s.dims.values().sum::<usize>() == 1)
            && self
                .kernels
                .iter()
                .all(|k| k.rank == k.n as usize + 1 && k.alternating_kernel && k.shape_matches)
    }
}

/// The map `f_{n,·} → e_{n,·}` of the first page, in the normalized bases.
fn first_page_matrix(n: u32) -> Result<(SparseMatrix, bool)> {
    let rows: Vec<Combination> = (0..=n)
        .map(|a| element(a, &[], n - a, inv_fact2(a, n - a)))
        .collect();
    let mut trip = Vec::new();
    let mut shape = true;
    let mut eps: Option<Rational> = None;
    for a in 0..=n + 1 {
        let f = element(a, &[1], n + 1 - a, inv_fact2(a, n + 1 - a));
        let df = d_e_of(&f)?;
        let mut rest = df.clone();
        for (r, e) in rows.iter().enumerate() {
            let (g, unit) = e.iter().next().expect("e is nonzero");
            let c = df.get(g).cloned().unwrap_or_else(Rational::zero) / unit;
            if !c.is_zero() {
                let expected = r as u32 + 1 == a || r as u32 == a;
                let e0 = eps.get_or_insert_with(|| c.clone()).clone();
                shape &= expected && c == e0;
                trip.push((r, a as usize, c.clone()));
            }
            rest.remove(g);
        }
        shape &= rest.is_empty();
    }
    Ok((
        SparseMatrix::from_triplets(n as usize + 1, n as usize + 2, trip)?,
        shape,
    ))
}

fn kernel_row(n: u32) -> Result<KernelRow> {
    let (m, shape_matches) = first_page_matrix(n)?;
    let alt: Vec<(usize, usize, Rational)> = (0..=n as usize + 1)
        .map(|i| {
            (
                i,
                0,
                Rational::from_integer(if i % 2 == 0 { 1 } else { -1 }.into()),
            )
        })
        .collect();
    let v = SparseMatrix::from_triplets(n as usize + 2, 1, alt)?;
    let r = rank(&m);
    let alternating_kernel = m.mul(&v)?.is_zero() && r == n as usize + 1;
    Ok(KernelRow {
        n,
        rank: r,
        alternating_kernel,
        shape_matches,
    })
}

fn stratum_row(k: u32, truncation: u32) -> Result<StratumRow> {
    // m − U = k − 1 and m + U ≤ truncation
    let mut basis = Vec::new();
    for u in 0..=truncation {
        let Some(m) = (u + k).checked_sub(1) else {
            continue;
        };
        if m + u > truncation {
            continue;
        }
        for ks in compositions_up_to(u)
            .into_iter()
            .filter(|ks| ks.iter().sum::<u32>() == u)
        {
            for a in 0..=m {
                let (g, s) = canonicalize(&edge_graph(a, &ks, m - a));
                if s != 0 {
                    basis.push(g);
                }
            }
        }
    }
    let weight = basis.first().map_or(0, DGraph::q_weight);
    let label = ComplexLabel {
        g: 0,
        n: 4,
        weight,
        side: Side::Other,
    };
    let c = assemble(label, basis, DGraph::q_degree, DGraph::q_weight, d_e)?;
    let dims = cohomology_dims(&c.complex, RankMode::Exact)?;
    let phi = phi_e_image(k);
    let represented_by_phi = match c.coordinates(&phi)? {
        None => false,
        Some((deg, coords)) => {
            let closed = d_e_of(&phi)?.is_empty();
            let below = c.complex.differential(deg - 1);
            let col: Vec<(usize, usize, Rational)> = coords
                .into_iter()
                .map(|(i, q)| (i, below.cols(), q))
                .collect();
            let extended = SparseMatrix::from_triplets(
                below.rows(),
                below.cols() + 1,
                below
                    .triplets()
                    .map(|(r, c, q)| (r, c, q.clone()))
                    .chain(col),
            )?;
            closed && rank(&extended) == rank(&below) + 1 && dims.get(&deg) == Some(&1)
        }
    };
    Ok(StratumRow {
        k,
        dims,
        represented_by_phi,
    })
}

/// Checks on the truncation `m + U ≤ N`: every complete stratum
/// (`k ≤ N − 1`) has exactly one cohomology class, spanned by `φ_E(Δ^k)`;
/// the first-page maps `f_{n,·} → e_{n,·}` for `n ≤ N − 1` are surjective
/// with alternating kernel; `φ_L` is an isomorphism in each `v`-degree.
pub fn verify_phie_truncated(truncation: u32) -> Result<PhiEReport> {
    let strata = (0..truncation)
        .map(|k| stratum_row(k, truncation))
        .collect::<Result<_>>()?;
    let kernels = (0..truncation).map(kernel_row).collect::<Result<_>>()?;
    // φ_L: Δ^k ↦ v^k/k! is diagonal with nonzero entries
    let diag: Vec<(usize, usize, Rational)> = (0..=truncation)
        .map(|k| {
            (
                k as usize,
                k as usize,
                Rational::new(1.into(), factorial(k)),
            )
        })
        .collect();
    let phi_l =
        SparseMatrix::from_triplets(truncation as usize + 1, truncation as usize + 1, diag)?;
    let phi_l_iso = rank(&phi_l) == truncation as usize + 1;
    Ok(PhiEReport {
        truncation,
        strata,
        kernels,
        phi_l_iso,
    })
}
