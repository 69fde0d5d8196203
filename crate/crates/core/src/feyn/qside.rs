//! The amputated Feynman transform of `QBV`: core graphs whose vertices carry
//! `x ⊗ v^…` and whose edges carry strings `u^{k_1} ⊗ … ⊗ u^{k_r}`.
//!
//! The complex is infinite-dimensional in each degree and weight, since
//! powers of `u` and `v` can grow together. Two finite subcomplexes are
//! provided, both closed under the differential and both quasi-isomorphic
//! to the whole complex in the weights `top` and `top − 2`:
//!
//! * [`Truncation::VDegree`]: total `v`-exponent at most `N`, arbitrary
//!   `u`-strings. With `N = W/2`, where `W = top − W′` is the complementary
//!   weight, the quotient is filtered by `v`-degree with acyclic graded
//!   pieces (on each of them the `u`-merges dominate, and the bar
//!   cohomology of `uℚ[u]` forces `#E + v-degree ≤ W/2`).
//! * [`Truncation::Koszul`]: every edge carries nothing or a single `u`.
//!   Filtering by vertex count plus `v`-degree, the graded differential is
//!   the `u`-merging on each edge and the inclusion of `{1, u}` into the bar
//!   complex of `uℚ[u]` is a quasi-isomorphism.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::Zero;

use super::bvside::{e_choices, end_mut, halves_at, vertex_elems, Half};
use super::complex::{assemble, Combination, GraphComplex};
use super::dgraph::{canonicalize, DEdge, DGraph, DLeg, EdgeDeco, End, VKind};
use super::graph::Graph;
use super::perms::inversion_parity;
use crate::bv::BVBasisElem;
use crate::linalg::{ComplexLabel, Side};
use crate::psi::Monomial;
use crate::qbv::{compose2_basis, compose3_basis, diff_basis, tau_sign, QBasisElem};
use crate::{Error, Label, Rational, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truncation {
    Koszul,
    VDegree(u32),
}

/// Largest weight of the two complexes for `(g, n)`.
pub fn top_weight(g: u32, n: u32) -> i32 {
    6 * g as i32 - 6 + 2 * n as i32
}

#[derive(Clone, Debug)]
pub(crate) struct Flat {
    pub items: Vec<QBasisElem>,
    /// Symmetric: both directions are stored.
    pub links: BTreeMap<Label, Label>,
    pub legs: Vec<Label>,
}

fn is_odd(e: &QBasisElem) -> bool {
    match e {
        QBasisElem::Poly(x, _) => x.is_odd(),
        QBasisElem::U(..) => true,
    }
}

/// Sign of moving the items at `front` (in that order) ahead of the rest.
fn front_sign(items: &[QBasisElem], front: &[usize]) -> i32 {
    let order: Vec<usize> = front
        .iter()
        .copied()
        .chain((0..items.len()).filter(|i| !front.contains(i)))
        .filter(|&i| is_odd(&items[i]))
        .collect();
    if inversion_parity(&order) {
        -1
    } else {
        1
    }
}

impl Flat {
    pub fn from_graph(g: &DGraph) -> Flat {
        let mut next = 0u32;
        let mut fresh = || {
            next += 1;
            Label(next)
        };
        let mut slots: Vec<Vec<(Label, bool)>> = vec![Vec::new(); g.kinds.len()];
        let mut exps: Vec<Vec<(Label, u32)>> = vec![Vec::new(); g.kinds.len()];
        let mut ends = Vec::new();
        for e in &g.edges {
            let mut pair = [Label(0); 2];
            for (k, end) in [e.a, e.b].iter().enumerate() {
                let l = fresh();
                slots[end.v as usize].push((l, end.flag));
                exps[end.v as usize].push((l, end.exp));
                pair[k] = l;
            }
            ends.push(pair);
        }
        let mut legs = Vec::new();
        for l in &g.legs {
            let la = fresh();
            slots[l.end.v as usize].push((la, l.end.flag));
            exps[l.end.v as usize].push((la, l.end.exp));
            legs.push(la);
        }
        let polys: Vec<QBasisElem> = vertex_elems(g, &slots)
            .into_iter()
            .zip(exps)
            .map(|(x, e)| QBasisElem::Poly(x, Monomial::from_pairs(e)))
            .collect();
        let mut items: Vec<QBasisElem> = polys.iter().filter(|p| is_odd(p)).cloned().collect();
        items.extend(polys.iter().filter(|p| !is_odd(p)).cloned());
        let mut links = BTreeMap::new();
        let mut link = |a: Label, b: Label| {
            links.insert(a, b);
            links.insert(b, a);
        };
        for (e, [la, lb]) in g.edges.iter().zip(ends) {
            let EdgeDeco::U(ks) = &e.deco else {
                panic!("BV-side edge in a Q graph")
            };
            let mut cur = la;
            for &k in ks {
                let (p, q) = (fresh(), fresh());
                items.push(QBasisElem::U(k, p, q));
                link(cur, p);
                cur = q;
            }
            link(cur, lb);
        }
        Flat { items, links, legs }
    }

    fn owners(&self) -> HashMap<Label, usize> {
        let mut m = HashMap::new();
        for (i, it) in self.items.iter().enumerate() {
            for l in it.labels() {
                m.insert(l, i);
            }
        }
        m
    }

    pub fn to_graph(&self) -> Result<(DGraph, i32)> {
        let owner = self.owners();
        let leg_at: HashMap<Label, usize> =
            self.legs.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let core: Vec<usize> = (0..self.items.len())
            .filter(|&i| matches!(self.items[i], QBasisElem::Poly(..)))
            .collect();
        let vid: HashMap<usize, u32> = core
            .iter()
            .enumerate()
            .map(|(v, i)| (*i, v as u32))
            .collect();
        let end_of = |l: Label| {
            let i = owner[&l];
            let QBasisElem::Poly(x, m) = &self.items[i] else {
                unreachable!("core items are polynomial")
            };
            let flag = matches!(x, BVBasisElem::E(_, a, b) if *a == l || *b == l);
            End {
                v: vid[&i],
                flag,
                exp: m.exponent(l),
            }
        };
        let mut kinds = Vec::new();
        let mut odd_order = Vec::new();
        for &i in &core {
            let odd = is_odd(&self.items[i]);
            kinds.push(if odd { VKind::E } else { VKind::C });
            if odd {
                odd_order.push(i);
            }
        }
        let mut edges = Vec::new();
        let mut legs: Vec<Option<DLeg>> = vec![None; self.legs.len()];
        let mut seen = BTreeSet::new();
        let mut sign = 1;
        let mut used = core.len();
        for &i in &core {
            for slot in self.items[i].labels() {
                if !seen.insert(slot) {
                    continue;
                }
                let start = end_of(slot);
                if let Some(&leg) = leg_at.get(&slot) {
                    legs[leg] = Some(DLeg { end: start, k: 0 });
                    continue;
                }
                let mut ks = Vec::new();
                let mut cur = slot;
                loop {
                    let other = *self
                        .links
                        .get(&cur)
                        .ok_or_else(|| Error::MalformedComplex(format!("dangling slot {cur}")))?;
                    let o = owner[&other];
                    match &self.items[o] {
                        QBasisElem::Poly(..) => {
                            seen.insert(other);
                            edges.push(DEdge {
                                a: start,
                                b: end_of(other),
                                deco: EdgeDeco::U(ks),
                            });
                            break;
                        }
                        QBasisElem::U(k, p, q) => {
                            odd_order.push(o);
                            used += 1;
                            ks.push(*k);
                            if other != *p {
                                sign *= tau_sign(*k);
                            }
                            cur = if other == *p { *q } else { *p };
                            if leg_at.contains_key(&cur) {
                                return Err(Error::MalformedComplex(
                                    "leg on a bivalent vertex".into(),
                                ));
                            }
                        }
                    }
                }
            }
        }
        if used != self.items.len() {
            return Err(Error::MalformedComplex(
                "expanded graph has unreachable items".into(),
            ));
        }
        let legs = legs
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::MalformedComplex("leg not reached".into()))?;
        if inversion_parity(&odd_order) {
            sign = -sign;
        }
        Ok((DGraph { kinds, edges, legs }, sign))
    }

    fn replaced(&self, front: QBasisElem, drop: &[usize], unlink: &[Label]) -> Flat {
        let mut items = vec![front];
        items.extend(
            self.items
                .iter()
                .enumerate()
                .filter(|(i, _)| !drop.contains(i))
                .map(|(_, e)| e.clone()),
        );
        let mut links = self.links.clone();
        for l in unlink {
            links.remove(l);
        }
        Flat {
            items,
            links,
            legs: self.legs.clone(),
        }
    }

    /// `d_v` on each vertex, `μ_2` along each link between two different
    /// items and `μ_3` on each `u` between two different vertices.
    pub fn differential(&self, parts: Parts) -> Vec<(Flat, i64)> {
        let owner = self.owners();
        let mut out = Vec::new();
        if parts.vertex {
            let mut odd_before = 0;
            for (i, it) in self.items.iter().enumerate() {
                let s: i64 = if odd_before % 2 == 0 { 1 } else { -1 };
                for (y, c) in diff_basis(it) {
                    let mut items = self.items.clone();
                    items[i] = y;
                    out.push((
                        Flat {
                            items,
                            links: self.links.clone(),
                            legs: self.legs.clone(),
                        },
                        s * to_i64(&c),
                    ));
                }
                if is_odd(it) {
                    odd_before += 1;
                }
            }
        }
        for (&s, &t) in self.links.range(..) {
            if s > t {
                continue;
            }
            let (o1, o2) = (owner[&s], owner[&t]);
            let (x, y) = (&self.items[o1], &self.items[o2]);
            let wanted = match (x, y) {
                (QBasisElem::Poly(..), QBasisElem::Poly(..)) => parts.contract,
                _ => parts.edge,
            };
            if o1 == o2 || !wanted {
                continue;
            }
            let sign = front_sign(&self.items, &[o1, o2]) as i64;
            for (z, c) in compose2_basis(x, s, y, t) {
                out.push((self.replaced(z, &[o1, o2], &[s, t]), sign * to_i64(&c)));
            }
        }
        if parts.ternary {
            for (j, it) in self.items.iter().enumerate() {
                let QBasisElem::U(_, p, q) = it else { continue };
                let (a, c) = (self.links[p], self.links[q]);
                let (o1, o2) = (owner[&a], owner[&c]);
                if o1 == o2 {
                    continue;
                }
                let sign = front_sign(&self.items, &[o1, j, o2]) as i64;
                for (z, k) in compose3_basis(&self.items[o1], a, it, *p, &self.items[o2], c) {
                    out.push((
                        self.replaced(z, &[o1, j, o2], &[a, *p, *q, c]),
                        sign * to_i64(&k),
                    ));
                }
            }
        }
        out
    }
}

/// Which components of the differential to apply.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Parts {
    pub vertex: bool,
    /// `μ_2` between two vertices.
    pub contract: bool,
    /// `μ_2` involving a `u`.
    pub edge: bool,
    pub ternary: bool,
}

pub(super) const ALL: Parts = Parts {
    vertex: true,
    contract: true,
    edge: true,
    ternary: true,
};

pub(super) fn to_i64(c: &num_bigint::BigInt) -> i64 {
    i64::try_from(c).expect("coefficient fits in i64")
}

pub(crate) fn fold(terms: Vec<(Flat, i64)>) -> Result<Combination> {
    let mut out = Combination::new();
    for (f, c) in terms {
        let (h, s1) = f.to_graph()?;
        let (h, s2) = canonicalize(&h);
        if s1 * s2 != 0 {
            *out.entry(h).or_insert_with(Rational::zero) +=
                Rational::from_integer((c * (s1 * s2) as i64).into());
        }
    }
    out.retain(|_, c| !c.is_zero());
    Ok(out)
}

/// The differential on a core graph, as canonical graphs with coefficients.
pub fn q_differential_of(g: &DGraph) -> Result<Combination> {
    fold(Flat::from_graph(g).differential(ALL))
}

/// Ordered compositions of `total` into positive parts.
fn compositions(total: u32) -> Vec<Vec<u32>> {
    if total == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=total {
        for mut rest in compositions(total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Ways to write `total` as an ordered sum of `parts` non-negative numbers.
fn spreads(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in spreads(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All choices of `E` vertices (with their flagged pairs) on `g`.
fn flag_choices(g: &DGraph, max_e: usize) -> Vec<(DGraph, usize)> {
    let mut out = vec![(g.clone(), 0usize)];
    for v in 0..g.kinds.len() as u32 {
        let mut next = Vec::new();
        for (h, e) in out {
            if e < max_e {
                next.extend(e_choices(&h, v).into_iter().map(|x| (x, e + 1)));
            }
            next.push((h, e));
        }
        out = next;
    }
    out
}

fn all_halves(g: &DGraph) -> Vec<Half> {
    (0..g.kinds.len() as u32)
        .flat_map(|v| halves_at(g, v))
        .collect()
}

/// Canonical basis of weight `w_prime` within the chosen subcomplex.
pub fn afeyn_qbv_basis(
    graphs: &[Graph],
    g: u32,
    n: u32,
    w_prime: i32,
    trunc: Truncation,
) -> Result<Vec<DGraph>> {
    let w = top_weight(g, n) - w_prime;
    if w != 0 && w != 2 {
        return Err(Error::InvalidInput(format!(
            "weight {w_prime} is outside the truncation range {{{}, {}}}",
            top_weight(g, n),
            top_weight(g, n) - 2
        )));
    }
    let mut set = BTreeSet::new();
    for gr in graphs {
        let mut plain = gr.plain();
        for e in &mut plain.edges {
            e.deco = EdgeDeco::U(Vec::new());
        }
        let shift: i32 = (0..plain.kinds.len() as u32)
            .map(|v| 2 * plain.valence(v) as i32 - 6)
            .sum();
        let n_edges = plain.edges.len() as i32;
        let max_e = match trunc {
            Truncation::Koszul => (w / 2) as usize,
            Truncation::VDegree(_) => plain.kinds.len(),
        };
        let max_v = match trunc {
            Truncation::Koszul => (w / 2) as u32,
            Truncation::VDegree(nv) => nv,
        };
        for (flagged, n_e) in flag_choices(&plain, max_e) {
            let halves = all_halves(&flagged);
            for m in 0..=max_v {
                // 2U = w' − shift + 2#E + 2m
                let twice_u = w_prime - shift + 2 * n_e as i32 + 2 * m as i32;
                if twice_u < 0 || twice_u % 2 != 0 {
                    continue;
                }
                let u_total = (twice_u / 2) as u32;
                if trunc == Truncation::Koszul && u_total as i32 > n_edges {
                    continue;
                }
                for exps in spreads(m, halves.len()) {
                    let mut h = flagged.clone();
                    for (half, x) in halves.iter().zip(&exps) {
                        end_mut(&mut h, *half).exp = *x;
                    }
                    match trunc {
                        Truncation::Koszul => {
                            for chosen in subsets(plain.edges.len(), u_total as usize) {
                                let mut k = h.clone();
                                for i in chosen {
                                    k.edges[i].deco = EdgeDeco::U(vec![1]);
                                }
                                insert_canonical(&mut set, k);
                            }
                        }
                        Truncation::VDegree(_) => {
                            for per_edge in spreads(u_total, plain.edges.len()) {
                                let options: Vec<Vec<Vec<u32>>> =
                                    per_edge.iter().map(|t| compositions(*t)).collect();
                                for pick in product(&options) {
                                    let mut k = h.clone();
                                    for (e, ks) in k.edges.iter_mut().zip(pick) {
                                        e.deco = EdgeDeco::U(ks);
                                    }
                                    insert_canonical(&mut set, k);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(set.into_iter().collect())
}

fn insert_canonical(set: &mut BTreeSet<DGraph>, g: DGraph) {
    let (c, s) = canonicalize(&g);
    if s != 0 {
        set.insert(c);
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn product<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out = vec![Vec::new()];
    for opts in options {
        out = out
            .into_iter()
            .flat_map(|p: Vec<T>| {
                opts.iter().map(move |o| {
                    let mut q = p.clone();
                    q.push(o.clone());
                    q
                })
            })
            .collect();
    }
    out
}

/// `gr_{W′}` of the amputated Feynman transform of `QBV` in loop order `g`
/// with `n` legs, restricted to the Koszul subcomplex.
pub fn build_afeyn_qbv(g: u32, n: u32, w_prime: i32) -> Result<GraphComplex> {
    build_afeyn_qbv_with(g, n, w_prime, Truncation::Koszul)
}

pub fn build_afeyn_qbv_with(
    g: u32,
    n: u32,
    w_prime: i32,
    trunc: Truncation,
) -> Result<GraphComplex> {
    let graphs = super::cache::graphs(g, n)?;
    let basis = afeyn_qbv_basis(&graphs, g, n, w_prime, trunc)?;
    let label = ComplexLabel {
        g,
        n,
        weight: w_prime,
        side: Side::AfeynQbv,
    };
    assemble(
        label,
        basis,
        DGraph::q_degree,
        DGraph::q_weight,
        q_differential_of,
    )
}
