//! The Feynman transform of `gr_{≤2} BV`: core graphs with `c`/`E` vertices
//! and strings of bivalent `Δ` vertices on edges and legs.
//!
//! The differential is computed on an expanded form in which every `Δ` is a
//! vertex and every internal edge an odd item, then folded back into core
//! graphs.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use super::complex::{assemble, Combination, GraphComplex};
use super::dgraph::{canonicalize, DEdge, DGraph, DLeg, EdgeDeco, End, VKind};
use super::graph::Graph;
use super::perms::inversion_parity;
use crate::bv::{compose_basis, BVBasisElem};
use crate::linalg::{ComplexLabel, Side};
use crate::{Error, Label, Rational, Result};

#[derive(Clone, Debug)]
enum Item {
    V(BVBasisElem),
    /// An internal edge joining two slots; odd.
    Edge(Label, Label),
}

impl Item {
    fn odd(&self) -> bool {
        match self {
            Item::V(x) => x.is_odd(),
            Item::Edge(..) => true,
        }
    }
}

#[derive(Clone, Debug)]
struct Flat {
    items: Vec<Item>,
    legs: Vec<Label>,
}

struct Slots {
    next: u32,
}

impl Slots {
    fn fresh(&mut self) -> Label {
        self.next += 1;
        Label(self.next)
    }
}

/// Vertex decorations read off the flags at each vertex.
pub(super) fn vertex_elems(g: &DGraph, slots: &[Vec<(Label, bool)>]) -> Vec<BVBasisElem> {
    g.kinds
        .iter()
        .zip(slots)
        .map(|(k, s)| {
            let labels = s.iter().map(|(l, _)| *l);
            match k {
                VKind::C => BVBasisElem::c(labels).expect("core vertex is trivalent"),
                VKind::E => {
                    let f: Vec<Label> = s.iter().filter(|(_, f)| *f).map(|(l, _)| *l).collect();
                    BVBasisElem::e(labels, f[0], f[1]).expect("two flags on an E vertex")
                }
            }
        })
        .collect()
}

fn delta(a: Label, b: Label) -> BVBasisElem {
    BVBasisElem::delta(a, b).expect("fresh labels differ")
}

impl Flat {
    fn from_graph(g: &DGraph) -> Flat {
        let mut s = Slots { next: 0 };
        let mut slots: Vec<Vec<(Label, bool)>> = vec![Vec::new(); g.kinds.len()];
        let mut ends = Vec::new();
        for e in &g.edges {
            let la = s.fresh();
            slots[e.a.v as usize].push((la, e.a.flag));
            let lb = s.fresh();
            slots[e.b.v as usize].push((lb, e.b.flag));
            ends.push((la, lb));
        }
        let mut leg_slots = Vec::new();
        for l in &g.legs {
            let la = s.fresh();
            slots[l.end.v as usize].push((la, l.end.flag));
            leg_slots.push(la);
        }
        let elems = vertex_elems(g, &slots);
        let mut items: Vec<Item> = elems
            .iter()
            .filter(|x| x.is_odd())
            .cloned()
            .map(Item::V)
            .collect();
        items.extend(elems.iter().filter(|x| !x.is_odd()).cloned().map(Item::V));
        for (e, (la, lb)) in g.edges.iter().zip(ends) {
            let EdgeDeco::Delta(k) = e.deco else {
                panic!("Q-side edge in a BV graph")
            };
            let mut cur = la;
            for _ in 0..k {
                let (p, q) = (s.fresh(), s.fresh());
                items.push(Item::Edge(cur, p));
                items.push(Item::V(delta(p, q)));
                cur = q;
            }
            items.push(Item::Edge(cur, lb));
        }
        let mut legs = Vec::new();
        for (l, ls) in g.legs.iter().zip(leg_slots) {
            let mut cur = ls;
            for _ in 0..l.k {
                let (p, q) = (s.fresh(), s.fresh());
                items.push(Item::Edge(cur, p));
                items.push(Item::V(delta(p, q)));
                cur = q;
            }
            legs.push(cur);
        }
        Flat { items, legs }
    }

    fn owners(&self) -> HashMap<Label, usize> {
        let mut m = HashMap::new();
        for (i, it) in self.items.iter().enumerate() {
            if let Item::V(x) = it {
                for l in x.labels() {
                    m.insert(l, i);
                }
            }
        }
        m
    }

    /// Folds the expanded form back into a core graph, with the sign that
    /// reorders the odd items into the standard order.
    fn to_graph(&self) -> Result<(DGraph, i32)> {
        let owner = self.owners();
        let mut edge_at: HashMap<Label, (usize, Label)> = HashMap::new();
        for (i, it) in self.items.iter().enumerate() {
            if let Item::Edge(s, t) = it {
                edge_at.insert(*s, (i, *t));
                edge_at.insert(*t, (i, *s));
            }
        }
        let leg_at: HashMap<Label, usize> =
            self.legs.iter().enumerate().map(|(i, l)| (*l, i)).collect();
        let core: Vec<usize> = (0..self.items.len())
            .filter(|&i| matches!(&self.items[i], Item::V(x) if x.arity() >= 3))
            .collect();
        let vid: HashMap<usize, u32> = core
            .iter()
            .enumerate()
            .map(|(v, i)| (*i, v as u32))
            .collect();
        let elem = |i: usize| match &self.items[i] {
            Item::V(x) => x,
            Item::Edge(..) => unreachable!("owners are vertices"),
        };
        let flagged =
            |x: &BVBasisElem, l: Label| matches!(x, BVBasisElem::E(_, i, j) if *i == l || *j == l);
        let end_of = |l: Label| {
            let i = owner[&l];
            End {
                v: vid[&i],
                flag: flagged(elem(i), l),
                exp: 0,
            }
        };

        let mut kinds = Vec::new();
        let mut odd_order: Vec<usize> = Vec::new();
        for &i in &core {
            let x = elem(i);
            kinds.push(if x.is_odd() { VKind::E } else { VKind::C });
            if x.is_odd() {
                odd_order.push(i);
            }
        }
        let mut edges = Vec::new();
        let mut legs: Vec<Option<DLeg>> = vec![None; self.legs.len()];
        let mut leg_blocks = Vec::new();
        let mut seen: BTreeSet<Label> = BTreeSet::new();
        let mut used = core.len();
        for &i in &core {
            for slot in elem(i).labels() {
                if !seen.insert(slot) {
                    continue;
                }
                let start = end_of(slot);
                if let Some(&leg) = leg_at.get(&slot) {
                    legs[leg] = Some(DLeg { end: start, k: 0 });
                    continue;
                }
                let mut block = Vec::new();
                let mut cur = slot;
                let mut k = 0;
                loop {
                    let &(ei, other) = edge_at
                        .get(&cur)
                        .ok_or_else(|| Error::MalformedComplex(format!("dangling slot {cur}")))?;
                    block.push(ei);
                    let o = owner[&other];
                    if vid.contains_key(&o) {
                        seen.insert(other);
                        edges.push(DEdge {
                            a: start,
                            b: end_of(other),
                            deco: EdgeDeco::Delta(k),
                        });
                        used += block.len();
                        odd_order.extend(block);
                        break;
                    }
                    let BVBasisElem::Delta(p, q) = elem(o) else {
                        return Err(Error::MalformedComplex(
                            "bivalent vertex other than Δ".into(),
                        ));
                    };
                    block.push(o);
                    k += 1;
                    cur = if *p == other { *q } else { *p };
                    if let Some(&leg) = leg_at.get(&cur) {
                        legs[leg] = Some(DLeg { end: start, k });
                        used += block.len();
                        leg_blocks.push(block);
                        break;
                    }
                }
            }
        }
        if used != self.items.len() {
            return Err(Error::MalformedComplex(
                "expanded graph has unreachable items".into(),
            ));
        }
        odd_order.extend(leg_blocks.into_iter().flatten());
        let legs = legs
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::MalformedComplex("leg not reached".into()))?;
        let sign = if inversion_parity(&odd_order) { -1 } else { 1 };
        Ok((DGraph { kinds, edges, legs }, sign))
    }

    /// Contracts each internal edge between two distinct vertices.
    fn differential(&self) -> Result<Vec<(Flat, i64)>> {
        let owner = self.owners();
        let mut out = Vec::new();
        let mut odd_before = 0;
        for (i, it) in self.items.iter().enumerate() {
            if let Item::Edge(s, t) = it {
                let (o1, o2) = (owner[s], owner[t]);
                if o1 != o2 {
                    let (Item::V(x), Item::V(y)) = (&self.items[o1], &self.items[o2]) else {
                        unreachable!("owners are vertices")
                    };
                    let (keep, drop) = if y.is_odd() { (o2, o1) } else { (o1, o2) };
                    let sign = if odd_before % 2 == 0 { 1 } else { -1 };
                    for (z, c) in compose_basis(x, *s, y, *t)? {
                        let items = self
                            .items
                            .iter()
                            .enumerate()
                            .filter(|(j, _)| *j != i && *j != drop)
                            .map(|(j, it)| {
                                if j == keep {
                                    Item::V(z.clone())
                                } else {
                                    it.clone()
                                }
                            })
                            .collect();
                        out.push((
                            Flat {
                                items,
                                legs: self.legs.clone(),
                            },
                            sign * c,
                        ));
                    }
                }
            }
            if it.odd() {
                odd_before += 1;
            }
        }
        Ok(out)
    }
}

/// The differential on a core graph, as canonical graphs with coefficients.
pub fn bv_differential_of(g: &DGraph) -> Result<Combination> {
    let mut out = Combination::new();
    for (f, c) in Flat::from_graph(g).differential()? {
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

/// Ends of the graph grouped by vertex, as (edge index, second end) or leg.
#[derive(Clone, Copy, Debug)]
pub(super) enum Half {
    Edge(usize, bool),
    Leg(usize),
}

pub(super) fn halves_at(g: &DGraph, v: u32) -> Vec<Half> {
    let mut out = Vec::new();
    for (i, e) in g.edges.iter().enumerate() {
        if e.a.v == v {
            out.push(Half::Edge(i, false));
        }
        if e.b.v == v {
            out.push(Half::Edge(i, true));
        }
    }
    out.extend(
        g.legs
            .iter()
            .enumerate()
            .filter(|(_, l)| l.end.v == v)
            .map(|(i, _)| Half::Leg(i)),
    );
    out
}

pub(super) fn end_mut(g: &mut DGraph, h: Half) -> &mut End {
    match h {
        Half::Edge(i, false) => &mut g.edges[i].a,
        Half::Edge(i, true) => &mut g.edges[i].b,
        Half::Leg(i) => &mut g.legs[i].end,
    }
}

/// Marks vertex `v` as `E` with flags on the halves `p`, `q`.
pub(super) fn with_e(g: &DGraph, v: u32, p: Half, q: Half) -> DGraph {
    let mut h = g.clone();
    h.kinds[v as usize] = VKind::E;
    end_mut(&mut h, p).flag = true;
    end_mut(&mut h, q).flag = true;
    h
}

/// Every way to turn vertex `v` of `g` into an `E` vertex.
pub(super) fn e_choices(g: &DGraph, v: u32) -> Vec<DGraph> {
    let hs = halves_at(g, v);
    let mut out = Vec::new();
    for i in 0..hs.len() {
        for j in i + 1..hs.len() {
            out.push(with_e(g, v, hs[i], hs[j]));
        }
    }
    out
}

fn insert_canonical(set: &mut BTreeSet<DGraph>, g: DGraph) {
    let (c, s) = canonicalize(&g);
    if s != 0 {
        set.insert(c);
    }
}

/// Canonical basis of the weight-`w` part over the given core graphs.
pub fn feyn_bv_basis(graphs: &[Graph], w: i32) -> Result<Vec<DGraph>> {
    let mut set = BTreeSet::new();
    for gr in graphs {
        let plain = gr.plain();
        match w {
            0 => insert_canonical(&mut set, plain),
            2 => {
                for v in 0..plain.kinds.len() as u32 {
                    for h in e_choices(&plain, v) {
                        insert_canonical(&mut set, h);
                    }
                }
                for i in 0..plain.edges.len() {
                    let mut h = plain.clone();
                    h.edges[i].deco = EdgeDeco::Delta(1);
                    insert_canonical(&mut set, h);
                }
                for i in 0..plain.legs.len() {
                    let mut h = plain.clone();
                    h.legs[i].k = 1;
                    insert_canonical(&mut set, h);
                }
            }
            _ => {
                return Err(Error::InvalidInput(format!(
                    "weight {w} is outside the truncation range {{0, 2}}"
                )))
            }
        }
    }
    Ok(set.into_iter().collect())
}

/// `gr_W` of the Feynman transform of `BV` in loop order `g` with `n` legs.
pub fn build_feyn_bv(g: u32, n: u32, w: i32) -> Result<GraphComplex> {
    let graphs = super::cache::graphs(g, n)?;
    build_feyn_bv_on(&graphs, g, n, w)
}

pub fn build_feyn_bv_on(graphs: &[Graph], g: u32, n: u32, w: i32) -> Result<GraphComplex> {
    let basis = feyn_bv_basis(graphs, w)?;
    let label = ComplexLabel {
        g,
        n,
        weight: w,
        side: Side::FeynBv,
    };
    assemble(
        label,
        basis,
        DGraph::bv_degree,
        DGraph::bv_weight,
        bv_differential_of,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cohomology_dims, verify_d_squared, RankMode};

    fn dims(c: &GraphComplex) -> Vec<(i32, usize)> {
        c.basis.iter().map(|(d, b)| (*d, b.len())).collect()
    }

    #[test]
    fn tripod_is_a_single_class() {
        let c = build_feyn_bv(0, 3, 0).unwrap();
        assert_eq!(dims(&c), vec![(0, 1)]);
        assert_eq!(
            cohomology_dims(&c.complex, RankMode::Exact).unwrap(),
            [(0, 1)].into()
        );
    }

    #[test]
    fn four_legs_weight_zero() {
        let c = build_feyn_bv(0, 4, 0).unwrap();
        assert_eq!(dims(&c), vec![(-1, 3), (0, 1)]);
        assert!(verify_d_squared(&c.complex));
        // each tree maps to the star with coefficient ±1
        let d = c.complex.differential(-1);
        assert_eq!(d.nnz(), 3);
        assert_eq!(
            cohomology_dims(&c.complex, RankMode::Exact).unwrap(),
            [(-1, 2)].into()
        );
    }

    #[test]
    fn loop_with_one_delta_is_zero_but_flagged_loop_survives() {
        let c = build_feyn_bv(1, 1, 2).unwrap();
        let end = |flag| End { v: 0, flag, exp: 0 };
        let looped = DGraph {
            kinds: vec![VKind::C],
            edges: vec![DEdge {
                a: end(false),
                b: end(false),
                deco: EdgeDeco::Delta(1),
            }],
            legs: vec![DLeg {
                end: end(false),
                k: 0,
            }],
        };
        assert_eq!(canonicalize(&looped).1, 0);
        let flagged = DGraph {
            kinds: vec![VKind::E],
            edges: vec![DEdge {
                a: end(true),
                b: end(true),
                deco: EdgeDeco::Delta(0),
            }],
            legs: vec![DLeg {
                end: end(false),
                k: 0,
            }],
        };
        let (f, s) = canonicalize(&flagged);
        assert_ne!(s, 0);
        assert!(c.index.contains_key(&f));
        assert_eq!(dims(&c), vec![(-3, 1), (-2, 2)]);
    }

    #[test]
    fn differential_squares_to_zero_and_keeps_weight() {
        for (g, n) in [(0, 4), (0, 5), (1, 1), (1, 2), (2, 0)] {
            for w in [0, 2] {
                let c = build_feyn_bv(g, n, w).unwrap();
                assert!(verify_d_squared(&c.complex), "({g},{n}) W={w}");
                for (deg, gs) in &c.basis {
                    for x in gs {
                        assert_eq!(x.bv_degree(), *deg);
                        assert_eq!(x.bv_weight(), w);
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_weights_outside_the_truncation() {
        assert!(build_feyn_bv(0, 4, 4).is_err());
        assert!(build_feyn_bv(0, 2, 0).is_err());
    }
}
