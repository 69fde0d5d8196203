//! Decorated graphs in a normal form shared by both complexes, and their
//! canonical forms with orientation signs.
//!
//! A graph is a core of at least trivalent vertices. Each vertex carries
//! `c` or an `E` symbol; the two slots of an `E` are marked by flags on
//! the half-edges. Edges carry a string of `Δ`s (the `BV` side) or of
//! powers of `u` (the Q side); half-edges carry the exponent of their
//! variable `v` (zero on the `BV` side). Legs carry a `Δ`-string length.
//!
//! Orientation: the odd items of a graph are listed as the odd vertices in
//! vertex order, followed by one block per edge, read from `a` to `b`.
//! On the `BV` side an edge block is `e Δ e … Δ e` (`2k + 1` odd items),
//! on the Q side it is the list of `u`-factors. Leg blocks are even.

use std::cmp::Ordering;
use std::fmt;

use super::perms::{inversion_parity, permutations};
use crate::qbv::tau_sign;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VKind {
    C,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct End {
    pub v: u32,
    /// Slot of the vertex's `E` symbol.
    pub flag: bool,
    /// Exponent of the variable on this half-edge.
    pub exp: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeDeco {
    /// `k` copies of `Δ` on bivalent vertices.
    Delta(u32),
    /// Powers of `u` on bivalent vertices, listed from end `a` to end `b`.
    U(Vec<u32>),
}

impl EdgeDeco {
    /// Parity of the edge block.
    pub fn odd(&self) -> bool {
        match self {
            EdgeDeco::Delta(_) => true,
            EdgeDeco::U(ks) => ks.len() % 2 == 1,
        }
    }

    pub fn reversed(&self) -> EdgeDeco {
        match self {
            EdgeDeco::Delta(k) => EdgeDeco::Delta(*k),
            EdgeDeco::U(ks) => EdgeDeco::U(ks.iter().rev().copied().collect()),
        }
    }

    /// Sign of reading the block backwards.
    pub fn flip_sign(&self) -> i32 {
        let (m, tau) = match self {
            EdgeDeco::Delta(k) => (2 * *k as usize + 1, 1),
            EdgeDeco::U(ks) => (ks.len(), ks.iter().map(|k| tau_sign(*k)).product()),
        };
        let rev = if (m * m.saturating_sub(1) / 2) % 2 == 0 {
            1
        } else {
            -1
        };
        rev * tau
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DEdge {
    pub a: End,
    pub b: End,
    pub deco: EdgeDeco,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DLeg {
    pub end: End,
    pub k: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DGraph {
    pub kinds: Vec<VKind>,
    pub edges: Vec<DEdge>,
    /// `legs[i]` is leg `i + 1`.
    pub legs: Vec<DLeg>,
}

impl DGraph {
    pub fn vertex_count(&self) -> usize {
        self.kinds.len()
    }

    /// All half-edge ends at vertex `v`.
    pub fn ends_at(&self, v: u32) -> impl Iterator<Item = &End> {
        self.edges
            .iter()
            .flat_map(|e| [&e.a, &e.b])
            .chain(self.legs.iter().map(|l| &l.end))
            .filter(move |e| e.v == v)
    }

    pub fn valence(&self, v: u32) -> usize {
        self.ends_at(v).count()
    }

    pub fn odd_vertex(&self, v: usize) -> bool {
        self.kinds[v] == VKind::E
    }

    pub fn is_well_formed(&self) -> bool {
        (0..self.kinds.len() as u32).all(|v| {
            let flags = self.ends_at(v).filter(|e| e.flag).count();
            let want = if self.kinds[v as usize] == VKind::E {
                2
            } else {
                0
            };
            flags == want && self.valence(v) >= 3
        })
    }

    /// Total exponent of `v` over all half-edges.
    pub fn v_degree(&self) -> u32 {
        self.edges.iter().map(|e| e.a.exp + e.b.exp).sum::<u32>()
            + self.legs.iter().map(|l| l.end.exp).sum::<u32>()
    }

    pub fn u_power(&self) -> u32 {
        self.edges
            .iter()
            .map(|e| match &e.deco {
                EdgeDeco::U(ks) => ks.iter().sum(),
                EdgeDeco::Delta(_) => 0,
            })
            .sum()
    }

    fn e_count(&self) -> i32 {
        self.kinds.iter().filter(|k| **k == VKind::E).count() as i32
    }

    /// Degree in the `BV`-side complex.
    pub fn bv_degree(&self) -> i32 {
        let edges: i32 = self
            .edges
            .iter()
            .map(|e| match e.deco {
                EdgeDeco::Delta(k) => -(2 * k as i32 + 1),
                EdgeDeco::U(_) => panic!("Q-side edge in a BV graph"),
            })
            .sum();
        let legs: i32 = self.legs.iter().map(|l| -2 * l.k as i32).sum();
        -self.e_count() + edges + legs
    }

    pub fn bv_weight(&self) -> i32 {
        let deltas: u32 = self
            .edges
            .iter()
            .map(|e| {
                if let EdgeDeco::Delta(k) = e.deco {
                    k
                } else {
                    0
                }
            })
            .sum::<u32>()
            + self.legs.iter().map(|l| l.k).sum::<u32>();
        2 * self.e_count() + 2 * deltas as i32
    }

    fn shift_sum(&self) -> i32 {
        (0..self.kinds.len() as u32)
            .map(|v| 2 * self.valence(v) as i32 - 6)
            .sum()
    }

    /// Degree in the Q-side complex, before the global shift.
    pub fn q_degree(&self) -> i32 {
        let us: i32 = self
            .edges
            .iter()
            .map(|e| match &e.deco {
                EdgeDeco::U(ks) => ks.iter().map(|k| 2 * *k as i32 - 1).sum::<i32>(),
                EdgeDeco::Delta(_) => panic!("BV-side edge in a Q graph"),
            })
            .sum();
        self.shift_sum() - self.e_count() + us - 2 * self.v_degree() as i32
    }

    pub fn q_weight(&self) -> i32 {
        self.shift_sum() - 2 * self.e_count() + 2 * self.u_power() as i32
            - 2 * self.v_degree() as i32
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)?;
        if self.flag {
            write!(f, "*")?;
        }
        if self.exp > 0 {
            write!(f, "^{}", self.exp)?;
        }
        Ok(())
    }
}

/// Compact one-line form, e.g. `[c,E] 0*-1:D1 0-0*:u1.2 | 1^2`.
impl fmt::Display for DGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kinds: Vec<&str> = self
            .kinds
            .iter()
            .map(|k| if *k == VKind::C { "c" } else { "E" })
            .collect();
        write!(f, "[{}]", kinds.join(","))?;
        for e in &self.edges {
            write!(f, " {}-{}:", e.a, e.b)?;
            match &e.deco {
                EdgeDeco::Delta(k) => write!(f, "D{k}")?,
                EdgeDeco::U(ks) => {
                    let ks: Vec<String> = ks.iter().map(u32::to_string).collect();
                    write!(f, "u{}", ks.join("."))?
                }
            }
        }
        write!(f, " |")?;
        for l in &self.legs {
            write!(f, " {}", l.end)?;
            if l.k > 0 {
                write!(f, ":D{}", l.k)?;
            }
        }
        Ok(())
    }
}

fn map_end(e: &End, perm: &[u32]) -> End {
    End {
        v: perm[e.v as usize],
        ..*e
    }
}

/// Relabels vertices by `perm` (old → new), orients and sorts edges.
/// Returns the relabeled graph and the orientation sign, `0` if the graph
/// has an orientation-reversing symmetry fixing its vertices.
fn relabel(g: &DGraph, perm: &[u32]) -> (DGraph, i32) {
    let mut kinds = vec![VKind::C; g.kinds.len()];
    for (v, k) in g.kinds.iter().enumerate() {
        kinds[perm[v] as usize] = *k;
    }
    let odd_new: Vec<u32> = (0..g.kinds.len())
        .filter(|v| g.odd_vertex(*v))
        .map(|v| perm[v])
        .collect();
    let mut sign = if inversion_parity(&odd_new) { -1 } else { 1 };
    let mut edges: Vec<(DEdge, usize)> = Vec::with_capacity(g.edges.len());
    for (i, e) in g.edges.iter().enumerate() {
        let fwd = DEdge {
            a: map_end(&e.a, perm),
            b: map_end(&e.b, perm),
            deco: e.deco.clone(),
        };
        let bwd = DEdge {
            a: fwd.b,
            b: fwd.a,
            deco: e.deco.reversed(),
        };
        match bwd.cmp(&fwd) {
            Ordering::Less => {
                sign *= e.deco.flip_sign();
                edges.push((bwd, i));
            }
            Ordering::Equal => {
                if e.deco.flip_sign() < 0 {
                    sign = 0;
                }
                edges.push((fwd, i));
            }
            Ordering::Greater => edges.push((fwd, i)),
        }
    }
    edges.sort();
    if edges
        .windows(2)
        .any(|w| w[0].0 == w[1].0 && w[0].0.deco.odd())
    {
        sign = 0;
    }
    let odd_order: Vec<usize> = edges
        .iter()
        .filter(|(e, _)| e.deco.odd())
        .map(|(_, i)| *i)
        .collect();
    if inversion_parity(&odd_order) {
        sign = -sign;
    }
    let legs = g
        .legs
        .iter()
        .map(|l| DLeg {
            end: map_end(&l.end, perm),
            k: l.k,
        })
        .collect();
    (
        DGraph {
            kinds,
            edges: edges.into_iter().map(|(e, _)| e).collect(),
            legs,
        },
        sign,
    )
}

/// Canonical representative and the sign relating the input orientation
/// to it; the sign is `0` when the graph equals minus itself.
pub fn canonicalize(g: &DGraph) -> (DGraph, i32) {
    let n = g.kinds.len();
    let mut best: Option<(DGraph, i32)> = None;
    let mut vanishes = false;
    for perm in permutations(n) {
        let (cand, s) = relabel(g, &perm);
        if s == 0 {
            // the vanishing is intrinsic; any relabeling gives a representative
            vanishes = true;
        }
        match &best {
            None => best = Some((cand, s)),
            Some((b, bs)) => match cand.cmp(b) {
                Ordering::Less => best = Some((cand, s)),
                Ordering::Equal if s != *bs => vanishes = true,
                _ => {}
            },
        }
    }
    let (g, s) = best.expect("at least one permutation");
    (g, if vanishes { 0 } else { s })
}
