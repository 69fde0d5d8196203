//! Exhaustive check of the homotopy-operad relations on linear trees of
//! one to five vertices.
//!
//! Tuples are taken up to permutations of the external slots of each
//! vertex; the relations are equivariant, so one decoration per orbit is
//! enough.

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{bv_symbols, monomials_up_to, q_compose2, q_compose3, q_diff, QElement};
use crate::bv::BVBasisElem;
use crate::psi::Monomial;
use crate::{Label, Result};

fn sgn(e: &QElement) -> i64 {
    if e.degree().unwrap_or(0) % 2 == 0 {
        1
    } else {
        -1
    }
}

fn plus(acc: &mut QElement, s: i64, t: &QElement) -> Result<()> {
    acc.axpy(&crate::linalg::int(s), t)
}

/// Left-hand side minus right-hand side of the relation attached to the
/// linear tree with vertices `chain`, where `glue[i]` joins a slot of
/// `chain[i]` to a slot of `chain[i + 1]`. Zero iff the relation holds.
pub fn relation_residual(chain: &[QElement], glue: &[(Label, Label)]) -> Result<QElement> {
    let refs: Vec<&QElement> = chain.iter().collect();
    residual(&refs, glue)
}

fn residual(chain: &[&QElement], glue: &[(Label, Label)]) -> Result<QElement> {
    assert_eq!(glue.len() + 1, chain.len());
    let mut r = QElement::zero(Default::default());
    match *chain {
        [x] => {
            plus(&mut r, 1, &q_diff(&q_diff(x)))?;
        }
        [x, y] => {
            let (a, b) = glue[0];
            plus(&mut r, 1, &q_diff(&q_compose2(x, a, y, b)?))?;
            plus(&mut r, 1, &q_compose2(&q_diff(x), a, y, b)?)?;
            plus(&mut r, sgn(x), &q_compose2(x, a, &q_diff(y), b)?)?;
        }
        [x, y, z] => {
            let ((a, b1), (b2, c)) = (glue[0], glue[1]);
            plus(
                &mut r,
                -sgn(x),
                &q_compose2(x, a, &q_compose2(y, b2, z, c)?, b1)?,
            )?;
            plus(
                &mut r,
                -1,
                &q_compose2(&q_compose2(x, a, y, b1)?, b2, z, c)?,
            )?;
            plus(&mut r, -1, &q_diff(&q_compose3(x, a, y, b1, b2, z, c)?))?;
            plus(&mut r, -1, &q_compose3(&q_diff(x), a, y, b1, b2, z, c)?)?;
            plus(
                &mut r,
                -sgn(x),
                &q_compose3(x, a, &q_diff(y), b1, b2, z, c)?,
            )?;
            plus(
                &mut r,
                -sgn(x) * sgn(y),
                &q_compose3(x, a, y, b1, b2, &q_diff(z), c)?,
            )?;
        }
        [x, y, z, w] => {
            let ((a, b1), (b2, c1), (c2, d)) = (glue[0], glue[1], glue[2]);
            plus(
                &mut r,
                sgn(x),
                &q_compose2(x, a, &q_compose3(y, b2, z, c1, c2, w, d)?, b1)?,
            )?;
            plus(
                &mut r,
                1,
                &q_compose3(&q_compose2(x, a, y, b1)?, b2, z, c1, c2, w, d)?,
            )?;
            plus(
                &mut r,
                sgn(x),
                &q_compose3(x, a, &q_compose2(y, b2, z, c1)?, b1, c2, w, d)?,
            )?;
            plus(
                &mut r,
                sgn(x) * sgn(y),
                &q_compose3(x, a, y, b1, b2, &q_compose2(z, c2, w, d)?, c1)?,
            )?;
            plus(
                &mut r,
                1,
                &q_compose2(&q_compose3(x, a, y, b1, b2, z, c1)?, c2, w, d)?,
            )?;
        }
        [x, y, z, v, w] => {
            let ((a, b1), (b2, c1), (c2, d1), (d2, e)) = (glue[0], glue[1], glue[2], glue[3]);
            plus(
                &mut r,
                sgn(x) * sgn(y),
                &q_compose3(x, a, y, b1, b2, &q_compose3(z, c2, v, d1, d2, w, e)?, c1)?,
            )?;
            plus(
                &mut r,
                sgn(x),
                &q_compose3(x, a, &q_compose3(y, b2, z, c1, c2, v, d1)?, b1, d2, w, e)?,
            )?;
            plus(
                &mut r,
                1,
                &q_compose3(&q_compose3(x, a, y, b1, b2, z, c1)?, c2, v, d1, d2, w, e)?,
            )?;
        }
        _ => panic!("relations exist for trees with 1 to 5 vertices"),
    }
    Ok(r)
}

/// Shape of an intermediate result: a polynomial part, a power of `u`,
/// or an expression that vanishes whatever the decorations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sym {
    P,
    U,
    Zero,
}

fn m2(a: Sym, b: Sym) -> Sym {
    match (a, b) {
        (Sym::Zero, _) | (_, Sym::Zero) => Sym::Zero,
        (Sym::U, Sym::U) => Sym::U,
        _ => Sym::P,
    }
}

fn m3(a: Sym, b: Sym, c: Sym) -> Sym {
    if (a, b, c) == (Sym::P, Sym::U, Sym::P) {
        Sym::P
    } else {
        Sym::Zero
    }
}

fn d(a: Sym) -> Sym {
    if a == Sym::P {
        Sym::P
    } else {
        Sym::Zero
    }
}

/// Whether some term of the relation can be nonzero for these kinds of
/// vertices. The terms mirror `residual` one for one.
fn structurally_live(kinds: &[Sym]) -> bool {
    let terms: Vec<Sym> = match *kinds {
        [x] => vec![d(d(x))],
        [x, y] => vec![d(m2(x, y)), m2(d(x), y), m2(x, d(y))],
        [x, y, z] => vec![
            m2(x, m2(y, z)),
            m2(m2(x, y), z),
            d(m3(x, y, z)),
            m3(d(x), y, z),
            m3(x, d(y), z),
            m3(x, y, d(z)),
        ],
        [x, y, z, w] => vec![
            m2(x, m3(y, z, w)),
            m3(m2(x, y), z, w),
            m3(x, m2(y, z), w),
            m3(x, y, m2(z, w)),
            m2(m3(x, y, z), w),
        ],
        [x, y, z, v, w] => vec![
            m3(x, y, m3(z, v, w)),
            m3(x, m3(y, z, v), w),
            m3(m3(x, y, z), v, w),
        ],
        _ => unreachable!(),
    };
    terms.iter().any(|t| *t != Sym::Zero)
}

/// Number of tuples drawn from `options` with total v-degree ≤ `budget`.
fn count_tuples(options: &[Vec<Item>], budget: u32) -> u64 {
    let mut dist = vec![0u64; budget as usize + 1];
    dist[0] = 1;
    for opts in options {
        let mut next = vec![0u64; dist.len()];
        for (used, n) in dist.iter().enumerate() {
            for it in opts {
                let t = used + it.vdeg as usize;
                if t < next.len() {
                    next[t] += n;
                }
            }
        }
        dist = next;
    }
    dist.iter().sum()
}

/// One candidate vertex of a chain: the element and its glued slots.
#[derive(Clone, Debug)]
struct Item {
    elem: QElement,
    left: Option<Label>,
    right: Option<Label>,
    vdeg: u32,
}

/// Poly decorations on `labels`, one per orbit of the symmetric group on
/// the external slots: the per-slot signature (E-index flag, exponent) is
/// non-increasing along the external labels.
fn poly_items(labels: &[Label], glued: &[Label], max_vdeg: u32) -> Vec<(BVBasisElem, Monomial)> {
    let ext: Vec<Label> = labels
        .iter()
        .copied()
        .filter(|l| !glued.contains(l))
        .collect();
    let mut out = Vec::new();
    for x in bv_symbols(labels) {
        let flag = |l: Label| matches!(&x, BVBasisElem::E(_, i, j) if *i == l || *j == l);
        for m in monomials_up_to(labels, max_vdeg) {
            let sig: Vec<(bool, u32)> = ext.iter().map(|l| (flag(*l), m.exponent(*l))).collect();
            if sig.windows(2).all(|w| w[0] >= w[1]) {
                out.push((x.clone(), m));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Poly(usize),
    U,
}

fn items_for(pos: usize, len: usize, kind: Kind, max_vdeg: u32, max_upow: u32) -> Vec<Item> {
    let base = 16 * pos as u32;
    let has_left = pos > 0;
    let has_right = pos + 1 < len;
    match kind {
        Kind::Poly(r) => {
            let labels: Vec<Label> = (1..=r as u32).map(|k| Label(base + k)).collect();
            let left = has_left.then_some(labels[0]);
            let right = has_right.then(|| if has_left { labels[1] } else { labels[0] });
            let glued: Vec<Label> = left.iter().chain(right.iter()).copied().collect();
            poly_items(&labels, &glued, max_vdeg)
                .into_iter()
                .map(|(x, m)| {
                    let vdeg = m.degree();
                    Item {
                        elem: QElement::poly(x, m).expect("valid"),
                        left,
                        right,
                        vdeg,
                    }
                })
                .collect()
        }
        Kind::U => {
            let (p, q) = (Label(base + 1), Label(base + 2));
            let mut out = Vec::new();
            for k in 1..=max_upow {
                let elem = QElement::u(k, p, q).expect("distinct");
                for (s, t) in [(p, q), (q, p)] {
                    let (left, right) = match (has_left, has_right) {
                        (true, true) => (Some(s), Some(t)),
                        (true, false) => (Some(s), None),
                        (false, true) => (None, Some(s)),
                        (false, false) if s == p => (None, None),
                        (false, false) => continue,
                    };
                    out.push(Item {
                        elem: elem.clone(),
                        left,
                        right,
                        vdeg: 0,
                    });
                }
            }
            out
        }
    }
}

/// All kind patterns for a chain of `len` vertices whose tree has at most
/// `max_arity` external legs.
fn shapes(len: usize, max_arity: usize) -> Vec<Vec<Kind>> {
    fn rec(len: usize, budget: isize, cur: &mut Vec<Kind>, out: &mut Vec<Vec<Kind>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let left_after = (len - cur.len() - 1) as isize;
        // every remaining vertex needs at least two slots
        if budget - 2 >= 2 * left_after {
            cur.push(Kind::U);
            rec(len, budget - 2, cur, out);
            cur.pop();
        }
        let mut r = 3;
        while budget - r as isize >= 2 * left_after {
            cur.push(Kind::Poly(r));
            rec(len, budget - r as isize, cur, out);
            cur.pop();
            r += 1;
        }
    }
    let mut out = Vec::new();
    let budget = max_arity as isize + 2 * (len as isize - 1);
    rec(len, budget, &mut Vec::new(), &mut out);
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationStats {
    pub arity: usize,
    pub tuples: u64,
    /// Tuples evaluated term by term; the rest vanish structurally.
    pub evaluated: u64,
    pub failures: u64,
    pub seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationFailure {
    pub arity: usize,
    pub tuple: Vec<String>,
    pub glue: Vec<(String, String)>,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationReport {
    pub stats: Vec<RelationStats>,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.stats.iter().all(|s| s.failures == 0)
    }
}

const MAX_REPORTED: usize = 20;

#[derive(Default)]
struct Tally {
    tuples: u64,
    failures: Vec<RelationFailure>,
    failed: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.tuples += other.tuples;
        self.failed += other.failed;
        self.failures.extend(other.failures);
        self.failures.truncate(MAX_REPORTED);
        self
    }
}

fn walk<'a>(options: &'a [Vec<Item>], budget: u32, cur: &mut Vec<&'a Item>, tally: &mut Tally) {
    let pos = cur.len();
    if pos == options.len() {
        check(cur, tally);
        return;
    }
    for it in &options[pos] {
        if it.vdeg <= budget {
            cur.push(it);
            walk(options, budget - it.vdeg, cur, tally);
            cur.pop();
        }
    }
}

fn check(chain: &[&Item], tally: &mut Tally) {
    let elems: Vec<&QElement> = chain.iter().map(|i| &i.elem).collect();
    let glue: Vec<(Label, Label)> = chain
        .windows(2)
        .map(|w| (w[0].right.expect("glued"), w[1].left.expect("glued")))
        .collect();
    tally.tuples += 1;
    let res = residual(&elems, &glue).expect("labels are disjoint by construction");
    if !res.is_zero() {
        tally.failed += 1;
        if tally.failures.len() < MAX_REPORTED {
            tally.failures.push(RelationFailure {
                arity: chain.len(),
                tuple: elems.iter().map(ToString::to_string).collect(),
                glue: glue
                    .iter()
                    .map(|(a, b)| (a.to_string(), b.to_string()))
                    .collect(),
                residual: res.to_string(),
            });
        }
    }
}

/// Checks every relation arity from 1 to 5 on all tuples of basis elements
/// of a linear tree with at most `max_arity` external legs, total v-degree
/// at most `max_vdeg` and u-powers `1..=max_upow`.
pub fn verify_homotopy_relations(max_arity: usize, max_vdeg: u32, max_upow: u32) -> RelationReport {
    let mut stats = Vec::new();
    let mut failures = Vec::new();
    for len in 1..=5usize {
        let start = Instant::now();
        let mut skipped = 0u64;
        let mut live = Vec::new();
        for shape in shapes(len, max_arity) {
            let options: Vec<Vec<Item>> = shape
                .iter()
                .enumerate()
                .map(|(pos, k)| items_for(pos, len, *k, max_vdeg, max_upow))
                .collect();
            let kinds: Vec<Sym> = shape
                .iter()
                .map(|k| if *k == Kind::U { Sym::U } else { Sym::P })
                .collect();
            if structurally_live(&kinds) {
                live.push(options);
            } else {
                skipped += count_tuples(&options, max_vdeg);
            }
        }
        let tally = live
            .par_iter()
            .flat_map_iter(|options: &Vec<Vec<Item>>| {
                options[0].iter().map(move |first| (options, first))
            })
            .map(|(options, first)| {
                let mut t = Tally::default();
                if first.vdeg <= max_vdeg {
                    let mut cur = vec![first];
                    walk(options, max_vdeg - first.vdeg, &mut cur, &mut t);
                }
                t
            })
            .reduce(Tally::default, Tally::merge);
        stats.push(RelationStats {
            arity: len,
            tuples: tally.tuples + skipped,
            evaluated: tally.tuples,
            failures: tally.failed,
            seconds: start.elapsed().as_secs_f64(),
        });
        failures.extend(tally.failures);
    }
    failures.truncate(MAX_REPORTED);
    RelationReport { stats, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes_respect_leg_bound() {
        for len in 1..=5 {
            for s in shapes(len, 8) {
                let total: usize = s
                    .iter()
                    .map(|k| if let Kind::Poly(r) = k { *r } else { 2 })
                    .sum();
                assert!(total + 2 - 2 * len <= 8);
            }
        }
        assert!(shapes(5, 8).contains(&vec![
            Kind::Poly(3),
            Kind::U,
            Kind::Poly(3),
            Kind::U,
            Kind::Poly(3)
        ]));
    }

    #[test]
    fn structural_filter() {
        use Sym::{P, U};
        assert!(structurally_live(&[P, U, P, U, P]));
        assert!(!structurally_live(&[P, P, P, P, P]));
        assert!(!structurally_live(&[U]));
        assert!(structurally_live(&[P, U, U, P]));
        assert!(!structurally_live(&[U, U, U, U]));
    }

    #[test]
    fn counting_matches_walk() {
        let options: Vec<Vec<Item>> = [Kind::Poly(3), Kind::U, Kind::Poly(4)]
            .iter()
            .enumerate()
            .map(|(pos, k)| items_for(pos, 3, *k, 2, 2))
            .collect();
        let mut t = Tally::default();
        walk(&options, 2, &mut Vec::new(), &mut t);
        assert_eq!(t.tuples, count_tuples(&options, 2));
    }

    #[test]
    fn orbit_representatives_cover_c3() {
        let ls = [Label(1), Label(2), Label(3)];
        // no glued slot: C with sorted exponents, E with the pair first
        let items = poly_items(&ls, &[], 1);
        let names: Vec<String> = items.iter().map(|(x, m)| format!("{x} {m}")).collect();
        assert_eq!(names.len(), 5, "{names:?}");
    }
}
