//! The Q-construction on `gr_{≤2} BV`: in arity `r ≥ 3` the space
//! `BV((r))[6−2r] ⊗ ℚ[v_1,…,v_r]`, in arity two `ℚ[u][1]`, with the
//! differential `d_v` and the binary and ternary compositions of a
//! 1-shifted cyclic homotopy operad.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::bv::{compose_basis, insert_delta, BVBasisElem, LabelSet};
use crate::linalg::{factorial, fmt_rational, Rational};
use crate::psi::Monomial;
use crate::{Error, Label, Result};

mod relations;

pub use relations::{
    relation_residual, verify_homotopy_relations, RelationFailure, RelationReport, RelationStats,
};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QBasisElem {
    /// `x ⊗ m` with `x` a `C` or `E` symbol of arity ≥ 3.
    Poly(BVBasisElem, Monomial),
    /// `u^k` on the slots `(first, second)`, stored with `first < second`.
    U(u32, Label, Label),
}

/// Sign of the transposition on `u^k`.
pub fn tau_sign(k: u32) -> i32 {
    if k == 0 || k % 2 == 1 {
        1
    } else {
        -1
    }
}

fn sign_of(odd: bool) -> i32 {
    if odd {
        -1
    } else {
        1
    }
}

impl QBasisElem {
    pub fn poly(x: BVBasisElem, m: Monomial) -> Result<Self> {
        if !matches!(x, BVBasisElem::C(_) | BVBasisElem::E(..)) {
            return Err(Error::InvalidInput(
                "polynomial part needs arity ≥ 3".into(),
            ));
        }
        if let Some(l) = m.labels().find(|l| !x.contains(*l)) {
            return Err(Error::MissingLabel(l.to_string()));
        }
        Ok(QBasisElem::Poly(x, m))
    }

    /// `u^k` with slot 1 = `first`, as a normalized basis element and a sign.
    pub fn u(k: u32, first: Label, second: Label) -> Result<(Self, i32)> {
        if first == second {
            return Err(Error::InvalidInput("u^k needs two distinct labels".into()));
        }
        if first < second {
            Ok((QBasisElem::U(k, first, second), 1))
        } else {
            Ok((QBasisElem::U(k, second, first), tau_sign(k)))
        }
    }

    pub fn labels(&self) -> LabelSet {
        match self {
            QBasisElem::Poly(x, _) => x.labels(),
            QBasisElem::U(_, a, b) => [*a, *b].into_iter().collect(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            QBasisElem::Poly(x, _) => x.arity(),
            QBasisElem::U(..) => 2,
        }
    }
}

pub fn q_degree(e: &QBasisElem) -> i32 {
    match e {
        QBasisElem::Poly(x, m) => x.degree() + 2 * x.arity() as i32 - 6 - 2 * m.degree() as i32,
        QBasisElem::U(k, ..) => 2 * *k as i32 - 1,
    }
}

pub fn q_weight(e: &QBasisElem) -> i32 {
    match e {
        QBasisElem::Poly(x, m) => 2 * x.arity() as i32 - 6 - x.weight() - 2 * m.degree() as i32,
        QBasisElem::U(k, ..) => 2 * *k as i32,
    }
}

impl fmt::Display for QBasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QBasisElem::Poly(x, m) => write!(f, "{x}⊗{m}"),
            QBasisElem::U(k, a, b) => write!(f, "u^{k}({a},{b})"),
        }
    }
}

/// Linear combination of basis elements on one label set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QElement {
    labels: LabelSet,
    terms: BTreeMap<QBasisElem, Rational>,
}

impl QElement {
    pub fn zero(labels: LabelSet) -> Self {
        QElement {
            labels,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(e: QBasisElem) -> Self {
        let mut q = Self::zero(e.labels());
        q.terms.insert(e, Rational::one());
        q
    }

    pub fn poly(x: BVBasisElem, m: Monomial) -> Result<Self> {
        Ok(Self::basis(QBasisElem::poly(x, m)?))
    }

    /// `u^k` with slot 1 = `first`.
    pub fn u(k: u32, first: Label, second: Label) -> Result<Self> {
        let (e, s) = QBasisElem::u(k, first, second)?;
        let mut q = Self::zero(e.labels());
        q.add_term(e, Rational::from_integer(s.into()));
        Ok(q)
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QBasisElem, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &QBasisElem) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, e: QBasisElem, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    /// `self += c · other`; label sets must agree unless `other` is zero.
    pub fn axpy(&mut self, c: &Rational, other: &QElement) -> Result<()> {
        if other.is_zero() || c.is_zero() {
            return Ok(());
        }
        if self.is_zero() && self.labels != other.labels {
            self.labels = other.labels.clone();
        }
        if self.labels != other.labels {
            return Err(Error::InvalidInput(
                "adding elements on different label sets".into(),
            ));
        }
        for (e, v) in other.terms() {
            self.add_term(e.clone(), v * c);
        }
        Ok(())
    }

    pub fn add(&self, other: &QElement) -> Result<QElement> {
        let mut out = self.clone();
        out.axpy(&Rational::one(), other)?;
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> QElement {
        let mut out = Self::zero(self.labels.clone());
        for (e, v) in self.terms() {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    /// Degree if homogeneous.
    pub fn degree(&self) -> Option<i32> {
        homogeneous(self.terms.keys().map(q_degree))
    }

    pub fn weight(&self) -> Option<i32> {
        homogeneous(self.terms.keys().map(q_weight))
    }
}

fn homogeneous(mut it: impl Iterator<Item = i32>) -> Option<i32> {
    let w = it.next()?;
    it.all(|x| x == w).then_some(w)
}

impl fmt::Display for QElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{}*{}", fmt_rational(c), e))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Accumulates basis-level outputs into an element on a fixed label set.
struct Acc(QElement);

impl Acc {
    fn push(&mut self, e: QBasisElem, c: Rational) {
        self.0.add_term(e, c);
    }
}

fn int(v: impl Into<BigInt>) -> Rational {
    Rational::from_integer(v.into())
}

/// `d_v` on a basis element, as (basis, integer coefficient) pairs.
pub(crate) fn diff_basis(e: &QBasisElem) -> Vec<(QBasisElem, BigInt)> {
    let QBasisElem::Poly(x, m) = e else {
        return Vec::new();
    };
    let sign = BigInt::from(sign_of(x.is_odd()));
    let mut out = Vec::new();
    for (j, _) in m.iter() {
        let (c, dm) = m.derivative(j, 1).expect("exponent present");
        for y in insert_delta(x, j) {
            out.push((QBasisElem::Poly(y, dm.clone()), &sign * &c));
        }
    }
    out
}

/// The differential `d_P + d_v`; `d_P` vanishes on `BV`.
pub fn q_diff(e: &QElement) -> QElement {
    let mut acc = Acc(QElement::zero(e.labels.clone()));
    for (b, c) in e.terms() {
        for (y, k) in diff_basis(b) {
            acc.push(y, c * int(k));
        }
    }
    acc.0
}

pub fn q_relabel(e: &QElement, map: &BTreeMap<Label, Label>) -> Result<QElement> {
    let image: LabelSet = e
        .labels
        .iter()
        .map(|l| map.get(l).copied().ok_or(Error::NotBijective))
        .collect::<Result<_>>()?;
    if image.len() != e.labels.len() {
        return Err(Error::NotBijective);
    }
    let f = |l: Label| map[&l];
    let mut out = QElement::zero(image);
    for (b, c) in e.terms() {
        match b {
            QBasisElem::Poly(x, m) => {
                out.add_term(QBasisElem::Poly(x.relabel(&f), m.relabel(f)), c.clone())
            }
            QBasisElem::U(k, p, q) => {
                let (u, s) = QBasisElem::u(*k, f(*p), f(*q))?;
                out.add_term(u, c * int(s));
            }
        }
    }
    Ok(out)
}

fn merged_labels(xl: &LabelSet, a: Label, yl: &LabelSet, b: Label) -> Result<LabelSet> {
    if !xl.contains(&a) {
        return Err(Error::MissingLabel(a.to_string()));
    }
    if !yl.contains(&b) {
        return Err(Error::MissingLabel(b.to_string()));
    }
    let mut out: LabelSet = xl.iter().copied().filter(|l| *l != a).collect();
    for l in yl.iter().filter(|l| **l != b) {
        if !out.insert(*l) {
            return Err(Error::LabelClash(l.to_string()));
        }
    }
    Ok(out)
}

/// Reads `u^k(p, q)` glued at `slot`: the sign that moves the glued slot to
/// the given position (`first = true` for slot 1) and the other label.
fn orient_u(k: u32, p: Label, q: Label, slot: Label, first: bool) -> (i32, Label) {
    let (glued_is_first, other) = if slot == p { (true, q) } else { (false, p) };
    let s = if glued_is_first == first {
        1
    } else {
        tau_sign(k)
    };
    (s, other)
}

/// `x ⊗ ∂^k_{v_a} p`, with slot `a` renamed to `to`.
fn poly_u(
    x: &BVBasisElem,
    m: &Monomial,
    a: Label,
    k: u32,
    to: Label,
) -> Option<(QBasisElem, BigInt)> {
    let (c, dm) = m.derivative(a, k)?;
    let rename = |l: Label| if l == a { to } else { l };
    Some((QBasisElem::Poly(x.relabel(&rename), dm.relabel(rename)), c))
}

/// Binary composition on basis elements.
pub(crate) fn compose2_basis(
    x: &QBasisElem,
    a: Label,
    y: &QBasisElem,
    b: Label,
) -> Vec<(QBasisElem, BigInt)> {
    match (x, y) {
        (QBasisElem::Poly(xb, p), QBasisElem::Poly(yb, q)) => {
            let (Some(p0), Some(q0)) = (p.at_zero(a), q.at_zero(b)) else {
                return Vec::new();
            };
            let m = p0.mul(&q0);
            let sign = sign_of(xb.is_odd());
            let mut out = Vec::new();
            for xd in insert_delta(xb, a) {
                for (z, k) in compose_basis(&xd, a, yb, b).expect("labels checked") {
                    out.push((
                        QBasisElem::Poly(z, m.clone()),
                        BigInt::from(sign as i64 * k),
                    ));
                }
            }
            out
        }
        (QBasisElem::Poly(xb, p), QBasisElem::U(k, s, t)) => {
            let (so, other) = orient_u(*k, *s, *t, b, true);
            let sign = so * sign_of(xb.is_odd());
            poly_u(xb, p, a, *k, other)
                .map(|(e, c)| vec![(e, c * sign)])
                .unwrap_or_default()
        }
        (QBasisElem::U(k, s, t), QBasisElem::Poly(yb, q)) => {
            let (so, other) = orient_u(*k, *s, *t, a, false);
            let sign = so * sign_of(*k % 2 == 0);
            poly_u(yb, q, b, *k, other)
                .map(|(e, c)| vec![(e, c * sign)])
                .unwrap_or_default()
        }
        (QBasisElem::U(m, s1, t1), QBasisElem::U(n, s2, t2)) => {
            let (sx, o1) = orient_u(*m, *s1, *t1, a, false);
            let (sy, o2) = orient_u(*n, *s2, *t2, b, true);
            let (e, su) = QBasisElem::u(m + n, o1, o2).expect("distinct labels");
            vec![(e, BigInt::from(-(sx * sy * su)))]
        }
    }
}

/// Binary composition `μ_{a,b}(x, y)`, of degree +1.
pub fn q_compose2(x: &QElement, a: Label, y: &QElement, b: Label) -> Result<QElement> {
    let labels = merged_labels(&x.labels, a, &y.labels, b)?;
    let mut acc = Acc(QElement::zero(labels));
    for (xb, xc) in x.terms() {
        for (yb, yc) in y.terms() {
            for (e, k) in compose2_basis(xb, a, yb, b) {
                acc.push(e, xc * yc * int(k));
            }
        }
    }
    Ok(acc.0)
}

/// Ternary composition on basis elements; `y` glued to `x` at `b1` and to `z` at `b2`.
pub(crate) fn compose3_basis(
    x: &QBasisElem,
    a: Label,
    y: &QBasisElem,
    b1: Label,
    z: &QBasisElem,
    c: Label,
) -> Vec<(QBasisElem, BigInt)> {
    let (QBasisElem::Poly(xb, p), QBasisElem::U(n, s, t), QBasisElem::Poly(zb, r)) = (x, y, z)
    else {
        return Vec::new();
    };
    let (ea, ec) = (p.exponent(a), r.exponent(c));
    if ea + ec + 1 != *n {
        return Vec::new();
    }
    let (so, _) = orient_u(*n, *s, *t, b1, true);
    let sign = so * sign_of(xb.is_odd()) * sign_of(ec % 2 == 1);
    let coeff = factorial(ea) * factorial(ec) * sign;
    let m = p.without(a).mul(&r.without(c));
    compose_basis(xb, a, zb, c)
        .expect("labels checked")
        .into_iter()
        .map(|(e, k)| (QBasisElem::Poly(e, m.clone()), &coeff * k))
        .collect()
}

/// Ternary composition `μ_{a,b1,b2,c}(x, y, z)`, of degree +1.
pub fn q_compose3(
    x: &QElement,
    a: Label,
    y: &QElement,
    b1: Label,
    b2: Label,
    z: &QElement,
    c: Label,
) -> Result<QElement> {
    if b1 == b2 {
        return Err(Error::InvalidInput("middle slots must differ".into()));
    }
    let left = merged_labels(&x.labels, a, &y.labels, b1)?;
    let labels = merged_labels(&left, b2, &z.labels, c)?;
    let mut acc = Acc(QElement::zero(labels));
    for (xb, xc) in x.terms() {
        for (yb, yc) in y.terms() {
            for (zb, zc) in z.terms() {
                for (e, k) in compose3_basis(xb, a, yb, b1, zb, c) {
                    acc.push(e, xc * yc * zc * int(k));
                }
            }
        }
    }
    Ok(acc.0)
}

/// All `C`/`E` symbols on a label set of size ≥ 3.
pub fn bv_symbols(labels: &[Label]) -> Vec<BVBasisElem> {
    let mut out = vec![BVBasisElem::c(labels.iter().copied()).expect("arity ≥ 3")];
    for (k, i) in labels.iter().enumerate() {
        for j in &labels[k + 1..] {
            out.push(BVBasisElem::e(labels.iter().copied(), *i, *j).expect("arity ≥ 3"));
        }
    }
    out
}

/// All monomials in the given variables of total degree ≤ `max`.
pub fn monomials_up_to(vars: &[Label], max: u32) -> Vec<Monomial> {
    fn rec(vars: &[Label], left: u32, cur: &mut Vec<(Label, u32)>, out: &mut Vec<Monomial>) {
        let Some((&v, rest)) = vars.split_first() else {
            out.push(Monomial::from_pairs(cur.iter().copied()));
            return;
        };
        for e in 0..=left {
            cur.push((v, e));
            rec(rest, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(vars, max, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests;
