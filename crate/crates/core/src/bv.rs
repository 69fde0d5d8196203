//! The cyclic operad `gr_{≤2} BV`: the weight-0 part `Com` spanned by the
//! commutative products `c_A`, the weight-2 part spanned by symbols
//! `E_{ij} = E_{ji}`, and in arity two the unit `1` and the BV operator `Δ`.
//! Everything of weight ≥ 4 is quotiented out.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::linalg::Rational;
use crate::{Error, Label, Result};

pub type LabelSet = BTreeSet<Label>;

/// Basis element of `gr_{≤2}BV((A))`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BVBasisElem {
    /// Unit on a two-element set (stored with sorted labels).
    One(Label, Label),
    /// The BV operator on a two-element set (sorted).
    Delta(Label, Label),
    /// `c_A`, `|A| ≥ 3`.
    C(LabelSet),
    /// `E_{ij}` on `A`, `i < j`.
    E(LabelSet, Label, Label),
}

fn sorted2(a: Label, b: Label) -> (Label, Label) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

impl BVBasisElem {
    pub fn one(a: Label, b: Label) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidInput("unit needs two distinct labels".into()));
        }
        let (a, b) = sorted2(a, b);
        Ok(BVBasisElem::One(a, b))
    }

    pub fn delta(a: Label, b: Label) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidInput("Δ needs two distinct labels".into()));
        }
        let (a, b) = sorted2(a, b);
        Ok(BVBasisElem::Delta(a, b))
    }

    pub fn c(labels: impl IntoIterator<Item = Label>) -> Result<Self> {
        let set: LabelSet = labels.into_iter().collect();
        if set.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "c_A needs |A| ≥ 3, got {}",
                set.len()
            )));
        }
        Ok(BVBasisElem::C(set))
    }

    pub fn e(labels: impl IntoIterator<Item = Label>, i: Label, j: Label) -> Result<Self> {
        let set: LabelSet = labels.into_iter().collect();
        if set.len() < 3 {
            return Err(Error::InvalidInput(format!(
                "E_ij needs |A| ≥ 3, got {}",
                set.len()
            )));
        }
        if i == j || !set.contains(&i) || !set.contains(&j) {
            return Err(Error::InvalidInput("E_ij needs distinct i, j in A".into()));
        }
        let (i, j) = sorted2(i, j);
        Ok(BVBasisElem::E(set, i, j))
    }

    pub fn labels(&self) -> LabelSet {
        match self {
            BVBasisElem::One(a, b) | BVBasisElem::Delta(a, b) => [*a, *b].into_iter().collect(),
            BVBasisElem::C(s) | BVBasisElem::E(s, _, _) => s.clone(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            BVBasisElem::One(..) | BVBasisElem::Delta(..) => 2,
            BVBasisElem::C(s) | BVBasisElem::E(s, _, _) => s.len(),
        }
    }

    pub fn contains(&self, l: Label) -> bool {
        match self {
            BVBasisElem::One(a, b) | BVBasisElem::Delta(a, b) => *a == l || *b == l,
            BVBasisElem::C(s) | BVBasisElem::E(s, _, _) => s.contains(&l),
        }
    }

    /// Weight: minus twice the cohomological degree.
    pub fn weight(&self) -> i32 {
        -2 * self.degree()
    }

    pub fn degree(&self) -> i32 {
        match self {
            BVBasisElem::One(..) | BVBasisElem::C(_) => 0,
            BVBasisElem::Delta(..) | BVBasisElem::E(..) => -1,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree() % 2 != 0
    }

    pub fn relabel(&self, f: &impl Fn(Label) -> Label) -> BVBasisElem {
        let set = |s: &LabelSet| s.iter().map(|l| f(*l)).collect::<LabelSet>();
        match self {
            BVBasisElem::One(a, b) => {
                let (a, b) = sorted2(f(*a), f(*b));
                BVBasisElem::One(a, b)
            }
            BVBasisElem::Delta(a, b) => {
                let (a, b) = sorted2(f(*a), f(*b));
                BVBasisElem::Delta(a, b)
            }
            BVBasisElem::C(s) => BVBasisElem::C(set(s)),
            BVBasisElem::E(s, i, j) => {
                let (i, j) = sorted2(f(*i), f(*j));
                BVBasisElem::E(set(s), i, j)
            }
        }
    }
}

fn join(s: &LabelSet) -> String {
    s.iter().map(Label::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for BVBasisElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BVBasisElem::One(a, b) => write!(f, "1{{{a},{b}}}"),
            BVBasisElem::Delta(a, b) => write!(f, "D{{{a},{b}}}"),
            BVBasisElem::C(s) => write!(f, "c{{{}}}", join(s)),
            BVBasisElem::E(s, i, j) => write!(f, "E{{{};{i},{j}}}", join(s)),
        }
    }
}

fn parse_labels(s: &str) -> Result<Vec<Label>> {
    s.split(',')
        .map(|t| {
            let v: u32 = t
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad label {t:?}")))?;
            if v >= Label::FRESH_BASE {
                return Err(Error::InvalidInput(format!("label {v} is reserved")));
            }
            Ok(Label(v))
        })
        .collect()
}

impl FromStr for BVBasisElem {
    type Err = Error;

    /// Parses the rendering produced by `Display`: `c{1,2,3}`,
    /// `E{1,2,3;1,3}`, `D{1,2}`, `1{1,2}`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let open = s
            .find('{')
            .ok_or_else(|| Error::InvalidInput("missing '{'".into()))?;
        if !s.ends_with('}') {
            return Err(Error::InvalidInput("missing '}'".into()));
        }
        let head = &s[..open];
        let body = &s[open + 1..s.len() - 1];
        let distinct = |v: &[Label]| v.iter().collect::<BTreeSet<_>>().len() == v.len();
        match head {
            "c" => {
                let ls = parse_labels(body)?;
                if !distinct(&ls) {
                    return Err(Error::InvalidInput("repeated label".into()));
                }
                BVBasisElem::c(ls)
            }
            "E" => {
                let (set, ij) = body
                    .split_once(';')
                    .ok_or_else(|| Error::InvalidInput("E needs ';'".into()))?;
                let ls = parse_labels(set)?;
                let ij = parse_labels(ij)?;
                if !distinct(&ls) || ij.len() != 2 {
                    return Err(Error::InvalidInput("malformed E".into()));
                }
                BVBasisElem::e(ls, ij[0], ij[1])
            }
            "D" | "1" => {
                let ls = parse_labels(body)?;
                if ls.len() != 2 {
                    return Err(Error::InvalidInput(
                        "arity-two element needs two labels".into(),
                    ));
                }
                if head == "D" {
                    BVBasisElem::delta(ls[0], ls[1])
                } else {
                    BVBasisElem::one(ls[0], ls[1])
                }
            }
            _ => Err(Error::InvalidInput(format!("unknown BV symbol {head:?}"))),
        }
    }
}

/// Linear combination of basis elements on a common label set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BVElement {
    labels: LabelSet,
    terms: BTreeMap<BVBasisElem, Rational>,
}

impl BVElement {
    pub fn zero(labels: LabelSet) -> Self {
        BVElement {
            labels,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(x: BVBasisElem) -> Self {
        let mut e = Self::zero(x.labels());
        e.terms.insert(x, Rational::from_integer(1.into()));
        e
    }

    pub fn labels(&self) -> &LabelSet {
        &self.labels
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BVBasisElem, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, x: &BVBasisElem) -> Rational {
        self.terms.get(x).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, x: BVBasisElem, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(x) {
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

    pub fn add(&self, other: &BVElement) -> Result<BVElement> {
        if self.labels != other.labels {
            return Err(Error::InvalidInput(
                "adding elements of different arity".into(),
            ));
        }
        let mut out = self.clone();
        for (x, c) in other.terms() {
            out.add_term(x.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> BVElement {
        let mut out = Self::zero(self.labels.clone());
        for (x, v) in self.terms() {
            out.add_term(x.clone(), v * c);
        }
        out
    }

    /// Weight if homogeneous.
    pub fn weight(&self) -> Option<i32> {
        let mut ws = self.terms.keys().map(BVBasisElem::weight);
        let w = ws.next()?;
        ws.all(|x| x == w).then_some(w)
    }
}

impl fmt::Display for BVElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(x, c)| format!("{}*{}", crate::linalg::fmt_rational(c), x))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn check_composable(xl: &LabelSet, a: Label, yl: &LabelSet, b: Label) -> Result<LabelSet> {
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

/// Composition of two weight-0/weight-2 elements where the second one is `c_Y`.
fn weight2_into_c(
    x: &BVBasisElem,
    a: Label,
    ylabels: &LabelSet,
    b: Label,
    result: &LabelSet,
) -> Vec<BVBasisElem> {
    let spread = |i: Label| -> Vec<BVBasisElem> {
        ylabels
            .iter()
            .filter(|k| **k != b)
            .map(|k| BVBasisElem::e(result.iter().copied(), i, *k).expect("valid E"))
            .collect()
    };
    match x {
        BVBasisElem::Delta(p, q) => spread(if *p == a { *q } else { *p }),
        BVBasisElem::E(_, i, j) => {
            if a == *j {
                spread(*i)
            } else if a == *i {
                spread(*j)
            } else {
                vec![BVBasisElem::e(result.iter().copied(), *i, *j).expect("valid E")]
            }
        }
        _ => unreachable!("weight-2 element expected"),
    }
}

/// `x ∘_{a,b} y` on basis elements, with integer multiplicities.
pub fn compose_basis(
    x: &BVBasisElem,
    a: Label,
    y: &BVBasisElem,
    b: Label,
) -> Result<Vec<(BVBasisElem, i64)>> {
    let result = check_composable(&x.labels(), a, &y.labels(), b)?;
    if let BVBasisElem::One(p, q) = x {
        let other = if *p == a { *q } else { *p };
        return Ok(vec![(y.relabel(&|l| if l == b { other } else { l }), 1)]);
    }
    if let BVBasisElem::One(p, q) = y {
        let other = if *p == b { *q } else { *p };
        return Ok(vec![(x.relabel(&|l| if l == a { other } else { l }), 1)]);
    }
    if x.weight() + y.weight() >= 4 {
        return Ok(Vec::new());
    }
    let out = match (x, y) {
        (BVBasisElem::C(_), BVBasisElem::C(_)) => vec![BVBasisElem::C(result)],
        (_, BVBasisElem::C(yl)) => weight2_into_c(x, a, yl, b, &result),
        (BVBasisElem::C(xl), _) => weight2_into_c(y, b, xl, a, &result),
        _ => unreachable!("remaining cases have weight ≥ 4"),
    };
    Ok(out.into_iter().map(|e| (e, 1)).collect())
}

/// Cyclic-operadic composition `x ∘_{a,b} y`, truncated at weight 4.
pub fn bv_compose(x: &BVElement, a: Label, y: &BVElement, b: Label) -> Result<BVElement> {
    let labels = check_composable(&x.labels, a, &y.labels, b)?;
    let mut out = BVElement::zero(labels);
    for (xb, xc) in x.terms() {
        for (yb, yc) in y.terms() {
            for (z, k) in compose_basis(xb, a, yb, b)? {
                out.add_term(z, xc * yc * Rational::from_integer(k.into()));
            }
        }
    }
    Ok(out)
}

/// `x ∘_{l} Δ`, the label `l` being kept for the free slot of `Δ`.
pub fn insert_delta(x: &BVBasisElem, l: Label) -> Vec<BVBasisElem> {
    match x {
        BVBasisElem::C(s) => s
            .iter()
            .filter(|k| **k != l)
            .map(|k| BVBasisElem::e(s.iter().copied(), l, *k).expect("valid E"))
            .collect(),
        BVBasisElem::One(a, b) => vec![BVBasisElem::Delta(*a, *b)],
        BVBasisElem::Delta(..) | BVBasisElem::E(..) => Vec::new(),
    }
}

/// Internal differential of `BV`. It is a homology operad, so this is zero.
pub fn bv_differential(x: &BVElement) -> BVElement {
    BVElement::zero(x.labels.clone())
}

/// Relabels along a bijection given as a map on the label set.
pub fn bv_relabel(x: &BVElement, map: &BTreeMap<Label, Label>) -> Result<BVElement> {
    let image: LabelSet = x
        .labels
        .iter()
        .map(|l| map.get(l).copied().ok_or(Error::NotBijective))
        .collect::<Result<_>>()?;
    if image.len() != x.labels.len() {
        return Err(Error::NotBijective);
    }
    let f = |l: Label| map[&l];
    let mut out = BVElement::zero(image);
    for (b, c) in x.terms() {
        out.add_term(b.relabel(&f), c.clone());
    }
    Ok(out)
}

pub fn bv_weight(x: &BVBasisElem) -> i32 {
    x.weight()
}

pub fn bv_degree(x: &BVBasisElem) -> i32 {
    x.degree()
}
