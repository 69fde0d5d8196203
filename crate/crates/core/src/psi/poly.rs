use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::linalg::{fmt_rational, Rational};
use crate::Label;

/// Monomial in variables `v_l`, stored as a sparse exponent map.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(BTreeMap<Label, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(l: Label) -> Self {
        Self::from_pairs([(l, 1)])
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Label, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (l, e) in pairs {
            if e > 0 {
                *m.entry(l).or_insert(0) += e;
            }
        }
        Monomial(m)
    }

    pub fn exponent(&self, l: Label) -> u32 {
        self.0.get(&l).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, u32)> + '_ {
        self.0.iter().map(|(l, e)| (*l, *e))
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.0.keys().copied()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Self::from_pairs(self.iter().chain(other.iter()))
    }

    /// `∂_l^k` of the monomial: the integer factor and the resulting monomial.
    pub fn derivative(&self, l: Label, k: u32) -> Option<(BigInt, Monomial)> {
        let e = self.exponent(l);
        if k > e {
            return None;
        }
        let mut coeff = BigInt::one();
        for t in 0..k {
            coeff *= BigInt::from(e - t);
        }
        let mut m = self.0.clone();
        if e == k {
            m.remove(&l);
        } else {
            m.insert(l, e - k);
        }
        Some((coeff, Monomial(m)))
    }

    /// The monomial with `v_l = 0`, or `None` if it vanishes.
    pub fn at_zero(&self, l: Label) -> Option<Monomial> {
        if self.exponent(l) > 0 {
            None
        } else {
            Some(self.clone())
        }
    }

    pub fn without(&self, l: Label) -> Monomial {
        let mut m = self.0.clone();
        m.remove(&l);
        Monomial(m)
    }

    pub fn relabel(&self, f: impl Fn(Label) -> Label) -> Monomial {
        Self::from_pairs(self.iter().map(|(l, e)| (f(l), e)))
    }

    pub fn exponents_in(&self, vars: &[Label]) -> Vec<u32> {
        vars.iter().map(|l| self.exponent(*l)).collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(l, e)| {
                if e == 1 {
                    format!("v{l}")
                } else {
                    format!("v{l}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Polynomial over ℚ in an ordered list of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    pub variables: Vec<Label>,
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Serialize)]
struct JsonTerm {
    exponents: Vec<u32>,
    coeff: String,
}

#[derive(Serialize)]
struct JsonPoly {
    n: usize,
    terms: Vec<JsonTerm>,
}

impl SymPoly {
    pub fn zero(variables: Vec<Label>) -> Self {
        SymPoly {
            variables,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(variables: Vec<Label>, c: Rational) -> Self {
        let mut p = Self::zero(variables);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn merged_vars(&self, other: &SymPoly) -> Vec<Label> {
        let mut s: BTreeSet<Label> = self.variables.iter().copied().collect();
        s.extend(other.variables.iter().copied());
        let mut v = self.variables.clone();
        v.extend(
            other
                .variables
                .iter()
                .filter(|l| !self.variables.contains(l)),
        );
        debug_assert_eq!(v.len(), s.len());
        v
    }

    pub fn add(&self, other: &SymPoly) -> SymPoly {
        let mut out = SymPoly {
            variables: self.merged_vars(other),
            terms: self.terms.clone(),
        };
        for (m, c) in other.terms() {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> SymPoly {
        let mut out = Self::zero(self.variables.clone());
        for (m, v) in self.terms() {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &SymPoly) -> SymPoly {
        let mut out = Self::zero(self.merged_vars(other));
        for (m1, c1) in self.terms() {
            for (m2, c2) in other.terms() {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn derivative(&self, l: Label) -> SymPoly {
        let mut out = Self::zero(self.variables.clone());
        for (m, c) in self.terms() {
            if let Some((k, dm)) = m.derivative(l, 1) {
                out.add_term(dm, c * Rational::from_integer(k));
            }
        }
        out
    }

    /// Sets `v_l = 0` and drops `l` from the variable list.
    pub fn at_zero(&self, l: Label) -> SymPoly {
        let mut out = Self::zero(self.variables.iter().copied().filter(|x| *x != l).collect());
        for (m, c) in self.terms() {
            if let Some(m0) = m.at_zero(l) {
                out.add_term(m0, c.clone());
            }
        }
        out
    }

    pub fn relabel(&self, f: impl Fn(Label) -> Label) -> SymPoly {
        let mut out = Self::zero(self.variables.iter().map(|l| f(*l)).collect());
        for (m, c) in self.terms() {
            out.add_term(m.relabel(&f), c.clone());
        }
        out
    }

    /// Homogeneous total degree, or `None` if mixed (zero is homogeneous of
    /// every degree and reports `None`).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degs = self.terms.keys().map(Monomial::degree);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    /// Terms in canonical order: exponent vectors in variable order,
    /// lexicographically descending.
    pub fn sorted_terms(&self) -> Vec<(Vec<u32>, Rational)> {
        let mut v: Vec<(Vec<u32>, Rational)> = self
            .terms()
            .map(|(m, c)| (m.exponents_in(&self.variables), c.clone()))
            .collect();
        v.sort_by(|a, b| b.0.cmp(&a.0));
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms = self
            .sorted_terms()
            .into_iter()
            .map(|(exponents, c)| JsonTerm {
                exponents,
                coeff: fmt_rational(&c),
            })
            .collect();
        serde_json::to_value(JsonPoly {
            n: self.variables.len(),
            terms,
        })
        .expect("serializable")
    }

    fn render_positive(&self) -> String {
        let mut out = String::new();
        for (i, (exps, c)) in self.sorted_terms().into_iter().enumerate() {
            let m = Monomial::from_pairs(self.variables.iter().copied().zip(exps));
            let neg = c.is_negative();
            let a = c.abs();
            if i > 0 {
                out.push(if neg { '-' } else { '+' });
            } else if neg {
                out.push('-');
            }
            if m.is_one() {
                out.push_str(&fmt_rational(&a));
            } else if a.is_one() {
                out.push_str(&m.to_string());
            } else {
                out.push_str(&format!("{}*{}", fmt_rational(&a), m));
            }
        }
        out
    }
}

impl fmt::Display for SymPoly {
    /// Canonical rendering. When every coefficient is negative and there is
    /// more than one term, the sign is factored out: `-(v1+v2)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        if self.terms.len() > 1 && self.terms.values().all(|c| c.is_negative()) {
            let minus = self.scale(&-Rational::one());
            return write!(f, "-({})", minus.render_positive());
        }
        write!(f, "{}", self.render_positive())
    }
}
