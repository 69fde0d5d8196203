//! The morphism `F` on cogenerators of the bar construction of `BV*`, and
//! the check that it commutes with the differentials.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::bv::{BVBasisElem, LabelSet};
use crate::linalg::{rat, Rational};
use crate::psi::{p_identity_residual, p_polynomial_on, SymPoly};
use crate::qbv::{q_compose2, q_compose3, q_diff, QBasisElem, QElement};
use crate::{Error, Label, Result};

/// Dual basis elements of `gr_{≤2} BV`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cogenerator {
    DeltaStar(Label, Label),
    CStar(LabelSet),
    EStar(LabelSet, Label, Label),
}

impl Cogenerator {
    /// Degree of the dual: minus the degree in `BV`.
    pub fn degree(&self) -> i32 {
        match self {
            Cogenerator::CStar(_) => 0,
            Cogenerator::DeltaStar(..) | Cogenerator::EStar(..) => 1,
        }
    }

    pub fn weight(&self) -> i32 {
        match self {
            Cogenerator::CStar(_) => 0,
            Cogenerator::DeltaStar(..) | Cogenerator::EStar(..) => 2,
        }
    }
}

/// `f(Δ*) = u`, `f(c_A*) = c_A ⊗ p_A`, `f(E_ij*) = 0`.
pub fn f_image(x: &Cogenerator) -> Result<QElement> {
    match x {
        Cogenerator::DeltaStar(a, b) => QElement::u(1, *a, *b),
        Cogenerator::CStar(a) => c_times_p(a),
        Cogenerator::EStar(a, i, j) => {
            BVBasisElem::e(a.iter().copied(), *i, *j)?;
            Ok(QElement::zero(a.clone()))
        }
    }
}

fn c_times_p(a: &LabelSet) -> Result<QElement> {
    let labels: Vec<Label> = a.iter().copied().collect();
    let c = BVBasisElem::c(labels.iter().copied())?;
    let p = p_polynomial_on(&labels)?;
    let mut out = QElement::zero(a.clone());
    for (m, k) in p.terms() {
        out.add_term(QBasisElem::Poly(c.clone(), m.clone()), k.clone());
    }
    Ok(out)
}

/// Ordered splittings `A = A_1 ⊔ A_2` with both parts of size ≥ 2.
fn ordered_splits(a: &[Label]) -> Vec<(LabelSet, LabelSet)> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << a.len()) {
        let (a1, a2): (Vec<_>, Vec<_>) =
            a.iter().enumerate().partition(|(k, _)| mask >> k & 1 == 1);
        if a1.len() >= 2 && a2.len() >= 2 {
            out.push((
                a1.into_iter().map(|(_, l)| *l).collect(),
                a2.into_iter().map(|(_, l)| *l).collect(),
            ));
        }
    }
    out
}

fn with(s: &LabelSet, l: Label) -> LabelSet {
    let mut s = s.clone();
    s.insert(l);
    s
}

fn check_labels(a: &LabelSet) -> Result<()> {
    if a.len() < 3 {
        return Err(Error::InvalidInput(
            "label set needs at least 3 elements".into(),
        ));
    }
    if a.iter().any(|l| l.is_fresh()) {
        return Err(Error::InvalidInput(
            "labels collide with the reserved namespace".into(),
        ));
    }
    Ok(())
}

/// `d f(c_A*) + ½ Σ μ(f(c_{A_1⊔α}*), f(c_{A_2⊔β}*))` over ordered splittings.
pub fn chain_map_c_residual(a: &LabelSet) -> Result<QElement> {
    check_labels(a)?;
    let (alpha, beta) = (Label::fresh(0), Label::fresh(1));
    let mut total = q_diff(&c_times_p(a)?);
    let labels: Vec<Label> = a.iter().copied().collect();
    let half = rat(1, 2);
    for (a1, a2) in ordered_splits(&labels) {
        let x = c_times_p(&with(&a1, alpha))?;
        let y = c_times_p(&with(&a2, beta))?;
        total.axpy(&half, &q_compose2(&x, alpha, &y, beta)?)?;
    }
    Ok(total)
}

pub fn verify_chain_map_c(a: &LabelSet) -> Result<bool> {
    Ok(chain_map_c_residual(a)?.is_zero())
}

/// The `E_ij*` component: the binary terms with `u` at slot `i` or `j`
/// (both orders, halved) plus the ternary terms `c ⊗ p, u, c ⊗ p` over
/// splittings separating `i` from `j` (both orientations, halved).
pub fn chain_map_e_residual(a: &LabelSet, i: Label, j: Label) -> Result<QElement> {
    check_labels(a)?;
    if i == j || !a.contains(&i) || !a.contains(&j) {
        return Err(Error::InvalidInput("need distinct i, j in A".into()));
    }
    let (alpha, b1, b2, gamma) = (
        Label::fresh(0),
        Label::fresh(1),
        Label::fresh(2),
        Label::fresh(3),
    );
    let half = rat(1, 2);
    let mut total = QElement::zero(a.clone());
    for slot in [i, j] {
        let mut rest = a.clone();
        rest.remove(&slot);
        let x = c_times_p(&with(&rest, alpha))?;
        // u on (b1, slot), glued to x at b1, either as right or as left factor
        let u = f_image(&Cogenerator::DeltaStar(b1, slot))?;
        total.axpy(&half, &q_compose2(&x, alpha, &u, b1)?)?;
        total.axpy(&half, &q_compose2(&u, b1, &x, alpha)?)?;
    }
    let u = f_image(&Cogenerator::DeltaStar(b1, b2))?;
    let labels: Vec<Label> = a.iter().copied().collect();
    for (a1, a2) in ordered_splits(&labels) {
        let separates =
            (a1.contains(&i) && a2.contains(&j)) || (a1.contains(&j) && a2.contains(&i));
        if !separates {
            continue;
        }
        let x = c_times_p(&with(&a1, alpha))?;
        let z = c_times_p(&with(&a2, gamma))?;
        total.axpy(&half, &q_compose3(&x, alpha, &u, b1, b2, &z, gamma)?)?;
    }
    Ok(total)
}

pub fn verify_chain_map_e(a: &LabelSet, i: Label, j: Label) -> Result<bool> {
    Ok(chain_map_e_residual(a, i, j)?.is_zero())
}

/// Polynomial coefficient of a BV symbol in an element.
pub fn coefficient_poly(q: &QElement, x: &BVBasisElem) -> SymPoly {
    let mut out = SymPoly::zero(q.labels().iter().copied().collect());
    for (b, c) in q.terms() {
        if let QBasisElem::Poly(y, m) = b {
            if y == x {
                out.add_term(m.clone(), c.clone());
            }
        }
    }
    out
}

/// Compares the two evaluations of the chain-map condition with the
/// polynomial identity, pair by pair: the `E_{ij}` coefficient of the
/// `c_A*` residual, the `c_A` coefficient of the `E_{ij}*` residual, and
/// `p_identity_residual(A, i, j)` must all coincide.
pub fn paths_agree(a: &LabelSet) -> Result<bool> {
    let labels: Vec<Label> = a.iter().copied().collect();
    let c_res = chain_map_c_residual(a)?;
    let c = BVBasisElem::c(labels.iter().copied())?;
    for (k, i) in labels.iter().enumerate() {
        for j in &labels[k + 1..] {
            let reference = p_identity_residual(&labels, *i, *j)?;
            let e = BVBasisElem::e(labels.iter().copied(), *i, *j)?;
            let from_c = coefficient_poly(&c_res, &e);
            let e_res = chain_map_e_residual(a, *i, *j)?;
            let from_e = coefficient_poly(&e_res, &c);
            if !same_poly(&from_c, &reference) || !same_poly(&from_e, &reference) {
                return Ok(false);
            }
            if e_res.terms().count() != from_e.len() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn same_poly(a: &SymPoly, b: &SymPoly) -> bool {
    let terms = |p: &SymPoly| -> BTreeSet<(String, Rational)> {
        p.terms().map(|(m, c)| (m.to_string(), c.clone())).collect()
    };
    terms(a) == terms(b)
}

/// Per arity: whether the `c` case, every `E` case and the agreement of
/// the evaluation paths hold on `{1, …, n}`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ChainMapRow {
    pub arity: usize,
    pub c_case: bool,
    pub e_case: bool,
    pub paths_agree: bool,
}

pub fn verify_f(max_arity: usize) -> Result<Vec<ChainMapRow>> {
    (3..=max_arity)
        .into_par_iter()
        .map(|n| {
            let a: LabelSet = (1..=n as u32).map(Label).collect();
            let mut e_case = true;
            for i in 1..=n as u32 {
                for j in i + 1..=n as u32 {
                    e_case &= verify_chain_map_e(&a, Label(i), Label(j))?;
                }
            }
            Ok(ChainMapRow {
                arity: n,
                c_case: verify_chain_map_c(&a)?,
                e_case,
                paths_agree: paths_agree(&a)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::Monomial;
    use crate::qbv::{q_degree, q_weight};

    fn set(v: &[u32]) -> LabelSet {
        v.iter().map(|x| Label(*x)).collect()
    }

    #[test]
    fn images() {
        let u = f_image(&Cogenerator::DeltaStar(Label(1), Label(2))).unwrap();
        assert_eq!(u, QElement::u(1, Label(1), Label(2)).unwrap());
        let c3 = f_image(&Cogenerator::CStar(set(&[1, 2, 3]))).unwrap();
        let want =
            QElement::poly(BVBasisElem::c(set(&[1, 2, 3])).unwrap(), Monomial::one()).unwrap();
        assert_eq!(c3, want);
        assert!(
            f_image(&Cogenerator::EStar(set(&[1, 2, 3]), Label(1), Label(2)))
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn f_preserves_weight_and_degree() {
        for n in 3..=6u32 {
            let g = Cogenerator::CStar((1..=n).map(Label).collect());
            let img = f_image(&g).unwrap();
            for (b, _) in img.terms() {
                assert_eq!(q_weight(b), g.weight());
                assert_eq!(q_degree(b), g.degree());
            }
        }
        let d = Cogenerator::DeltaStar(Label(1), Label(2));
        let img = f_image(&d).unwrap();
        assert_eq!(img.weight(), Some(d.weight()));
        assert_eq!(img.degree(), Some(d.degree()));
    }

    #[test]
    fn small_cases() {
        assert!(verify_chain_map_c(&set(&[1, 2, 3])).unwrap());
        assert!(verify_chain_map_c(&set(&[1, 2, 3, 4])).unwrap());
        assert!(verify_chain_map_e(&set(&[1, 2, 3]), Label(1), Label(2)).unwrap());
        assert!(verify_chain_map_e(&set(&[1, 2, 3, 4, 5]), Label(2), Label(5)).unwrap());
    }

    #[test]
    fn c4_terms_do_not_cancel_trivially() {
        // both halves of the c_4 equation are nonzero on their own
        let a = set(&[1, 2, 3, 4]);
        assert!(!q_diff(&c_times_p(&a).unwrap()).is_zero());
    }

    #[test]
    fn negating_f_on_c_breaks_the_equation() {
        // the quadratic part is even in f, the linear part odd
        let a = set(&[1, 2, 3, 4]);
        let lin = q_diff(&c_times_p(&a).unwrap());
        let res = chain_map_c_residual(&a).unwrap();
        assert!(res.is_zero());
        assert!(!res.add(&lin.scale(&rat(-2, 1))).unwrap().is_zero());
    }

    #[test]
    fn paths_agree_small() {
        for n in 3..=5u32 {
            assert!(paths_agree(&(1..=n).map(Label).collect()).unwrap());
        }
    }

    #[test]
    fn splits_counted() {
        // ordered splittings of a 4-set into parts of size ≥ 2: 6
        assert_eq!(
            ordered_splits(&[Label(1), Label(2), Label(3), Label(4)]).len(),
            6
        );
    }

    #[test]
    fn errors() {
        assert!(chain_map_c_residual(&set(&[1, 2])).is_err());
        assert!(chain_map_e_residual(&set(&[1, 2, 3]), Label(1), Label(1)).is_err());
        assert!(chain_map_e_residual(&set(&[1, 2, 3]), Label(1), Label(7)).is_err());
    }
}
