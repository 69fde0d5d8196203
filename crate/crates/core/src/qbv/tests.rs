use super::*;
use crate::linalg::int;

fn ls(v: &[u32]) -> Vec<Label> {
    v.iter().map(|x| Label(*x)).collect()
}

fn c(v: &[u32]) -> BVBasisElem {
    BVBasisElem::c(ls(v)).unwrap()
}

fn e(v: &[u32], i: u32, j: u32) -> BVBasisElem {
    BVBasisElem::e(ls(v), Label(i), Label(j)).unwrap()
}

fn mono(pairs: &[(u32, u32)]) -> Monomial {
    Monomial::from_pairs(pairs.iter().map(|(l, k)| (Label(*l), *k)))
}

fn p(x: BVBasisElem, pairs: &[(u32, u32)]) -> QElement {
    QElement::poly(x, mono(pairs)).unwrap()
}

fn u(k: u32, a: u32, b: u32) -> QElement {
    QElement::u(k, Label(a), Label(b)).unwrap()
}

fn sum(parts: &[QElement]) -> QElement {
    parts
        .iter()
        .fold(QElement::zero(Default::default()), |acc, x| {
            acc.add(x).unwrap()
        })
}

#[test]
fn degrees_and_weights() {
    let c3 = QBasisElem::poly(c(&[1, 2, 3]), Monomial::one()).unwrap();
    assert_eq!((q_degree(&c3), q_weight(&c3)), (0, 0));
    let (u1, _) = QBasisElem::u(1, Label(1), Label(2)).unwrap();
    assert_eq!((q_degree(&u1), q_weight(&u1)), (1, 2));
    let c4v = QBasisElem::poly(c(&[1, 2, 3, 4]), mono(&[(1, 1)])).unwrap();
    assert_eq!((q_degree(&c4v), q_weight(&c4v)), (0, 0));
    let c4 = QBasisElem::poly(c(&[1, 2, 3, 4]), Monomial::one()).unwrap();
    assert_eq!((q_degree(&c4), q_weight(&c4)), (2, 2));
}

#[test]
fn diff_examples() {
    let d = q_diff(&p(c(&[1, 2, 3]), &[(1, 1)]));
    assert_eq!(
        d,
        sum(&[p(e(&[1, 2, 3], 1, 2), &[]), p(e(&[1, 2, 3], 1, 3), &[])])
    );
    assert!(q_diff(&p(c(&[1, 2, 3]), &[])).is_zero());
    assert!(q_diff(&u(3, 1, 2)).is_zero());
}

#[test]
fn transposition_on_u() {
    let swap: BTreeMap<Label, Label> = [(Label(1), Label(2)), (Label(2), Label(1))].into();
    assert_eq!(
        q_relabel(&u(2, 1, 2), &swap).unwrap(),
        u(2, 1, 2).scale(&int(-1))
    );
    assert_eq!(q_relabel(&u(1, 1, 2), &swap).unwrap(), u(1, 1, 2));
    assert_eq!(q_relabel(&u(0, 1, 2), &swap).unwrap(), u(0, 1, 2));
    let swap3: BTreeMap<Label, Label> = [
        (Label(1), Label(2)),
        (Label(2), Label(1)),
        (Label(3), Label(3)),
    ]
    .into();
    assert_eq!(
        q_relabel(&p(c(&[1, 2, 3]), &[(1, 1)]), &swap3).unwrap(),
        p(c(&[1, 2, 3]), &[(2, 1)])
    );
}

#[test]
fn binary_examples() {
    // μ(u, u) = −u²
    let r = q_compose2(&u(1, 1, 2), Label(2), &u(1, 3, 4), Label(3)).unwrap();
    assert_eq!(r, u(2, 1, 4).scale(&int(-1)));
    // μ_{a,1}(c ⊗ v_a², u²) = 2 c ⊗ 1, the free slot of u taking the place of a
    let r = q_compose2(
        &p(c(&[1, 2, 9]), &[(9, 2)]),
        Label(9),
        &u(2, 10, 11),
        Label(10),
    )
    .unwrap();
    assert_eq!(r, p(c(&[1, 2, 11]), &[]).scale(&int(2)));
    // μ_{2,a}(u^n, x ⊗ p) = (−1)^{n+1} x ⊗ ∂^n p
    let r = q_compose2(
        &u(2, 10, 11),
        Label(11),
        &p(c(&[1, 2, 9]), &[(9, 2)]),
        Label(9),
    )
    .unwrap();
    assert_eq!(r, p(c(&[1, 2, 10]), &[]).scale(&int(-2)));
    // μ_{a,b}(c ⊗ 1, c ⊗ 1) = Σ E_{kl}
    let r = q_compose2(
        &p(c(&[1, 2, 9]), &[]),
        Label(9),
        &p(c(&[10, 3, 4]), &[]),
        Label(10),
    )
    .unwrap();
    let set = [1, 2, 3, 4];
    let want = sum(&[
        p(e(&set, 1, 3), &[]),
        p(e(&set, 1, 4), &[]),
        p(e(&set, 2, 3), &[]),
        p(e(&set, 2, 4), &[]),
    ]);
    assert_eq!(r, want);
}

#[test]
fn binary_sets_glued_variables_to_zero() {
    let r = q_compose2(
        &p(c(&[1, 2, 9]), &[(9, 1)]),
        Label(9),
        &p(c(&[10, 3, 4]), &[]),
        Label(10),
    )
    .unwrap();
    assert!(r.is_zero());
}

#[test]
fn ternary_examples() {
    let x = p(c(&[1, 2, 9]), &[]);
    let z = p(c(&[10, 3, 4]), &[]);
    let r = q_compose3(
        &x,
        Label(9),
        &u(1, 20, 21),
        Label(20),
        Label(21),
        &z,
        Label(10),
    )
    .unwrap();
    assert_eq!(r, p(c(&[1, 2, 3, 4]), &[]));
    let r = q_compose3(
        &x,
        Label(9),
        &u(0, 20, 21),
        Label(20),
        Label(21),
        &z,
        Label(10),
    )
    .unwrap();
    assert!(r.is_zero());
    let xe = p(e(&[1, 2, 9], 1, 2), &[]);
    let ze = p(e(&[10, 3, 4], 3, 4), &[]);
    let r = q_compose3(
        &xe,
        Label(9),
        &u(1, 20, 21),
        Label(20),
        Label(21),
        &ze,
        Label(10),
    )
    .unwrap();
    assert!(r.is_zero());
}

#[test]
fn ternary_formula_sum() {
    // n = 3: terms j = 0,1,2 with signs (−1)^{2−j}
    let x = p(c(&[1, 2, 9]), &[(9, 1), (1, 1)]);
    let z = p(c(&[10, 3, 4]), &[(10, 1)]);
    let r = q_compose3(
        &x,
        Label(9),
        &u(3, 20, 21),
        Label(20),
        Label(21),
        &z,
        Label(10),
    )
    .unwrap();
    // only j = 1 survives: sign (−1)^{1}, factor 1!·1!
    assert_eq!(r, p(c(&[1, 2, 3, 4]), &[(1, 1)]).scale(&int(-1)));
}

#[test]
fn ternary_middle_slot_order() {
    // swapping which u-slot faces x equals applying τ to u
    for n in 1..=4u32 {
        for (ea, ec) in [(0, n - 1), (n - 1, 0)] {
            let x = p(c(&[1, 2, 9]), &[(9, ea)]);
            let z = p(c(&[10, 3, 4]), &[(10, ec)]);
            let fwd = q_compose3(
                &x,
                Label(9),
                &u(n, 20, 21),
                Label(21),
                Label(20),
                &z,
                Label(10),
            )
            .unwrap();
            let swapped: BTreeMap<Label, Label> =
                [(Label(20), Label(21)), (Label(21), Label(20))].into();
            let tu = q_relabel(&u(n, 20, 21), &swapped).unwrap();
            let via_tau =
                q_compose3(&x, Label(9), &tu, Label(20), Label(21), &z, Label(10)).unwrap();
            assert_eq!(fwd, via_tau);
            let plain = q_compose3(
                &x,
                Label(9),
                &u(n, 20, 21),
                Label(20),
                Label(21),
                &z,
                Label(10),
            )
            .unwrap();
            assert_eq!(fwd, plain.scale(&int(tau_sign(n) as i64)));
        }
    }
}

fn sample_elements() -> Vec<QElement> {
    let mut out = Vec::new();
    for k in 1..=3 {
        out.push(u(k, 1, 2));
        out.push(u(k, 2, 1));
    }
    for x in bv_symbols(&ls(&[1, 2, 3])) {
        for m in monomials_up_to(&ls(&[1, 2, 3]), 2) {
            out.push(QElement::poly(x.clone(), m).unwrap());
        }
    }
    out
}

fn shift(x: &QElement, by: u32) -> QElement {
    let m: BTreeMap<Label, Label> = x.labels().iter().map(|l| (*l, Label(l.0 + by))).collect();
    q_relabel(x, &m).unwrap()
}

#[test]
fn binary_graded_symmetry() {
    let xs = sample_elements();
    for x in &xs {
        for y in &xs {
            let y = shift(y, 10);
            for a in x.labels().clone() {
                for b in y.labels().clone() {
                    let xy = q_compose2(x, a, &y, b).unwrap();
                    let yx = q_compose2(&y, b, x, a).unwrap();
                    let s = if x.degree().unwrap() * y.degree().unwrap() % 2 == 0 {
                        1
                    } else {
                        -1
                    };
                    assert_eq!(xy, yx.scale(&int(s)), "{x} {a} | {y} {b}");
                }
            }
        }
    }
}

#[test]
fn ternary_reversal() {
    let xs: Vec<QElement> = sample_elements()
        .into_iter()
        .filter(|e| e.labels().len() == 3)
        .collect();
    for x in &xs {
        for z in &xs {
            let z = shift(z, 10);
            for n in 1..=3 {
                let y = u(n, 20, 21);
                let fwd = q_compose3(x, Label(1), &y, Label(20), Label(21), &z, Label(11)).unwrap();
                let back =
                    q_compose3(&z, Label(11), &y, Label(21), Label(20), x, Label(1)).unwrap();
                let (dx, dy, dz) = (
                    x.degree().unwrap(),
                    y.degree().unwrap(),
                    z.degree().unwrap(),
                );
                // reversing three odd-shifted inputs
                let k = dx * dy + dx * dz + dy * dz;
                let s = if k % 2 == 0 { 1 } else { -1 };
                assert_eq!(fwd, back.scale(&int(s)), "{x} | {y} | {z}");
            }
        }
    }
}

#[test]
fn weight_and_degree_bookkeeping() {
    let xs = sample_elements();
    for x in &xs {
        let d = q_diff(x);
        if !d.is_zero() {
            assert_eq!(d.weight(), x.weight());
            assert_eq!(d.degree(), x.degree().map(|k| k + 1));
        }
        for y in &xs {
            let y = shift(y, 10);
            let a = *x.labels().iter().next().unwrap();
            let b = *y.labels().iter().next().unwrap();
            let r = q_compose2(x, a, &y, b).unwrap();
            if !r.is_zero() {
                assert_eq!(
                    r.weight().unwrap(),
                    x.weight().unwrap() + y.weight().unwrap()
                );
                assert_eq!(
                    r.degree().unwrap(),
                    x.degree().unwrap() + y.degree().unwrap() + 1
                );
            }
        }
    }
}

#[test]
fn equivariance_of_diff_and_binary() {
    let rot: BTreeMap<Label, Label> = [
        (Label(1), Label(2)),
        (Label(2), Label(3)),
        (Label(3), Label(1)),
    ]
    .into();
    for x in sample_elements()
        .into_iter()
        .filter(|e| e.labels().len() == 3)
    {
        assert_eq!(
            q_relabel(&q_diff(&x), &rot).unwrap(),
            q_diff(&q_relabel(&x, &rot).unwrap())
        );
        for k in 1..=3 {
            let y = u(k, 10, 11);
            let lhs = q_relabel(
                &q_compose2(&x, Label(1), &y, Label(10)).unwrap(),
                &rot_with(&[(11, 11)], &rot),
            )
            .unwrap();
            let rhs = q_compose2(&q_relabel(&x, &rot).unwrap(), Label(2), &y, Label(10)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}

fn rot_with(extra: &[(u32, u32)], base: &BTreeMap<Label, Label>) -> BTreeMap<Label, Label> {
    let mut m = base.clone();
    m.remove(&Label(1));
    m.insert(Label(3), Label(1));
    for (a, b) in extra {
        m.insert(Label(*a), Label(*b));
    }
    m.retain(|k, _| *k != Label(1));
    m
}

#[test]
fn telescoping_arity_three() {
    // X = c ⊗ p, Y = u^{n+1}, Z = c ⊗ q
    for n in 0..=3u32 {
        for ea in 0..=n + 1 {
            let x = p(c(&[1, 2, 9]), &[(9, ea), (1, 1)]);
            let z = p(c(&[10, 3, 4]), &[(10, n + 1 - ea)]);
            let y = u(n + 1, 20, 21);
            let r = relation_residual(&[x, y, z], &[(Label(9), Label(20)), (Label(21), Label(10))])
                .unwrap();
            assert!(r.is_zero(), "{r}");
        }
    }
}

#[test]
fn three_term_cancellation_arity_four() {
    for m in 0..=2u32 {
        for n in 0..=2u32 {
            for ea in 0..=m + n + 1 {
                let x = p(c(&[1, 2, 9]), &[(9, ea)]);
                let w = p(c(&[40, 3, 4]), &[(40, m + n + 1 - ea)]);
                let chain = [x, u(m + 1, 20, 21), u(n + 1, 30, 31), w];
                let glue = [
                    (Label(9), Label(20)),
                    (Label(21), Label(30)),
                    (Label(31), Label(40)),
                ];
                assert!(relation_residual(&chain, &glue).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn small_sweep_passes() {
    let rep = verify_homotopy_relations(5, 2, 3);
    assert!(rep.passed(), "{:?}", rep.failures);
    assert!(rep.stats.iter().all(|s| s.tuples > 0));
    assert!(rep.stats[4].evaluated > 0);
}

#[test]
fn arity_three_relation_is_not_vacuous() {
    // μ₃ needs e_a + e_c + 1 = n and the nested μ₂ needs e_a ≥ n, so the two
    // never fire on one tuple; check each against a residual that vanishes
    let y = u(3, 20, 21);
    let z = p(c(&[10, 3, 4]), &[]);
    let glue = [(Label(9), Label(20)), (Label(21), Label(10))];
    for e in [2, 3] {
        let x = p(c(&[1, 2, 9]), &[(9, e)]);
        let nested = q_compose2(
            &q_compose2(&x, Label(9), &y, Label(20)).unwrap(),
            Label(21),
            &z,
            Label(10),
        )
        .unwrap();
        let ternary = q_compose3(&x, Label(9), &y, Label(20), Label(21), &z, Label(10)).unwrap();
        let term = if e == 3 { nested } else { ternary };
        assert!(!term.is_zero(), "e = {e}");
        let residual = relation_residual(&[x.clone(), y.clone(), z.clone()], &glue).unwrap();
        assert!(residual.is_zero(), "e = {e}");
        assert!(!residual.add(&term).unwrap().is_zero());
    }
}

#[test]
#[ignore]
fn full_sweep_timing() {
    let (a, v, k) = std::env::var("SWEEP")
        .ok()
        .map(|s| {
            let p: Vec<u32> = s.split(',').map(|t| t.parse().unwrap()).collect();
            (p[0] as usize, p[1], p[2])
        })
        .unwrap_or((8, 3, 4));
    let rep = verify_homotopy_relations(a, v, k);
    for s in &rep.stats {
        eprintln!("{s:?}");
    }
    assert!(rep.passed(), "{:?}", rep.failures);
}
