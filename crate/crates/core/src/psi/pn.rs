use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use super::{bracket, lambda_of, Monomial, MultiIndex, SymPoly};
use crate::linalg::Rational;
use crate::{Error, Label, Result};

/// Multi-indices `i` with `|i| = n` and `|λ(i)| = n − 3`.
fn admissible_indices(n: u32) -> Vec<MultiIndex> {
    fn parts(rem: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rem == 0 {
            out.push(acc.clone());
            return;
        }
        for k in (1..=max.min(rem)).rev() {
            acc.push(k);
            parts(rem - k, k, acc, out);
            acc.pop();
        }
    }
    let mut ps = Vec::new();
    parts(n - 3, n - 3, &mut Vec::new(), &mut ps);
    ps.into_iter()
        .filter(|p| p.len() as u32 <= n)
        .map(|p| {
            let zeros = n - p.len() as u32;
            MultiIndex::from_exponents(std::iter::repeat_n(0, zeros as usize).chain(p))
        })
        .collect()
}

/// Distinct arrangements of a multiset of exponents.
fn distinct_permutations(items: &[u32]) -> Vec<Vec<u32>> {
    let mut sorted = items.to_vec();
    sorted.sort_unstable();
    let mut counts: Vec<(u32, usize)> = Vec::new();
    for x in sorted {
        match counts.last_mut() {
            Some((y, c)) if *y == x => *c += 1,
            _ => counts.push((x, 1)),
        }
    }
    fn rec(counts: &mut [(u32, usize)], acc: &mut Vec<u32>, len: usize, out: &mut Vec<Vec<u32>>) {
        if acc.len() == len {
            out.push(acc.clone());
            return;
        }
        for k in 0..counts.len() {
            if counts[k].1 > 0 {
                counts[k].1 -= 1;
                acc.push(counts[k].0);
                rec(counts, acc, len, out);
                acc.pop();
                counts[k].1 += 1;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut counts, &mut Vec::new(), items.len(), &mut out);
    out
}

fn p_canonical(n: u32) -> SymPoly {
    static CACHE: OnceLock<Mutex<HashMap<u32, SymPoly>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("poisoned").get(&n) {
        return p.clone();
    }
    let vars: Vec<Label> = (0..n).map(Label).collect();
    let sign = if (n - 3).is_multiple_of(2) { 1 } else { -1 };
    let mut p = SymPoly::zero(vars.clone());
    for i in admissible_indices(n) {
        let lambda = lambda_of(&i);
        let lambda_fact = lambda
            .0
            .iter()
            .fold(Rational::from_integer(1.into()), |acc, &l| {
                acc * crate::linalg::factorial_q(l)
            });
        let tau = bracket(&i);
        // Σ_{σ ∈ S_n} σ·v^λ visits each distinct arrangement |Stab(λ)| = i! times.
        let stabilizer = i.factorial();
        let coeff =
            Rational::from_integer(sign.into()) * &stabilizer / i.factorial() / &lambda_fact * tau;
        for arrangement in distinct_permutations(&lambda.0) {
            p.add_term(
                Monomial::from_pairs(vars.iter().copied().zip(arrangement)),
                coeff.clone(),
            );
        }
    }
    cache.lock().expect("poisoned").insert(n, p.clone());
    p
}

/// The symmetric polynomial `p_n` in the variables `v_l`, `l ∈ labels`.
pub fn p_polynomial(n: usize, labels: &[Label]) -> Result<SymPoly> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("p_n needs n ≥ 3, got {n}")));
    }
    if labels.len() != n {
        return Err(Error::InvalidInput(format!(
            "p_{n} needs {n} labels, got {}",
            labels.len()
        )));
    }
    let mut sorted = labels.to_vec();
    sorted.sort();
    sorted.dedup();
    if sorted.len() != n {
        return Err(Error::InvalidInput("labels of p_n must be distinct".into()));
    }
    let p = p_canonical(n as u32);
    Ok(p.relabel(|l| labels[l.0 as usize]))
}

/// `p_A` for a label set `A`.
pub fn p_polynomial_on(labels: &[Label]) -> Result<SymPoly> {
    p_polynomial(labels.len(), labels)
}

/// Ordered splittings `A = A_1 ⊔ A_2` with `i ∈ A_1`, `j ∈ A_2` and both
/// parts of size ≥ 2.
pub(crate) fn separating_splits(a: &[Label], i: Label, j: Label) -> Vec<(Vec<Label>, Vec<Label>)> {
    let rest: Vec<Label> = a.iter().copied().filter(|l| *l != i && *l != j).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << rest.len()) {
        let mut a1 = vec![i];
        let mut a2 = vec![j];
        for (k, l) in rest.iter().enumerate() {
            if mask >> k & 1 == 1 {
                a1.push(*l);
            } else {
                a2.push(*l);
            }
        }
        if a1.len() >= 2 && a2.len() >= 2 {
            a1.sort();
            a2.sort();
            out.push((a1, a2));
        }
    }
    out
}

fn validate_pair(a: &[Label], i: Label, j: Label) -> Result<()> {
    if a.len() < 3 {
        return Err(Error::InvalidInput(
            "label set needs at least 3 elements".into(),
        ));
    }
    if i == j || !a.contains(&i) || !a.contains(&j) {
        return Err(Error::InvalidInput("need distinct i, j in A".into()));
    }
    if a.iter().any(|l| l.is_fresh()) {
        return Err(Error::InvalidInput(
            "labels collide with the reserved namespace".into(),
        ));
    }
    Ok(())
}

/// `(∂_{v_i}+∂_{v_j}) p_A + Σ_{A_1 ∋ i, A_2 ∋ j} p_{A_1⊔α} p_{A_2⊔β}|_{v_α=v_β=0}`,
/// which should vanish identically.
pub fn p_identity_residual(a: &[Label], i: Label, j: Label) -> Result<SymPoly> {
    validate_pair(a, i, j)?;
    let (alpha, beta) = (Label::fresh(0), Label::fresh(1));
    let p = p_polynomial_on(a)?;
    let mut total = p.derivative(i).add(&p.derivative(j));
    for (a1, a2) in separating_splits(a, i, j) {
        let mut s1 = a1.clone();
        s1.push(alpha);
        let mut s2 = a2.clone();
        s2.push(beta);
        let prod = p_polynomial_on(&s1)?
            .at_zero(alpha)
            .mul(&p_polynomial_on(&s2)?.at_zero(beta));
        total = total.add(&prod);
    }
    Ok(total)
}

pub fn check_p_identity(a: &[Label], i: Label, j: Label) -> Result<bool> {
    Ok(p_identity_residual(a, i, j)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{factorial, rat};
    use num_bigint::BigInt;

    fn labels(n: u32) -> Vec<Label> {
        (1..=n).map(Label).collect()
    }

    /// Independent closed form: coefficient of `v^e` in `p_n` is
    /// `(−1)^{n−3} (n−3)!/(e!)^2` for `|e| = n−3`.
    fn closed_form_coeff(n: u32, e: &[u32]) -> Rational {
        if e.iter().sum::<u32>() != n - 3 {
            return Rational::from_integer(0.into());
        }
        let ef = e.iter().fold(BigInt::from(1), |acc, &x| acc * factorial(x));
        let sign = if (n - 3).is_multiple_of(2) { 1 } else { -1 };
        Rational::new(factorial(n - 3) * sign, &ef * &ef)
    }

    fn all_exponents(n: usize, total: u32) -> Vec<Vec<u32>> {
        if n == 0 {
            return if total == 0 { vec![vec![]] } else { vec![] };
        }
        (0..=total)
            .flat_map(|k| {
                all_exponents(n - 1, total - k)
                    .into_iter()
                    .map(move |mut r| {
                        r.insert(0, k);
                        r
                    })
            })
            .collect()
    }

    #[test]
    fn printed_values() {
        assert_eq!(p_polynomial(3, &labels(3)).unwrap().to_string(), "1");
        assert_eq!(
            p_polynomial(4, &labels(4)).unwrap().to_string(),
            "-(v1+v2+v3+v4)"
        );
        let p5 = p_polynomial(5, &labels(5)).unwrap();
        assert_eq!(p5.coeff(&Monomial::from_pairs([(Label(1), 2)])), rat(1, 2));
        assert!(p_polynomial(2, &labels(2)).is_err());
        assert!(p_polynomial(3, &[Label(1), Label(1), Label(2)]).is_err());
    }

    #[test]
    fn defining_sum_matches_closed_form() {
        for n in 3..=8u32 {
            let p = p_polynomial(n as usize, &labels(n)).unwrap();
            let exps = all_exponents(n as usize, n - 3);
            assert_eq!(p.len(), exps.len());
            for e in exps {
                let m = Monomial::from_pairs(labels(n).into_iter().zip(e.iter().copied()));
                assert_eq!(p.coeff(&m), closed_form_coeff(n, &e), "n={n} e={e:?}");
            }
        }
    }

    #[test]
    fn symmetric_and_homogeneous() {
        for n in 3..=7u32 {
            let p = p_polynomial(n as usize, &labels(n)).unwrap();
            assert_eq!(p.homogeneous_degree().unwrap_or(0), n - 3);
            let shift = |l: Label| Label(l.0 % n + 1);
            let swap = |l: Label| match l.0 {
                1 => Label(2),
                2 => Label(1),
                _ => l,
            };
            assert_eq!(p.relabel(shift).sorted_terms(), p.sorted_terms());
            assert_eq!(p.relabel(swap).sorted_terms(), p.sorted_terms());
        }
    }

    #[test]
    fn identity_small_cases() {
        assert!(check_p_identity(&labels(3), Label(1), Label(2)).unwrap());
        for i in 1..=4 {
            for j in 1..=4 {
                if i != j {
                    assert!(check_p_identity(&labels(4), Label(i), Label(j)).unwrap());
                }
            }
        }
        assert!(check_p_identity(&labels(3), Label(1), Label(1)).is_err());
        assert!(check_p_identity(&labels(3), Label(1), Label(9)).is_err());
    }

    #[test]
    fn json_rendering() {
        let p = p_polynomial(4, &labels(4)).unwrap();
        let j = p.to_json();
        assert_eq!(j["n"], 4);
        assert_eq!(j["terms"][0]["exponents"], serde_json::json!([1, 0, 0, 0]));
        assert_eq!(j["terms"][0]["coeff"], "-1");
    }
}
