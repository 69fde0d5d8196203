//! Multi-index combinatorics, genus-zero ψ-class intersection numbers
//! `⟨τ^i⟩_0`, their topological recursion relations, and the symmetric
//! polynomials `p_n`.

mod pn;
mod poly;
mod sweep;

pub use pn::{check_p_identity, p_identity_residual, p_polynomial, p_polynomial_on};
pub use poly::{Monomial, SymPoly};
pub use sweep::{multi_indices, p_identity_sweep, recursion_sweep, PIdentityRow, RecursionReport};

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::linalg::{factorial, factorial_q, Rational};
use crate::{Error, Result};

/// Dense multi-index `(i_0, i_1, …)`; trailing zeros are insignificant.
#[derive(Clone, Debug, Default, Eq)]
pub struct MultiIndex(pub Vec<u32>);

impl PartialEq for MultiIndex {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl MultiIndex {
    pub fn new(entries: impl Into<Vec<u32>>) -> Self {
        MultiIndex(entries.into())
    }

    fn trimmed(&self) -> &[u32] {
        let end = self.0.iter().rposition(|&x| x != 0).map_or(0, |p| p + 1);
        &self.0[..end]
    }

    pub fn get(&self, k: usize) -> u32 {
        self.0.get(k).copied().unwrap_or(0)
    }

    /// `|i| = i_0 + i_1 + …`
    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `i! = i_0! i_1! ⋯`
    pub fn factorial(&self) -> Rational {
        self.0
            .iter()
            .fold(Rational::from_integer(1.into()), |acc, &k| {
                acc * factorial_q(k)
            })
    }

    /// The multi-index with one more `τ_k`.
    pub fn with(&self, k: usize) -> MultiIndex {
        let mut v = self.0.clone();
        if v.len() <= k {
            v.resize(k + 1, 0);
        }
        v[k] += 1;
        MultiIndex(v)
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        let len = self.0.len().max(other.0.len());
        MultiIndex((0..len).map(|k| self.get(k) + other.get(k)).collect())
    }

    /// All componentwise splittings `i = i' + i''`.
    pub fn splittings(&self) -> Vec<(MultiIndex, MultiIndex)> {
        let mut out = vec![(Vec::new(), Vec::new())];
        for &x in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (x as usize + 1));
            for (a, b) in &out {
                for t in 0..=x {
                    let mut a2: Vec<u32> = a.clone();
                    let mut b2: Vec<u32> = b.clone();
                    a2.push(t);
                    b2.push(x - t);
                    next.push((a2, b2));
                }
            }
            out = next;
        }
        out.into_iter()
            .map(|(a, b)| (MultiIndex(a), MultiIndex(b)))
            .collect()
    }

    /// Multi-index counting the entries of a list of exponents:
    /// the inverse of [`lambda_of`] up to ordering.
    pub fn from_exponents(exps: impl IntoIterator<Item = u32>) -> MultiIndex {
        let mut m = MultiIndex::default();
        for e in exps {
            m = m.with(e as usize);
        }
        m
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    /// Accepts `3`, `2,1`, `(4,0,1)` and whitespace variants.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        if t.trim().is_empty() {
            return Err(Error::InvalidInput("empty multi-index".into()));
        }
        let entries = t
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidInput(format!("bad multi-index entry {x:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        if entries.len() > 64 || entries.iter().map(|&e| e as u64).sum::<u64>() > 64 {
            return Err(Error::InvalidInput("multi-index too large".into()));
        }
        Ok(MultiIndex(entries))
    }
}

/// `λ(i) = (0,…,0, 1,…,1, …)` with `i_k` copies of `k`.
pub fn lambda_of(i: &MultiIndex) -> MultiIndex {
    MultiIndex(
        i.0.iter()
            .enumerate()
            .flat_map(|(k, &c)| std::iter::repeat_n(k as u32, c as usize))
            .collect(),
    )
}

/// Closed formula `⟨τ^i⟩_0 = (n−3)!/∏λ_α!` when `|λ(i)| = n−3`, else 0.
pub fn tau_bracket(i: &MultiIndex) -> Result<Rational> {
    let n = i.total();
    if n < 3 {
        return Err(Error::InvalidInput(format!(
            "⟨τ^i⟩_0 needs at least 3 points, got {n}"
        )));
    }
    Ok(bracket(i))
}

/// Intersection number with the convention that unstable brackets
/// (fewer than three points) vanish.
fn bracket(i: &MultiIndex) -> Rational {
    let n = i.total();
    if n < 3 {
        return Rational::zero();
    }
    let lambda = lambda_of(i);
    if lambda.total() != n - 3 {
        return Rational::zero();
    }
    let denom = lambda
        .0
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, &l| acc * factorial(l));
    Rational::new(factorial(n - 3), denom)
}

fn taus(base: &MultiIndex, extra: &[u32]) -> MultiIndex {
    extra.iter().fold(base.clone(), |m, &k| m.with(k as usize))
}

/// Both sides of the genus-zero topological recursion
/// `(1/i!)⟨τ_{a+1}τ_bτ_c τ^i⟩ = Σ (1/(i'!i''!)) ⟨τ_aτ_0τ^{i'}⟩⟨τ_bτ_cτ_0τ^{i''}⟩`.
pub fn recursion_asym_sides(a: u32, b: u32, c: u32, i: &MultiIndex) -> (Rational, Rational) {
    let lhs = bracket(&taus(i, &[a + 1, b, c])) / i.factorial();
    let rhs = i
        .splittings()
        .into_iter()
        .fold(Rational::zero(), |acc, (i1, i2)| {
            acc + bracket(&taus(&i1, &[a, 0])) * bracket(&taus(&i2, &[b, c, 0]))
                / (i1.factorial() * i2.factorial())
        });
    (lhs, rhs)
}

pub fn check_recursion_asym(a: u32, b: u32, c: u32, i: &MultiIndex) -> bool {
    let (l, r) = recursion_asym_sides(a, b, c, i);
    l == r
}

/// Both sides of the symmetrized recursion
/// `(1/j!)(⟨τ_{a+1}τ_bτ^j⟩ + ⟨τ_aτ_{b+1}τ^j⟩) = Σ (1/(j'!j''!)) ⟨τ_aτ_0τ^{j'}⟩⟨τ_bτ_0τ^{j''}⟩`.
pub fn recursion_sym_sides(a: u32, b: u32, j: &MultiIndex) -> Result<(Rational, Rational)> {
    if j.get(0) == 0 {
        return Err(Error::InvalidInput(
            "symmetric recursion needs j_0 ≥ 1".into(),
        ));
    }
    let lhs = (bracket(&taus(j, &[a + 1, b])) + bracket(&taus(j, &[a, b + 1]))) / j.factorial();
    let rhs = j
        .splittings()
        .into_iter()
        .fold(Rational::zero(), |acc, (j1, j2)| {
            acc + bracket(&taus(&j1, &[a, 0])) * bracket(&taus(&j2, &[b, 0]))
                / (j1.factorial() * j2.factorial())
        });
    Ok((lhs, rhs))
}

pub fn check_recursion_sym(a: u32, b: u32, j: &MultiIndex) -> Result<bool> {
    recursion_sym_sides(a, b, j).map(|(l, r)| l == r)
}
