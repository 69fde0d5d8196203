//! Exhaustive sweeps over the ψ-class identities.

use rayon::prelude::*;
use serde::Serialize;

use super::{check_p_identity, check_recursion_asym, check_recursion_sym, MultiIndex};
use crate::label::Label;
use crate::Result;

#[derive(Clone, Debug, Serialize)]
pub struct RecursionReport {
    pub max_n: u32,
    pub max_abc: u32,
    pub asym_checked: u64,
    pub sym_checked: u64,
    /// Failing instances rendered as `asym a,b,c (i)` or `sym a,b (j)`.
    pub failures: Vec<String>,
}

impl RecursionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All multi-indices of length `len` with entries summing to at most `max_total`.
pub fn multi_indices(len: usize, max_total: u32) -> Vec<MultiIndex> {
    fn go(len: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() == len {
            out.push(MultiIndex::new(prefix.clone()));
            return;
        }
        for x in 0..=left {
            prefix.push(x);
            go(len, left - x, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(len, max_total, &mut Vec::new(), &mut out);
    out
}

/// Checks both recursions for every bracket with at most `max_n` points and
/// every `a, b, c ≤ max_abc`. Multi-indices range over `τ_0, …, τ_{max_n}`,
/// which covers every exponent that can give a nonzero bracket.
pub fn recursion_sweep(max_n: u32, max_abc: u32) -> RecursionReport {
    let len = max_n as usize + 1;
    let asym_is = multi_indices(len, max_n.saturating_sub(3));
    let sym_js: Vec<MultiIndex> = multi_indices(len, max_n.saturating_sub(2))
        .into_iter()
        .filter(|j| j.get(0) >= 1)
        .collect();
    let abc: Vec<(u32, u32, u32)> = (0..=max_abc)
        .flat_map(|a| (0..=max_abc).flat_map(move |b| (0..=max_abc).map(move |c| (a, b, c))))
        .collect();
    let mut failures: Vec<String> = abc
        .par_iter()
        .flat_map_iter(|&(a, b, c)| {
            asym_is
                .iter()
                .filter(move |i| !check_recursion_asym(a, b, c, i))
                .map(move |i| format!("asym {a},{b},{c} {i}"))
        })
        .collect();
    let pairs: Vec<(u32, u32)> = (0..=max_abc)
        .flat_map(|a| (0..=max_abc).map(move |b| (a, b)))
        .collect();
    failures.extend(
        pairs
            .par_iter()
            .flat_map_iter(|&(a, b)| {
                sym_js
                    .iter()
                    .filter(move |j| !check_recursion_sym(a, b, j).unwrap_or(false))
                    .map(move |j| format!("sym {a},{b} {j}"))
            })
            .collect::<Vec<_>>(),
    );
    RecursionReport {
        max_n,
        max_abc,
        asym_checked: (abc.len() * asym_is.len()) as u64,
        sym_checked: (pairs.len() * sym_js.len()) as u64,
        failures,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PIdentityRow {
    pub size: usize,
    pub pairs: usize,
    pub passed: bool,
}

/// The identity for `A = {1, …, m}`, `3 ≤ m ≤ max_size`, and every ordered
/// pair `i ≠ j` in `A`.
pub fn p_identity_sweep(max_size: usize) -> Result<Vec<PIdentityRow>> {
    (3..=max_size)
        .into_par_iter()
        .map(|m| {
            let a: Vec<Label> = (1..=m as u32).map(Label).collect();
            let mut passed = true;
            let mut pairs = 0;
            for &i in &a {
                for &j in &a {
                    if i != j {
                        pairs += 1;
                        passed &= check_p_identity(&a, i, j)?;
                    }
                }
            }
            Ok(PIdentityRow {
                size: m,
                pairs,
                passed,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_counts() {
        // compositions of at most 2 into 3 parts: 1 + 3 + 6
        assert_eq!(multi_indices(3, 2).len(), 10);
    }

    #[test]
    fn small_sweeps_pass() {
        let r = recursion_sweep(6, 2);
        assert!(r.passed(), "{:?}", r.failures);
        assert!(r.asym_checked > 0 && r.sym_checked > 0);
        assert!(p_identity_sweep(5).unwrap().iter().all(|r| r.passed));
    }
}
