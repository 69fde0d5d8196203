use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SparseMatrix;

/// How ranks are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    /// Fraction-free elimination over ℚ only.
    Exact,
    /// Rank modulo two random primes above 2^30; exact elimination only if
    /// they disagree.
    Modular { seed: u64 },
    /// Modular first, then confirmed over ℚ. A disagreement is resolved in
    /// favour of the exact rank.
    Verified { seed: u64 },
}

type IntRow = Vec<(usize, BigInt)>;

/// Exact rank over ℚ.
pub fn rank(m: &SparseMatrix) -> usize {
    let (rows, _) = integer_rows(m);
    echelon_rank(rows)
}

pub fn rank_checked(m: &SparseMatrix, mode: RankMode) -> usize {
    match mode {
        RankMode::Exact => rank(m),
        RankMode::Modular { seed } => {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (m.rows() as u64) << 20 ^ m.cols() as u64);
            let r1 = rank_mod_p(m, random_prime(&mut rng));
            let r2 = rank_mod_p(m, random_prime(&mut rng));
            if r1 == r2 {
                r1
            } else {
                rank(m)
            }
        }
        RankMode::Verified { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let _modular = rank_mod_p(m, random_prime(&mut rng));
            rank(m)
        }
    }
}

/// Column permutation putting sparse columns first (a cheap Markowitz
/// heuristic), together with the rows scaled to primitive integer vectors.
fn integer_rows(m: &SparseMatrix) -> (Vec<IntRow>, Vec<usize>) {
    let mut counts = vec![0usize; m.cols()];
    for (_, c, _) in m.triplets() {
        counts[c] += 1;
    }
    let mut order: Vec<usize> = (0..m.cols()).collect();
    order.sort_by_key(|&c| (counts[c], c));
    let mut newpos = vec![0usize; m.cols()];
    for (k, &c) in order.iter().enumerate() {
        newpos[c] = k;
    }
    let rows = m
        .row_lists()
        .into_iter()
        .filter(|r| !r.is_empty())
        .map(|r| {
            let lcm = r
                .iter()
                .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
            let mut row: IntRow = r
                .into_iter()
                .map(|(c, v)| (newpos[c], v.numer() * (&lcm / v.denom())))
                .collect();
            row.sort_by_key(|(c, _)| *c);
            make_primitive(&mut row);
            row
        })
        .collect();
    (rows, newpos)
}

fn make_primitive(row: &mut IntRow) {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    if let Some((_, lead)) = row.first() {
        if lead.is_negative() {
            for (_, v) in row.iter_mut() {
                *v = -&*v;
            }
        }
    }
}

/// `a*x - b*y` on sparse rows.
fn combine(x: &IntRow, a: &BigInt, y: &IntRow, b: &BigInt) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn echelon_rank(mut rows: Vec<IntRow>) -> usize {
    rows.sort_by_key(|r| (r.len(), r.first().map(|e| e.0)));
    let mut pivots: std::collections::HashMap<usize, IntRow> = std::collections::HashMap::new();
    for mut row in rows {
        while let Some((lead, _)) = row.first() {
            let Some(p) = pivots.get(lead) else { break };
            let g = p[0].1.gcd(&row[0].1);
            let a = &p[0].1 / &g;
            let b = &row[0].1 / &g;
            row = combine(&row, &a, p, &b);
            make_primitive(&mut row);
        }
        if let Some((lead, _)) = row.first() {
            pivots.insert(*lead, row);
        }
    }
    pivots.len()
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// A uniformly chosen prime in `[2^30, 2^31)`.
pub fn random_prime<R: Rng>(rng: &mut R) -> u64 {
    loop {
        let c = rng.gen_range((1u64 << 30)..(1u64 << 31)) | 1;
        if is_prime(c) {
            return c;
        }
    }
}

fn reduce_mod(v: &num_rational::BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let n = v.numer().mod_floor(&pb);
    let d = v.denom().mod_floor(&pb);
    if d.is_zero() {
        return None;
    }
    let n: u64 = n.try_into().ok()?;
    let d: u64 = d.try_into().ok()?;
    Some(mul_mod(n, pow_mod(d, p - 2, p), p))
}

/// Rank over 𝔽_p. Entries whose denominator vanishes mod `p` make the
/// result meaningless; in that case the exact rank is returned instead.
pub fn rank_mod_p(m: &SparseMatrix, p: u64) -> usize {
    let mut rows: Vec<Vec<(usize, u64)>> = Vec::new();
    for r in m.row_lists() {
        let mut row = Vec::with_capacity(r.len());
        for (c, v) in r {
            match reduce_mod(&v, p) {
                Some(0) => {}
                Some(x) => row.push((c, x)),
                None => return rank(m),
            }
        }
        if !row.is_empty() {
            rows.push(row);
        }
    }
    rows.sort_by_key(|r| (r.len(), r[0].0));
    let mut pivots: std::collections::HashMap<usize, Vec<(usize, u64)>> =
        std::collections::HashMap::new();
    for mut row in rows {
        loop {
            let Some(&(lead, lv)) = row.first() else {
                break;
            };
            let Some(piv) = pivots.get(&lead) else {
                let inv = pow_mod(lv, p - 2, p);
                for e in row.iter_mut() {
                    e.1 = mul_mod(e.1, inv, p);
                }
                pivots.insert(lead, row);
                break;
            };
            // piv is normalized to leading coefficient 1
            let mut out = Vec::with_capacity(row.len() + piv.len());
            let (mut i, mut j) = (0, 0);
            while i < row.len() || j < piv.len() {
                if j >= piv.len() || (i < row.len() && row[i].0 < piv[j].0) {
                    out.push(row[i]);
                    i += 1;
                } else if i >= row.len() || piv[j].0 < row[i].0 {
                    out.push((piv[j].0, (p - mul_mod(lv, piv[j].1, p)) % p));
                    j += 1;
                } else {
                    let v = (row[i].1 + p - mul_mod(lv, piv[j].1, p)) % p;
                    if v != 0 {
                        out.push((row[i].0, v));
                    }
                    i += 1;
                    j += 1;
                }
            }
            row = out;
        }
    }
    pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, SparseMatrix};
    use proptest::prelude::*;

    #[test]
    fn spec_examples() {
        assert_eq!(
            rank(&SparseMatrix::from_dense(&[vec![1, 2], vec![2, 4]])),
            1
        );
        assert_eq!(rank(&SparseMatrix::zero(0, 0)), 0);
        assert_eq!(rank(&SparseMatrix::identity(5)), 5);
    }

    #[test]
    fn rational_entries() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            vec![
                (0, 0, rat(1, 2)),
                (0, 1, rat(1, 3)),
                (1, 0, rat(3, 2)),
                (1, 1, rat(1, 1)),
            ],
        )
        .unwrap();
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn primes_are_large() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let p = random_prime(&mut rng);
            assert!(p > 1 << 30 && is_prime(p));
        }
        assert!(is_prime(2147483647));
        assert!(!is_prime(2147483649));
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r)
        })
    }

    proptest! {
        #[test]
        fn rank_equals_rank_of_transpose(d in small_matrix()) {
            let m = SparseMatrix::from_dense(&d);
            prop_assert_eq!(rank(&m), rank(&m.transpose()));
        }

        #[test]
        fn rank_agrees_mod_large_prime(d in small_matrix(), seed in 0u64..1000) {
            let m = SparseMatrix::from_dense(&d);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_prime(&mut rng);
            prop_assert_eq!(rank(&m), rank_mod_p(&m, p));
            prop_assert_eq!(rank(&m), rank_checked(&m, RankMode::Modular { seed }));
        }
    }
}
