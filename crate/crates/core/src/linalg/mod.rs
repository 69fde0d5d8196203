//! Exact rational linear algebra: sparse matrices, ranks over ℚ and over
//! prime fields, and cohomology of finite cochain complexes.

mod complex;
mod matrix;
mod rank;

pub use complex::{
    cohomology_dims, euler_characteristic, verify_d_squared, ComplexLabel, GradedComplex, Side,
};
pub use matrix::SparseMatrix;
pub use rank::{random_prime, rank, rank_checked, rank_mod_p, RankMode};

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision rational number, always kept in lowest terms.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a rational as `a` or `a/b`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b == BigInt::from(0) {
                return None;
            }
            Some(BigRational::new(a, b))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

pub(crate) fn factorial(n: u32) -> BigInt {
    use std::sync::OnceLock;
    static CACHE: OnceLock<Vec<BigInt>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| {
        let mut v = vec![BigInt::from(1)];
        for k in 1..=64u32 {
            let next = &v[(k - 1) as usize] * BigInt::from(k);
            v.push(next);
        }
        v
    });
    if (n as usize) < cache.len() {
        return cache[n as usize].clone();
    }
    (65..=n).fold(cache[64].clone(), |acc, k| acc * BigInt::from(k))
}

pub(crate) fn factorial_q(n: u32) -> Rational {
    BigRational::from_integer(factorial(n))
}
