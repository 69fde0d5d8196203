use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{rank_checked, RankMode, SparseMatrix};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    FeynBv,
    AfeynQbv,
    /// Auxiliary complexes that are not one of the two graph complexes.
    Other,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::FeynBv => "feyn_bv",
            Side::AfeynQbv => "afeyn_qbv",
            Side::Other => "other",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ComplexLabel {
    pub g: u32,
    pub n: u32,
    pub weight: i32,
    pub side: Side,
}

/// A finite cochain complex: basis identifiers per cohomological degree and
/// the differential `d^{(k)}`: degree `k` → degree `k+1` as a matrix whose
/// columns are indexed by the degree-`k` basis.
#[derive(Clone, Debug)]
pub struct GradedComplex {
    pub label: ComplexLabel,
    pub bases: BTreeMap<i32, Vec<String>>,
    pub differentials: BTreeMap<i32, SparseMatrix>,
}

impl GradedComplex {
    pub fn new(label: ComplexLabel) -> Self {
        GradedComplex {
            label,
            bases: BTreeMap::new(),
            differentials: BTreeMap::new(),
        }
    }

    pub fn dim(&self, deg: i32) -> usize {
        self.bases.get(&deg).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.bases.values().map(Vec::len).sum()
    }

    /// Differential out of `deg`, or the zero map of the right shape.
    pub fn differential(&self, deg: i32) -> SparseMatrix {
        self.differentials
            .get(&deg)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zero(self.dim(deg + 1), self.dim(deg)))
    }

    pub fn check_shapes(&self) -> Result<()> {
        for (&d, m) in &self.differentials {
            if m.cols() != self.dim(d) || m.rows() != self.dim(d + 1) {
                return Err(Error::MalformedComplex(format!(
                    "d^({d}) is {}x{} but the bases have sizes {} -> {}",
                    m.rows(),
                    m.cols(),
                    self.dim(d),
                    self.dim(d + 1)
                )));
            }
        }
        Ok(())
    }
}

/// True iff every composite `d^{(k+1)} d^{(k)}` vanishes.
pub fn verify_d_squared(c: &GradedComplex) -> bool {
    c.differentials
        .iter()
        .all(|(&d, m)| match c.differentials.get(&(d + 1)) {
            Some(next) => next.mul(m).map(|p| p.is_zero()).unwrap_or(false),
            None => true,
        })
}

/// Nonzero cohomology dimensions by degree,
/// `dim H^k = dim C^k − rank d^{(k)} − rank d^{(k−1)}`.
pub fn cohomology_dims(c: &GradedComplex, mode: RankMode) -> Result<BTreeMap<i32, usize>> {
    c.check_shapes()?;
    let degs: Vec<i32> = c.differentials.keys().copied().collect();
    let ranks: BTreeMap<i32, usize> = degs
        .par_iter()
        .map(|&d| (d, rank_checked(&c.differentials[&d], mode)))
        .collect();
    let mut out = BTreeMap::new();
    for (&d, basis) in &c.bases {
        let h = basis.len()
            - ranks.get(&d).copied().unwrap_or(0)
            - ranks.get(&(d - 1)).copied().unwrap_or(0);
        if h > 0 {
            out.insert(d, h);
        }
    }
    Ok(out)
}

pub fn euler_characteristic<'a>(dims: impl IntoIterator<Item = (&'a i32, &'a usize)>) -> i64 {
    dims.into_iter()
        .map(|(d, n)| {
            if d.rem_euclid(2) == 0 {
                *n as i64
            } else {
                -(*n as i64)
            }
        })
        .sum()
}
