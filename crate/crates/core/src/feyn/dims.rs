//! Dimension tables in their JSON form:
//! `{"g":…,"n":…,"W":…,"side":"feyn_bv"|"afeyn_qbv","dims_by_degree":{"<degree>":…},"euler":…}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::complex::GraphComplex;
use crate::linalg::{cohomology_dims, euler_characteristic, RankMode};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TableSide {
    FeynBv,
    AfeynQbv,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DimsTable {
    pub g: u32,
    pub n: u32,
    #[serde(rename = "W")]
    pub weight: i32,
    pub side: TableSide,
    /// Cohomology dimensions keyed by degree (as decimal strings).
    pub dims_by_degree: BTreeMap<String, usize>,
    pub euler: i64,
}

impl DimsTable {
    pub fn from_complex(c: &GraphComplex, mode: RankMode) -> Result<DimsTable> {
        let side = match c.label.side {
            crate::linalg::Side::FeynBv => TableSide::FeynBv,
            crate::linalg::Side::AfeynQbv => TableSide::AfeynQbv,
            crate::linalg::Side::Other => {
                return Err(Error::InvalidInput("not a graph complex".into()))
            }
        };
        let dims = cohomology_dims(&c.complex, mode)?;
        Ok(DimsTable {
            g: c.label.g,
            n: c.label.n,
            weight: c.label.weight,
            side,
            euler: euler_characteristic(&dims),
            dims_by_degree: dims.iter().map(|(d, x)| (d.to_string(), *x)).collect(),
        })
    }

    /// Dimensions keyed by integer degree.
    pub fn dims(&self) -> Result<BTreeMap<i32, usize>> {
        self.dims_by_degree
            .iter()
            .map(|(k, v)| {
                k.parse::<i32>()
                    .map(|d| (d, *v))
                    .map_err(|_| Error::InvalidInput(format!("degree key {k:?}")))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    /// Parses and checks that the keys are degrees and that `euler`
    /// matches the table.
    pub fn from_json(s: &str) -> Result<DimsTable> {
        let t: DimsTable = serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        let dims = t.dims()?;
        let sum = dims.iter().try_fold(0i64, |acc, (d, x)| {
            let x = i64::try_from(*x).ok()?;
            if d.rem_euclid(2) == 0 {
                acc.checked_add(x)
            } else {
                acc.checked_sub(x)
            }
        });
        if sum != Some(t.euler) {
            return Err(Error::InvalidInput(
                "euler does not match dims_by_degree".into(),
            ));
        }
        Ok(t)
    }
}
