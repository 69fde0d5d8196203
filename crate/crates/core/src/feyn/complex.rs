//! Assembly of graph complexes from a basis and a differential.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;

use super::dgraph::DGraph;
use crate::linalg::{ComplexLabel, GradedComplex, SparseMatrix};
use crate::{Error, Rational, Result};

/// Linear combination of canonical graphs.
pub type Combination = BTreeMap<DGraph, Rational>;

/// A graph complex together with its basis graphs.
#[derive(Clone, Debug)]
pub struct GraphComplex {
    pub label: ComplexLabel,
    pub basis: BTreeMap<i32, Vec<DGraph>>,
    pub index: HashMap<DGraph, (i32, usize)>,
    pub complex: GradedComplex,
}

impl GraphComplex {
    pub fn dim(&self) -> usize {
        self.index.len()
    }

    /// Coordinates of a combination: degree and (index, coefficient) pairs.
    /// Fails if a term is not a basis vector or degrees are mixed.
    pub fn coordinates(&self, c: &Combination) -> Result<Option<(i32, Vec<(usize, Rational)>)>> {
        let mut deg = None;
        let mut out = Vec::new();
        for (g, q) in c {
            let &(d, i) = self
                .index
                .get(g)
                .ok_or_else(|| Error::MalformedComplex(format!("{g} is not a basis vector")))?;
            if deg.is_some_and(|e| e != d) {
                return Err(Error::MalformedComplex("combination mixes degrees".into()));
            }
            deg = Some(d);
            out.push((i, q.clone()));
        }
        Ok(deg.map(|d| (d, out)))
    }
}

pub(crate) fn assemble<D>(
    label: ComplexLabel,
    basis: Vec<DGraph>,
    degree: fn(&DGraph) -> i32,
    weight: fn(&DGraph) -> i32,
    d: D,
) -> Result<GraphComplex>
where
    D: Fn(&DGraph) -> Result<Combination> + Sync,
{
    let mut by_degree: BTreeMap<i32, Vec<DGraph>> = BTreeMap::new();
    for g in basis {
        if weight(&g) != label.weight {
            return Err(Error::MalformedComplex(format!(
                "{g} has weight {} ≠ {}",
                weight(&g),
                label.weight
            )));
        }
        by_degree.entry(degree(&g)).or_default().push(g);
    }
    let mut index = HashMap::new();
    for (&deg, gs) in &mut by_degree {
        gs.sort();
        gs.dedup();
        for (i, g) in gs.iter().enumerate() {
            index.insert(g.clone(), (deg, i));
        }
    }
    let mut complex = GradedComplex::new(label);
    for (&deg, gs) in &by_degree {
        complex
            .bases
            .insert(deg, gs.iter().map(ToString::to_string).collect());
        let rows = by_degree.get(&(deg + 1)).map_or(0, Vec::len);
        let columns: Vec<Vec<(usize, usize, Rational)>> = gs
            .par_iter()
            .enumerate()
            .map(|(col, g)| {
                let mut entries = Vec::new();
                for (h, c) in d(g)? {
                    match index.get(&h) {
                        Some(&(e, row)) if e == deg + 1 => entries.push((row, col, c)),
                        _ => {
                            return Err(Error::MalformedComplex(format!(
                                "d({g}) has the term {h} outside degree {} of the basis",
                                deg + 1
                            )))
                        }
                    }
                }
                Ok(entries)
            })
            .collect::<Result<_>>()?;
        let m = SparseMatrix::from_triplets(rows, gs.len(), columns.into_iter().flatten())?;
        if rows > 0 {
            complex.differentials.insert(deg, m);
        } else if !m.is_zero() {
            return Err(Error::MalformedComplex(format!(
                "nonzero differential out of top degree {deg}"
            )));
        }
    }
    Ok(GraphComplex {
        label,
        basis: by_degree,
        index,
        complex,
    })
}
