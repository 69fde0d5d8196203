use std::collections::BTreeMap;

use num_traits::Zero;

use super::Rational;
use crate::{Error, Result};

/// Sparse matrix over ℚ stored column-wise. Entries are never zero and
/// positions are unique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, Rational)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.columns[i].push((i, Rational::from_integer(1.into())));
        }
        m
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicate positions
    /// are summed and zeros dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::InvalidInput(format!(
                    "entry ({r},{c}) outside a {rows}x{cols} matrix"
                )));
            }
            *acc[c].entry(r).or_insert_with(Rational::zero) += v;
        }
        Ok(Self::from_column_maps(rows, acc))
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        let trip = rows.iter().enumerate().flat_map(|(i, r)| {
            r.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(move |(j, v)| (i, j, Rational::from_integer((*v).into())))
        });
        Self::from_triplets(nr, nc, trip).expect("dense input is in range")
    }

    pub(crate) fn from_column_maps(rows: usize, cols: Vec<BTreeMap<usize, Rational>>) -> Self {
        let columns = cols
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect::<Vec<_>>();
        SparseMatrix {
            rows,
            cols: columns.len(),
            columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &[(usize, Rational)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.columns[c]
            .binary_search_by_key(&r, |(i, _)| *i)
            .map(|k| self.columns[c][k].1.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Self {
        let mut cols: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); self.rows];
        for (r, c, v) in self.triplets() {
            cols[r].insert(c, v.clone());
        }
        Self::from_column_maps(self.cols, cols)
    }

    /// Row-major sparse rows.
    pub fn row_lists(&self) -> Vec<Vec<(usize, Rational)>> {
        let mut rows = vec![Vec::new(); self.rows];
        for (r, c, v) in self.triplets() {
            rows[r].push((c, v.clone()));
        }
        rows
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::InvalidInput(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let cols = rhs
            .columns
            .iter()
            .map(|rc| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, b) in rc {
                    for (i, a) in &self.columns[*k] {
                        *acc.entry(*i).or_insert_with(Rational::zero) += a * b;
                    }
                }
                acc
            })
            .collect();
        Ok(Self::from_column_maps(self.rows, cols))
    }

    pub fn sub(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::InvalidInput("shape mismatch in subtraction".into()));
        }
        let cols = (0..self.cols)
            .map(|c| {
                let mut acc: BTreeMap<usize, Rational> = self.columns[c].iter().cloned().collect();
                for (r, v) in &rhs.columns[c] {
                    *acc.entry(*r).or_insert_with(Rational::zero) -= v;
                }
                acc
            })
            .collect();
        Ok(Self::from_column_maps(self.rows, cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::int;

    #[test]
    fn triplets_sum_and_drop_zeros() {
        let m = SparseMatrix::from_triplets(
            2,
            2,
            vec![(0, 0, int(1)), (0, 0, int(-1)), (1, 1, int(3))],
        )
        .unwrap();
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), int(3));
        assert_eq!(m.get(0, 0), int(0));
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(SparseMatrix::from_triplets(1, 1, vec![(1, 0, int(1))]).is_err());
    }

    #[test]
    fn product_and_transpose() {
        let a = SparseMatrix::from_dense(&[vec![1, 2], vec![0, 1]]);
        let b = SparseMatrix::from_dense(&[vec![1, 0], vec![3, 1]]);
        let p = a.mul(&b).unwrap();
        assert_eq!(p, SparseMatrix::from_dense(&[vec![7, 2], vec![3, 1]]));
        assert_eq!(
            a.transpose(),
            SparseMatrix::from_dense(&[vec![1, 0], vec![2, 1]])
        );
    }
}
