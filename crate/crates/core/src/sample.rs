//! Node-indexed observations.
//!
//! A [`SampleMatrix`] holds one `v`-dimensional observation per network node:
//! row `i` is the outcome vector of node `i`. All entries must be finite.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// `n x v` matrix of observations; row `i` belongs to node `i` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    data: DMatrix<f64>,
}

impl SampleMatrix {
    /// Wrap a dense matrix, requiring at least one row and column and all
    /// entries finite.
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        if data.nrows() == 0 || data.ncols() == 0 {
            return Err(Error::Empty {
                what: "sample matrix",
            });
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                what: "sample matrix",
            });
        }
        Ok(SampleMatrix { data })
    }

    /// Build from per-node rows; every row must have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Empty {
                what: "sample matrix",
            });
        }
        let v = rows[0].len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != v {
                return Err(Error::DimensionMismatch {
                    what: "sample row",
                    expected: v,
                    actual: rows[i].len(),
                });
            }
        }
        let data = DMatrix::from_fn(rows.len(), v, |i, j| rows[i][j]);
        Self::new(data)
    }

    /// Build a univariate sample (`v = 1`).
    pub fn from_column(col: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_fn(col.len(), 1, |i, _| col[i]))
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.data.nrows()
    }

    /// Observation dimension.
    pub fn v(&self) -> usize {
        self.data.ncols()
    }

    /// Entry accessor.
    pub fn get(&self, node: usize, coord: usize) -> f64 {
        self.data[(node, coord)]
    }

    /// Underlying dense matrix.
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    /// Sample mean across nodes: a `v`-vector.
    pub fn mean(&self) -> DVector<f64> {
        let n = self.n() as f64;
        DVector::from_fn(self.v(), |j, _| self.data.column(j).sum() / n)
    }

    /// Matrix of row deviations from the sample mean.
    pub fn demeaned(&self) -> DMatrix<f64> {
        let m = self.mean();
        let mut x = self.data.clone();
        for i in 0..x.nrows() {
            for j in 0..x.ncols() {
                x[(i, j)] -= m[j];
            }
        }
        x
    }
}
