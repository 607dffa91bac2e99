//! Exactly-symmetric covariance matrices stored as a packed upper triangle.

use nalgebra::{DMatrix, DVector};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Tolerance on the worst asymmetry accepted by [`CovMatrix::from_dense`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// A `v x v` symmetric matrix that is symmetric by construction: only the
/// upper triangle is stored, so `m[(i, j)]` and `m[(j, i)]` read the same
/// memory and can never drift apart.
#[derive(Debug, Clone, PartialEq)]
pub struct CovMatrix {
    dim: usize,
    /// Row-major packed upper triangle: entry `(i, j)` with `i <= j` lives at
    /// `i * dim - i(i+1)/2 + j`.
    upper: Vec<f64>,
}

impl CovMatrix {
    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        let (r, c) = if i <= j { (i, j) } else { (j, i) };
        r * self.dim - r * (r + 1) / 2 + c
    }

    /// Build from a closure giving the upper-triangle entries `(i <= j)`.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut upper = Vec::with_capacity(dim * (dim + 1) / 2);
        for i in 0..dim {
            for j in i..dim {
                upper.push(f(i, j));
            }
        }
        CovMatrix { dim, upper }
    }

    /// Accept a dense matrix that is symmetric up to [`SYMMETRY_TOL`] and
    /// store the average of the two triangles.
    pub fn from_dense(m: &DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                what: "covariance matrix",
                expected: m.nrows(),
                actual: m.ncols(),
            });
        }
        let mut worst = 0.0f64;
        for i in 0..m.nrows() {
            for j in (i + 1)..m.ncols() {
                worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        if worst > SYMMETRY_TOL {
            return Err(Error::NotSymmetric {
                deviation: worst,
                tolerance: SYMMETRY_TOL,
            });
        }
        Ok(Self::from_upper_fn(m.nrows(), |i, j| {
            0.5 * (m[(i, j)] + m[(j, i)])
        }))
    }

    /// Matrix dimension `v`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry `(i, j)`; order of the indices is irrelevant.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.idx(i, j)]
    }

    /// Sum of the diagonal.
    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Expand to a dense `nalgebra` matrix (symmetric bit-for-bit).
    pub fn to_dense(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |i, j| self.get(i, j))
    }

    /// Eigenvalues in ascending order, via the symmetric eigensolver.
    pub fn eigenvalues(&self) -> DVector<f64> {
        let eig = self.to_dense().symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        DVector::from_vec(vals)
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Quadratic form `x' M x`.
    pub fn quad_form(&self, x: &DVector<f64>) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += x[i] * self.get(i, j) * x[j];
            }
        }
        acc
    }
}

impl Serialize for CovMatrix {
    /// Serialized as `{ "dim": v, "rows": [[..], ..] }` with full rows, so
    /// consumers need no knowledge of the packed layout.
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<f64>> = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j)).collect())
            .collect();
        let mut st = serializer.serialize_struct("CovMatrix", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("rows", &rows)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_layout_round_trips() {
        let m = CovMatrix::from_upper_fn(3, |i, j| (i * 10 + j) as f64);
        assert_eq!(m.get(0, 2), 2.0);
        assert_eq!(m.get(2, 0), 2.0); // same slot
        assert_eq!(m.get(1, 1), 11.0);
        assert_eq!(m.trace(), 0.0 + 11.0 + 22.0);
        let dense = m.to_dense();
        assert_eq!(dense, dense.transpose());
    }

    #[test]
    fn from_dense_accepts_tiny_asymmetry_and_averages() {
        let mut d = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 2.0]);
        d[(0, 1)] += 4e-11;
        let m = CovMatrix::from_dense(&d).unwrap();
        assert!((m.get(0, 1) - (0.5 + 2e-11)).abs() < 1e-15);
        assert_eq!(m.get(0, 1), m.get(1, 0));
    }

    #[test]
    fn from_dense_rejects_visible_asymmetry() {
        let d = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5 + 1e-8, 2.0]);
        match CovMatrix::from_dense(&d) {
            Err(Error::NotSymmetric { deviation, .. }) => {
                assert!((deviation - 1e-8).abs() < 1e-15)
            }
            other => panic!("expected symmetry rejection, got {other:?}"),
        }
    }

    #[test]
    fn from_dense_rejects_rectangular() {
        let d = DMatrix::zeros(2, 3);
        assert!(matches!(
            CovMatrix::from_dense(&d),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn eigenvalues_of_known_matrix() {
        // [[2,1],[1,2]] has eigenvalues 1 and 3
        let m = CovMatrix::from_upper_fn(2, |i, j| if i == j { 2.0 } else { 1.0 });
        let ev = m.eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-12);
        assert!((ev[1] - 3.0).abs() < 1e-12);
        assert!((m.min_eigenvalue() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quad_form_matches_dense_product() {
        let m = CovMatrix::from_upper_fn(3, |i, j| 1.0 / (1.0 + (i + j) as f64));
        let x = DVector::from_vec(vec![1.0, -2.0, 0.5]);
        let dense = m.to_dense();
        let expect = (x.transpose() * &dense * &x)[(0, 0)];
        assert!((m.quad_form(&x) - expect).abs() < 1e-12);
    }

    #[test]
    fn serializes_with_dim_and_rows() {
        let m = CovMatrix::from_upper_fn(2, |i, j| (i + j) as f64);
        let json = serde_json::to_value(&m).unwrap();
        assert_eq!(json["dim"], 2);
        assert_eq!(json["rows"][0][1], 1.0);
        assert_eq!(json["rows"][1][0], 1.0);
    }
}
