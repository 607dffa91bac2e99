//! Eigenvalue-floor repair and symmetric positive semi-definite square
//! roots.
//!
//! Finite-sample kernel variance estimates can be indefinite whenever the
//! kernel is not positive definite on the realized distance set. The repair
//! replaces every eigenvalue below a floor `c > 0` with the floor itself,
//! keeping the eigenvectors:
//!
//! ```text
//! Σ⁺ = Q * max(Λ, c I) * Q'
//! ```
//!
//! which leaves an already well-conditioned matrix untouched and is
//! idempotent at a fixed floor.

use nalgebra::DMatrix;

use crate::covariance::matrix::CovMatrix;
use crate::error::{Error, Result};

/// Default eigenvalue floor: `10^-3 * trace(Σ) / v`, one thousandth of the
/// average diagonal. A zero or negative trace (possible only for a degenerate
/// estimate) falls back to `10^-3` outright.
pub fn default_repair_floor(sigma: &CovMatrix) -> f64 {
    let avg = sigma.trace() / sigma.dim() as f64;
    if avg > 0.0 {
        1e-3 * avg
    } else {
        1e-3
    }
}

/// Replace eigenvalues below `floor` with `floor`, keeping eigenvectors.
///
/// The result is exactly symmetric and its smallest eigenvalue is `floor` up
/// to eigensolver round-off. Applying the repair twice at the same floor
/// returns the same matrix up to round-off.
pub fn psd_repair(sigma: &CovMatrix, floor: f64) -> Result<CovMatrix> {
    if !floor.is_finite() || floor <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "floor",
            reason: format!("eigenvalue floor must be finite and > 0, got {floor}"),
        });
    }
    let eig = sigma.to_dense().symmetric_eigen();
    let v = sigma.dim();
    let lifted: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(floor)).collect();
    let q = &eig.eigenvectors;
    // entry (i, j) as sum_k lifted_k * Q[i,k] * Q[j,k]: the formula is
    // symmetric in (i, j) term by term, so the rebuild is exactly symmetric
    Ok(CovMatrix::from_upper_fn(v, |i, j| {
        (0..v).map(|k| lifted[k] * q[(i, k)] * q[(j, k)]).sum()
    }))
}

/// Symmetric PSD square root `S = Q * sqrt(max(Λ, 0)) * Q'` of a symmetric
/// matrix, with `S S = M` up to round-off.
///
/// Eigenvalues in `[-clip_tol, 0)` are treated as round-off noise and
/// clipped to zero; anything below `-clip_tol` is a genuine negative
/// direction and is rejected.
pub fn sym_psd_sqrt(m: &DMatrix<f64>, clip_tol: f64) -> Result<DMatrix<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            what: "square-root input",
            expected: m.nrows(),
            actual: m.ncols(),
        });
    }
    let eig = m.clone().symmetric_eigen();
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min < -clip_tol {
        return Err(Error::NotPositiveSemiDefinite {
            min_eigenvalue: min,
            tolerance: clip_tol,
        });
    }
    let v = m.nrows();
    let roots: Vec<f64> = eig
        .eigenvalues
        .iter()
        .map(|&l| if l > 0.0 { l.sqrt() } else { 0.0 })
        .collect();
    let q = &eig.eigenvectors;
    // group the eigenvector product first: q_ik * q_jk is bitwise symmetric
    // in (i, j), so the assembled matrix is exactly symmetric
    Ok(DMatrix::from_fn(v, v, |i, j| {
        (0..v).map(|k| roots[k] * (q[(i, k)] * q[(j, k)])).sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cov(entries: &[f64], dim: usize) -> CovMatrix {
        CovMatrix::from_dense(&DMatrix::from_row_slice(dim, dim, entries)).unwrap()
    }

    #[test]
    fn default_floor_is_a_fraction_of_the_average_diagonal() {
        let s = cov(&[2.0, 0.0, 0.0, 4.0], 2);
        assert!((default_repair_floor(&s) - 3e-3).abs() < 1e-18);
        let zero = cov(&[0.0; 4], 2);
        assert_eq!(default_repair_floor(&zero), 1e-3);
    }

    #[test]
    fn lifts_negative_eigenvalue_to_the_floor() {
        // [[1,2],[2,1]] has eigenvalues 3 and -1
        let s = cov(&[1.0, 2.0, 2.0, 1.0], 2);
        let r = psd_repair(&s, 0.05).unwrap();
        let ev = r.eigenvalues();
        assert!((ev[0] - 0.05).abs() < 1e-12);
        assert!((ev[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn leaves_well_conditioned_matrix_unchanged() {
        let s = cov(&[2.0, 0.3, 0.3, 1.5], 2);
        let r = psd_repair(&s, 1e-6).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((r.get(i, j) - s.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn repair_is_idempotent() {
        let s = cov(&[1.0, 2.0, 2.0, 1.0], 2);
        let once = psd_repair(&s, 0.2).unwrap();
        let twice = psd_repair(&once, 0.2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((once.get(i, j) - twice.get(i, j)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_nonpositive_floor() {
        let s = cov(&[1.0, 0.0, 0.0, 1.0], 2);
        assert!(psd_repair(&s, 0.0).is_err());
        assert!(psd_repair(&s, -1.0).is_err());
        assert!(psd_repair(&s, f64::NAN).is_err());
    }

    #[test]
    fn sqrt_squares_back_to_the_input() {
        // A A' is PSD for any A
        let a = DMatrix::from_row_slice(3, 3, &[1.0, 2.0, 0.0, -1.0, 0.5, 3.0, 0.0, 1.0, 1.0]);
        let m = &a * a.transpose();
        let s = sym_psd_sqrt(&m, 1e-10).unwrap();
        let back = &s * &s;
        for i in 0..3 {
            for j in 0..3 {
                assert!((back[(i, j)] - m[(i, j)]).abs() < 1e-9);
                assert_eq!(s[(i, j)], s[(j, i)]);
            }
        }
    }

    #[test]
    fn sqrt_clips_round_off_negatives_but_rejects_real_ones() {
        // rank-1 PSD matrix perturbed at the round-off scale still works
        let mut m = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]);
        m[(0, 0)] -= 1e-14;
        m[(1, 1)] -= 1e-14;
        assert!(sym_psd_sqrt(&m, 1e-10).is_ok());
        // a genuinely indefinite matrix is refused
        let bad = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        match sym_psd_sqrt(&bad, 1e-10) {
            Err(Error::NotPositiveSemiDefinite { min_eigenvalue, .. }) => {
                assert!((min_eigenvalue + 1.0).abs() < 1e-12)
            }
            other => panic!("expected PSD rejection, got {other:?}"),
        }
    }
}
