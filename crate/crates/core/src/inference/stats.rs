//! Test statistics, empirical quantiles, confidence sets, and the
//! two-sample Kolmogorov distance.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::inference::run::BootstrapRun;
use crate::smooth::{check_dim, SmoothFn};

/// Deviation statistics of the sample mean from a hypothesized `mu`:
/// `T1 = sqrt(n) |Ybar - mu|`, and `T2 = sqrt(n)(phi(Ybar) - phi(mu))` when
/// a smooth function is supplied.
pub fn test_statistics(
    y_bar: &DVector<f64>,
    mu: &DVector<f64>,
    n: usize,
    phi: Option<&dyn SmoothFn>,
) -> Result<(f64, Option<f64>)> {
    if y_bar.len() != mu.len() {
        return Err(Error::DimensionMismatch {
            what: "mean vs hypothesized mean",
            expected: y_bar.len(),
            actual: mu.len(),
        });
    }
    if let Some(f) = phi {
        check_dim(f, y_bar.len())?;
    }
    let sqrt_n = (n as f64).sqrt();
    let t1 = sqrt_n * (y_bar - mu).norm();
    let t2 = phi.map(|f| sqrt_n * (f.eval(y_bar) - f.eval(mu)));
    Ok((t1, t2))
}

/// Empirical `alpha`-quantile: the `k`-th order statistic with
/// `k = ceil(alpha * B)`, the generalized inverse `inf{x : F(x) >= alpha}`
/// of the empirical cdf.
///
/// The product `alpha * B` is computed in floating point, so a mathematically
/// integral value can land a hair above its true value (e.g. `0.1 * 30 =
/// 3.0000000000000004`); the ceiling is taken after subtracting `1e-9` to
/// absorb that noise. Real fractional parts are far larger than `1e-9` for
/// any usable `B`, so the snap never changes a genuinely fractional index.
pub fn empirical_quantile(values: &[f64], alpha: f64) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::Empty {
            what: "quantile input",
        });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: format!("quantile level must lie in (0, 1), got {alpha}"),
        });
    }
    if !values.iter().all(|x| x.is_finite()) {
        return Err(Error::NonFinite {
            what: "quantile input",
        });
    }
    let b = values.len();
    let k = ((alpha * b as f64) - 1e-9).ceil() as usize;
    let k = k.clamp(1, b);
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted[k - 1])
}

/// Closed ball `{ mu : sqrt(n) |Ybar - mu| <= c }`, i.e. the test-inversion
/// confidence set for the mean.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfidenceBall {
    /// Ball center: the sample mean of the original data.
    pub center: Vec<f64>,
    /// Ball radius `c*(1 - alpha) / sqrt(n)`.
    pub radius: f64,
    /// Nominal miscoverage level.
    pub alpha: f64,
}

/// Equal-tailed interval for `phi(mu)` from signed smooth-function
/// replicates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    /// Nominal miscoverage level (split evenly between the tails).
    pub alpha: f64,
}

/// The confidence region(s) a bootstrap run supports: always the ball for
/// the mean, plus the interval for `phi(mu)` when the run carries
/// smooth-function replicates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfidenceSet {
    pub ball: ConfidenceBall,
    pub interval: Option<ConfidenceInterval>,
}

/// Build the level-`1 - alpha` confidence set from a bootstrap run.
///
/// The ball is centered at the sample mean with radius
/// `c*(1 - alpha) / sqrt(n)` from the `T1*` replicates. When `T2*`
/// replicates are present, the interval is
/// `[phi(Ybar) - c*(1 - alpha/2)/sqrt(n), phi(Ybar) - c*(alpha/2)/sqrt(n)]`
/// with quantiles of the signed replicates — equal-tailed two-sided
/// inversion.
pub fn confidence_set(run: &BootstrapRun, alpha: f64) -> Result<ConfidenceSet> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: format!("level must lie in (0, 1), got {alpha}"),
        });
    }
    let sqrt_n = (run.n as f64).sqrt();
    let radius = empirical_quantile(&run.replicates_t1, 1.0 - alpha)? / sqrt_n;
    let ball = ConfidenceBall {
        center: run.sample_mean.iter().copied().collect(),
        radius,
        alpha,
    };
    let interval = match (&run.replicates_t2, run.phi_at_sample_mean) {
        (Some(t2), Some(phi_hat)) => {
            let hi = empirical_quantile(t2, 1.0 - alpha / 2.0)?;
            let lo = empirical_quantile(t2, alpha / 2.0)?;
            Some(ConfidenceInterval {
                lower: phi_hat - hi / sqrt_n,
                upper: phi_hat - lo / sqrt_n,
                alpha,
            })
        }
        _ => None,
    };
    Ok(ConfidenceSet { ball, interval })
}

/// Two-sample Kolmogorov distance: the supremum over pooled sample points of
/// the difference between the two empirical cdfs. Always in `[0, 1]`.
pub fn kolmogorov_distance(sample_a: &[f64], sample_b: &[f64]) -> Result<f64> {
    if sample_a.is_empty() || sample_b.is_empty() {
        return Err(Error::Empty {
            what: "kolmogorov sample",
        });
    }
    let mut a = sample_a.to_vec();
    let mut b = sample_b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup: f64 = 0.0;
    while i < a.len() || j < b.len() {
        // advance past the smallest remaining pooled value in both samples
        let x = match (a.get(i), b.get(j)) {
            (Some(&xa), Some(&xb)) => xa.min(xb),
            (Some(&xa), None) => xa,
            (None, Some(&xb)) => xb,
            (None, None) => break,
        };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(sup)
}
