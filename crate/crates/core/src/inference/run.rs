//! Shared container for the output of a bootstrap run, common to both
//! resampling schemes.

use nalgebra::DVector;
use serde::Serialize;

use crate::covariance::CovMatrix;
use crate::error::{Error, Result};

/// Which resampling scheme produced a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Neighborhood-block resampling.
    Block,
    /// Dependent wild bootstrap with network-overlap weights.
    DependentWild,
}

impl Scheme {
    /// Canonical name used in JSON output.
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Block => "block",
            Scheme::DependentWild => "dependent_wild",
        }
    }
}

/// Block-scheme-specific summary attached to a [`BootstrapRun`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlockRunStats {
    /// Number of blocks drawn per replicate, `K = floor(n / delta)`.
    pub k_n: usize,
    /// Average block size `delta(s)`.
    pub avg_block_size: f64,
    /// Empirical mean over replicates of `L / n`, the pseudo-sample size
    /// relative to `n`.
    pub mean_pseudo_ratio: f64,
    /// `K * delta / n`: the exact factor linking the block variance
    /// estimate to the resampling-law variance of the scaled quasi-average.
    /// Equals 1 exactly when `n / delta` is an integer.
    pub law_variance_factor: f64,
}

/// Everything a bootstrap run produces: replicate statistics, the
/// closed-form variance estimate, and the centering quantities.
#[derive(Debug, Clone)]
pub struct BootstrapRun {
    /// Scheme that produced the run.
    pub scheme: Scheme,
    /// Replicate values of the deviation statistic
    /// `T1* = sqrt(n) * |center* - center|`, ordered by replicate index.
    pub replicates_t1: Vec<f64>,
    /// Replicate values of the smooth-function statistic
    /// `T2* = sqrt(n) * (phi(center*) - phi(center))`, when requested.
    pub replicates_t2: Option<Vec<f64>>,
    /// Closed-form bootstrap variance estimate.
    pub sigma_star: CovMatrix,
    /// Recentering point of the replicate statistics: the block-scheme
    /// conditional mean `mu*` or the sample mean for the wild scheme.
    pub center: DVector<f64>,
    /// Sample mean of the original data.
    pub sample_mean: DVector<f64>,
    /// `phi(sample mean)`, when a smooth function was supplied.
    pub phi_at_sample_mean: Option<f64>,
    /// Number of nodes.
    pub n: usize,
    /// Data dimension.
    pub v: usize,
    /// Block / overlap radius the run used.
    pub s_n: f64,
    /// Declared replicate count `B`.
    pub reps: usize,
    /// Root seed the replicate streams were derived from.
    pub seed: u64,
    /// Present only for the block scheme.
    pub block: Option<BlockRunStats>,
}

impl BootstrapRun {
    /// Validate the container invariants: counts match the declaration and
    /// every replicate value is finite.
    pub fn validate(&self) -> Result<()> {
        if self.replicates_t1.len() != self.reps {
            return Err(Error::DimensionMismatch {
                what: "T1 replicate count",
                expected: self.reps,
                actual: self.replicates_t1.len(),
            });
        }
        if let Some(t2) = &self.replicates_t2 {
            if t2.len() != self.reps {
                return Err(Error::DimensionMismatch {
                    what: "T2 replicate count",
                    expected: self.reps,
                    actual: t2.len(),
                });
            }
            if !t2.iter().all(|x| x.is_finite()) {
                return Err(Error::NonFinite {
                    what: "T2 replicates",
                });
            }
        }
        if !self.replicates_t1.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite {
                what: "T1 replicates",
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dummy_run() -> BootstrapRun {
        BootstrapRun {
            scheme: Scheme::Block,
            replicates_t1: vec![0.0, 1.0],
            replicates_t2: None,
            sigma_star: CovMatrix::from_upper_fn(1, |_, _| 1.0),
            center: DVector::from_vec(vec![0.0]),
            sample_mean: DVector::from_vec(vec![0.0]),
            phi_at_sample_mean: None,
            n: 4,
            v: 1,
            s_n: 1.0,
            reps: 2,
            seed: 0,
            block: None,
        }
    }

    #[test]
    fn scheme_names() {
        assert_eq!(Scheme::Block.name(), "block");
        assert_eq!(Scheme::DependentWild.name(), "dependent_wild");
    }

    #[test]
    fn validate_checks_counts_and_finiteness() {
        assert!(dummy_run().validate().is_ok());
        let mut short = dummy_run();
        short.reps = 3;
        assert!(short.validate().is_err());
        let mut inf = dummy_run();
        inf.replicates_t1[0] = f64::NAN;
        assert!(inf.validate().is_err());
    }
}
