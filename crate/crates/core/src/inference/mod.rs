//! Test statistics, quantiles, confidence sets, and the finite-sample
//! condition diagnostics built on top of the resampling schemes.

pub mod diagnostics;
pub mod run;
pub mod stats;

pub use diagnostics::{
    dependence_transform_rate, diagnostics, DiagnosticsReport, GammaSequence, TailPolicy,
    WeightNormProfile,
};
pub use run::{BlockRunStats, BootstrapRun, Scheme};
pub use stats::{
    confidence_set, empirical_quantile, kolmogorov_distance, test_statistics, ConfidenceBall,
    ConfidenceInterval, ConfidenceSet,
};
