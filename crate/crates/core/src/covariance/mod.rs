//! Kernel variance estimation for network-indexed samples: smoothing
//! kernels, exactly-symmetric covariance storage, the distance-weighted
//! estimator itself, and positive semi-definite repair.

pub mod hac;
pub mod kernel;
pub mod matrix;
pub mod psd;

pub use hac::hac_estimate;
pub use kernel::Kernel;
pub use matrix::{CovMatrix, SYMMETRY_TOL};
pub use psd::{default_repair_floor, psd_repair, sym_psd_sqrt};
