//! Resampling inference for network-indexed data.
//!
//! This crate implements two bootstrap schemes for the mean of a real- or
//! vector-valued process observed once per node of a weighted undirected
//! network, together with the plug-in variance estimator they are benchmarked
//! against:
//!
//! * **block bootstrap** — resamples whole distance balls and rescales,
//! * **dependent wild bootstrap** — perturbs each observation with Gaussian
//!   multipliers whose correlation follows ball overlap,
//! * **kernel variance estimator** — a smoothed sum of cross-products
//!   weighted by a kernel in shortest-path distance, with an eigenvalue
//!   floor repair to restore positive definiteness.
//!
//! Distances between nodes are shortest-path lengths where an edge of weight
//! `w ∈ (0, 1]` has length `1/w`, so every off-diagonal distance is at least
//! 1 and unreachable pairs sit at infinity. All randomness flows from a
//! single `u64` seed through counter-based generators, making every result
//! reproducible regardless of thread count.
//!
//! The `dgp` module generates benchmark networks and processes with known
//! moments for calibration studies, and `inference` turns bootstrap
//! replicates into confidence sets and dependence diagnostics.

pub mod bootstrap;
pub mod covariance;
pub mod dgp;
pub mod error;
pub mod graph;
pub mod inference;
pub mod rng;
pub mod sample;
pub mod smooth;

pub use error::{Error, Result};
pub use graph::{DistanceMatrix, Network, WeightMode};
pub use sample::SampleMatrix;
