//! Data-generating processes for calibration studies: benchmark networks,
//! zero-mean processes with known scaled-mean variance, and a Monte Carlo
//! coverage harness over the bootstrap schemes.

pub mod coverage;
pub mod networks;
pub mod processes;

pub use coverage::{run_coverage, run_coverage_detailed, CoverageReport, CoverageRow, DgpSpec};
pub use networks::{gen_network, NetworkKind};
pub use processes::{
    gen_cliff_ord, gen_iid_normal, gen_ma_neighborhood, CliffOrdModel, MaModel, ProcessKind,
};
