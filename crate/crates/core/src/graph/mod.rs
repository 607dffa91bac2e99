//! Weighted undirected networks, shortest-path distances, and the denseness
//! measures built on top of them.

pub mod denseness;
pub mod distance;
pub mod network;

pub use denseness::{
    denseness, local_denseness, local_denseness_profile, overlap_weights, quadruple_count,
    quadruple_histogram, DensenessReport, OverlapWeights, PairRadius,
};
pub use distance::DistanceMatrix;
pub use network::{parse_edge_list, Edge, Network, WeightMode};
