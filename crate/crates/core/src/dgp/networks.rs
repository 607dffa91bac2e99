//! Benchmark network generators.
//!
//! Every generator emits unit weights, so node distance is hop count. The
//! seed matters only for the random family; deterministic shapes ignore it.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::network::{Network, WeightMode};
use crate::rng::stream_rng;

/// Family of benchmark networks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NetworkKind {
    /// Path `1 - 2 - .. - n`.
    Line,
    /// Cycle `1 - 2 - .. - n - 1`.
    Cycle,
    /// Hub node 1 linked to every other node.
    Star,
    /// Grid with `⌊√n⌋` rows filled row-major; the last row may be short.
    Lattice2d,
    /// Independent edge coin flips with probability `p`.
    ErdosRenyi { p: f64 },
}

impl NetworkKind {
    /// Short name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            NetworkKind::Line => "line",
            NetworkKind::Cycle => "cycle",
            NetworkKind::Star => "star",
            NetworkKind::Lattice2d => "lattice2d",
            NetworkKind::ErdosRenyi { .. } => "erdos_renyi",
        }
    }
}

/// Generate a unit-weight benchmark network on `n >= 2` nodes.
///
/// Deterministic for a fixed `(kind, n, seed)`; only the random family
/// consumes the seed.
pub fn gen_network(kind: NetworkKind, n: usize, seed: u64) -> Result<Network> {
    if n < 2 {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: format!("generated networks need at least 2 nodes, got {n}"),
        });
    }
    let edges: Vec<(usize, usize, f64)> = match kind {
        NetworkKind::Line => (1..n).map(|i| (i, i + 1, 1.0)).collect(),
        NetworkKind::Cycle => {
            if n == 2 {
                // the wrap-around edge would duplicate the single path edge
                vec![(1, 2, 1.0)]
            } else {
                (1..=n).map(|i| (i, i % n + 1, 1.0)).collect()
            }
        }
        NetworkKind::Star => (2..=n).map(|i| (1, i, 1.0)).collect(),
        NetworkKind::Lattice2d => {
            let rows = (n as f64).sqrt().floor() as usize;
            let cols = n.div_ceil(rows);
            let mut edges = Vec::new();
            for k in 0..n {
                let c = k % cols;
                if c + 1 < cols && k + 1 < n {
                    edges.push((k + 1, k + 2, 1.0));
                }
                if k + cols < n {
                    edges.push((k + 1, k + cols + 1, 1.0));
                }
            }
            edges
        }
        NetworkKind::ErdosRenyi { p } => {
            if !p.is_finite() || p <= 0.0 || p >= 1.0 {
                return Err(Error::InvalidParameter {
                    name: "p",
                    reason: format!("edge probability must lie in (0, 1), got {p}"),
                });
            }
            let mut rng = stream_rng(seed, 0);
            let mut edges = Vec::new();
            for i in 1..=n {
                for j in (i + 1)..=n {
                    if rng.gen::<f64>() < p {
                        edges.push((i, j, 1.0));
                    }
                }
            }
            edges
        }
    };
    Network::from_edge_list(n, edges, WeightMode::Unit)
}
