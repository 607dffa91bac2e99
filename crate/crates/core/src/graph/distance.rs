//! Shortest-path node distances and neighborhoods.
//!
//! The distance between nodes is the weighted shortest-path length where an
//! edge of weight `w` has length `1/w`. Because weights lie in `(0, 1]`,
//! every edge is at least 1 long, so distinct nodes are at distance >= 1 and
//! `d(i, i) = 0`. Unreachable pairs sit at the `inf` sentinel, which compares
//! greater than any finite value and never enters arithmetic.
//!
//! A node's neighborhood of radius `s` is the *open* ball
//! `N(i; s) = { j : d(i, j) < s }` (strict inequality; contains `i` whenever
//! `s > 0`), and its boundary at `s` is the shell
//! `N∂(i; s) = N(i; s+1) \ N(i; s) = { j : s <= d(i, j) < s+1 }`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::network::Network;

/// Dense symmetric matrix of all-pairs shortest-path distances.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

/// Min-heap entry for Dijkstra; distances are finite non-NaN by construction.
struct HeapEntry {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapEntry {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for HeapEntry {}
impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reverse on distance to turn BinaryHeap into a min-heap; tie-break on
        // node index for full determinism.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

fn dijkstra(net: &Network, source: usize) -> Vec<f64> {
    let n = net.node_count();
    let mut dist = vec![f64::INFINITY; n];
    dist[source] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(HeapEntry {
        dist: 0.0,
        node: source,
    });
    while let Some(HeapEntry { dist: du, node: u }) = heap.pop() {
        if du > dist[u] {
            continue; // stale entry
        }
        for &(v, w) in net.adjacency(u) {
            // Edge length is the reciprocal intensity; never add to `inf`
            // because `du` is finite for every popped node.
            let cand = du + 1.0 / w;
            if cand < dist[v] {
                dist[v] = cand;
                heap.push(HeapEntry { dist: cand, node: v });
            }
        }
    }
    dist
}

impl DistanceMatrix {
    /// All-pairs shortest paths by one Dijkstra run per source (parallel over
    /// sources; rows are independent so the result is thread-count invariant).
    pub fn from_network(net: &Network) -> Self {
        let n = net.node_count();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|s| dijkstra(net, s))
            .collect();
        let mut d = vec![0.0; n * n];
        for (i, row) in rows.into_iter().enumerate() {
            d[i * n..(i + 1) * n].copy_from_slice(&row);
        }
        DistanceMatrix { n, d }
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Distance between nodes `i` and `j` (0-based); `inf` when disconnected.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    /// Row of distances from node `i`.
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    /// Open neighborhood `N(i; s) = { j : d(i,j) < s }`, sorted ascending.
    pub fn neighborhood(&self, i: usize, s: f64) -> Vec<usize> {
        assert!(i < self.n, "node index {i} out of range 0..{}", self.n);
        self.row(i)
            .iter()
            .enumerate()
            .filter(|(_, &d)| d < s)
            .map(|(j, _)| j)
            .collect()
    }

    /// Boundary shell `N∂(i; s) = { j : s <= d(i,j) < s+1 }`, sorted ascending.
    pub fn boundary(&self, i: usize, s: f64) -> Vec<usize> {
        assert!(i < self.n, "node index {i} out of range 0..{}", self.n);
        self.row(i)
            .iter()
            .enumerate()
            .filter(|(_, &d)| s <= d && d < s + 1.0)
            .map(|(j, _)| j)
            .collect()
    }

    /// Largest finite distance in the matrix (0 when every pair is either
    /// identical or disconnected).
    pub fn max_finite(&self) -> f64 {
        self.d
            .iter()
            .copied()
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    }

    /// Largest populated integer distance class, `floor(max finite distance)`.
    pub fn max_class(&self) -> usize {
        self.max_finite().floor() as usize
    }

    /// Render as dense text: `n` rows of `n` space-separated entries with the
    /// `inf` token for disconnected pairs. Entries use the shortest decimal
    /// representation that round-trips, so emit + re-ingest is bit-identical.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|d| format!("{d}")).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parse the text format produced by [`DistanceMatrix::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let mut rows: Vec<Vec<f64>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let mut row = Vec::new();
            for tok in line.split_whitespace() {
                let val = tok.parse::<f64>().map_err(|_| Error::Parse {
                    line: lineno + 1,
                    reason: format!("invalid distance `{tok}`"),
                })?;
                row.push(val);
            }
            rows.push(row);
        }
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty {
                what: "distance matrix",
            });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse {
                    line: i + 1,
                    reason: format!("expected {n} entries, got {}", row.len()),
                });
            }
        }
        let mut d = vec![0.0; n * n];
        for (i, row) in rows.into_iter().enumerate() {
            d[i * n..(i + 1) * n].copy_from_slice(&row);
        }
        Ok(DistanceMatrix { n, d })
    }
}
