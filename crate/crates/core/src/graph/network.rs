//! Weighted undirected networks.
//!
//! A network is simple (no self-loops, no duplicate edges) with edge weights
//! in `(0, 1]` interpreted as link intensities: the travel length of an edge
//! is the reciprocal `1/w`, so a full-strength link (`w = 1`) has length 1 and
//! weaker links are longer. Unit-weight mode pins every weight to exactly 1,
//! which makes node distance the usual shortest-path hop count.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// How edge weights are interpreted when the network is built.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    /// All weights must equal 1; distances are hop counts.
    Unit,
    /// Weights are link intensities in `(0, 1]`; edge length is `1/w`.
    Intensity,
}

/// A single undirected edge, stored with `a < b` (0-based).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

/// Validated simple weighted undirected network.
#[derive(Debug, Clone)]
pub struct Network {
    n: usize,
    mode: WeightMode,
    edges: Vec<Edge>,
    /// adjacency[i] = sorted list of (neighbor, weight)
    adjacency: Vec<Vec<(usize, f64)>>,
}

impl Network {
    /// Build from an iterator of `(i, j, w)` edges with **1-based** node
    /// indices, the convention of the edge-list file format. Rejects
    /// self-loops, duplicate unordered pairs, out-of-range indices, and
    /// weights outside `(0, 1]` (outside `{1}` in unit mode).
    pub fn from_edge_list<I>(n: usize, edges: I, mode: WeightMode) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: "network must have at least one node".into(),
            });
        }
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut out: Vec<Edge> = Vec::new();
        for (i, j, w) in edges {
            if i == j {
                return Err(Error::SelfLoop { node: i });
            }
            for idx in [i, j] {
                if idx == 0 || idx > n {
                    return Err(Error::NodeIndexOutOfRange { index: idx, n });
                }
            }
            let (a, b) = (i.min(j), i.max(j));
            if !seen.insert((a, b)) {
                return Err(Error::DuplicateEdge { a, b });
            }
            if !w.is_finite() || w <= 0.0 || w > 1.0 {
                return Err(Error::InvalidWeight {
                    a,
                    b,
                    weight: w,
                    reason: "weights must lie in (0, 1]",
                });
            }
            if mode == WeightMode::Unit && w != 1.0 {
                return Err(Error::InvalidWeight {
                    a,
                    b,
                    weight: w,
                    reason: "unit-weight mode requires weight exactly 1",
                });
            }
            out.push(Edge {
                a: a - 1,
                b: b - 1,
                weight: w,
            });
        }
        out.sort_by_key(|x| (x.a, x.b));
        let mut adjacency = vec![Vec::new(); n];
        for e in &out {
            adjacency[e.a].push((e.b, e.weight));
            adjacency[e.b].push((e.a, e.weight));
        }
        for adj in &mut adjacency {
            adj.sort_by_key(|x| x.0);
        }
        Ok(Network {
            n,
            mode,
            edges: out,
            adjacency,
        })
    }

    /// Number of nodes.
    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Weight interpretation this network was built with.
    pub fn weight_mode(&self) -> WeightMode {
        self.mode
    }

    /// Edges in canonical `(a, b)` order, 0-based.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Sorted neighbors of node `i` with edge weights (0-based).
    pub fn adjacency(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    /// Degree of node `i`.
    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    /// Render as an edge-list text file (1-based, `i j w` per line).
    pub fn to_edge_list_text(&self) -> String {
        let mut s = String::new();
        for e in &self.edges {
            s.push_str(&format!("{} {} {}\n", e.a + 1, e.b + 1, e.weight));
        }
        s
    }
}

/// Parse edge-list text: one `i j [w]` triple per line, 1-based indices,
/// whitespace-separated; a missing weight means 1. Blank lines and lines
/// starting with `#` are skipped.
pub fn parse_edge_list(text: &str) -> Result<Vec<(usize, usize, f64)>> {
    let mut edges = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 || fields.len() > 3 {
            return Err(Error::Parse {
                line: lineno + 1,
                reason: format!("expected `i j [w]`, got {} fields", fields.len()),
            });
        }
        let parse_idx = |s: &str| -> Result<usize> {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line: lineno + 1,
                reason: format!("invalid node index `{s}`"),
            })
        };
        let i = parse_idx(fields[0])?;
        let j = parse_idx(fields[1])?;
        let w = if fields.len() == 3 {
            fields[2].parse::<f64>().map_err(|_| Error::Parse {
                line: lineno + 1,
                reason: format!("invalid weight `{}`", fields[2]),
            })?
        } else {
            1.0
        };
        edges.push((i, j, w));
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Path 1-2-...-n with unit weights.
    pub(crate) fn path(n: usize) -> Network {
        Network::from_edge_list(n, (1..n).map(|i| (i, i + 1, 1.0)), WeightMode::Unit).unwrap()
    }

    #[test]
    fn minimal_build() {
        let g = Network::from_edge_list(2, vec![(1, 2, 1.0)], WeightMode::Unit).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(0), 1);
        assert_eq!(g.adjacency(0), &[(1, 1.0)]);
    }

    #[test]
    fn rejects_self_loop() {
        let err = Network::from_edge_list(3, vec![(2, 2, 1.0)], WeightMode::Unit).unwrap_err();
        assert_eq!(err.code(), "self_loop");
    }

    #[test]
    fn rejects_duplicate_even_reversed() {
        let err = Network::from_edge_list(3, vec![(1, 2, 1.0), (2, 1, 1.0)], WeightMode::Unit)
            .unwrap_err();
        assert_eq!(err.code(), "duplicate_edge");
    }

    #[test]
    fn rejects_out_of_range_and_zero_index() {
        let err = Network::from_edge_list(3, vec![(1, 4, 1.0)], WeightMode::Unit).unwrap_err();
        assert_eq!(err.code(), "index_out_of_range");
        let err = Network::from_edge_list(3, vec![(0, 2, 1.0)], WeightMode::Unit).unwrap_err();
        assert_eq!(err.code(), "index_out_of_range");
    }

    #[test]
    fn rejects_bad_weights() {
        for w in [0.0, -0.3, 1.5, f64::NAN] {
            let err =
                Network::from_edge_list(2, vec![(1, 2, w)], WeightMode::Intensity).unwrap_err();
            assert_eq!(err.code(), "invalid_weight");
        }
        // unit mode insists on exactly 1
        let err = Network::from_edge_list(2, vec![(1, 2, 0.5)], WeightMode::Unit).unwrap_err();
        assert_eq!(err.code(), "invalid_weight");
        assert!(Network::from_edge_list(2, vec![(1, 2, 0.5)], WeightMode::Intensity).is_ok());
    }

    #[test]
    fn parse_and_render_round_trip() {
        let text = "# comment\n1 2\n2 3 0.5\n\n";
        let edges = parse_edge_list(text).unwrap();
        assert_eq!(edges, vec![(1, 2, 1.0), (2, 3, 0.5)]);
        let g = Network::from_edge_list(3, edges, WeightMode::Intensity).unwrap();
        let rendered = g.to_edge_list_text();
        let reparsed = parse_edge_list(&rendered).unwrap();
        let g2 = Network::from_edge_list(3, reparsed, WeightMode::Intensity).unwrap();
        assert_eq!(g.edges(), g2.edges());
    }

    #[test]
    fn parse_rejects_malformed_lines() {
        assert_eq!(parse_edge_list("1\n").unwrap_err().code(), "parse_error");
        assert_eq!(
            parse_edge_list("1 2 3 4\n").unwrap_err().code(),
            "parse_error"
        );
        assert_eq!(parse_edge_list("a b\n").unwrap_err().code(), "parse_error");
        assert_eq!(
            parse_edge_list("1 2 x\n").unwrap_err().code(),
            "parse_error"
        );
    }

    #[test]
    fn path_helper_shape() {
        let g = path(5);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.degree(2), 2);
    }
}
