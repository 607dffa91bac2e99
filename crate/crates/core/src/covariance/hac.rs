//! Kernel-weighted plug-in estimator of the variance of the scaled sample
//! mean.
//!
//! For observations `Y_1, .., Y_n` in `R^v` on a network with distance matrix
//! `D` and demeaned values `u_i = Y_i - Ybar`, the estimator at bandwidth `b`
//! with kernel `κ` is
//!
//! ```text
//! Σ̂ = n^-1 * sum_{i,j} κ( d(i,j) / (b+1) ) * u_i u_j'
//! ```
//!
//! Pairs with `d(i,j) > b+1` (including unreachable pairs at infinite
//! distance) contribute nothing because every kernel vanishes beyond 1, and
//! the implementation skips them outright. Pairs at exactly `d = b+1` are
//! evaluated — the truncated kernel still counts them.

use crate::covariance::kernel::Kernel;
use crate::covariance::matrix::CovMatrix;
use crate::error::{Error, Result};
use crate::graph::distance::DistanceMatrix;
use crate::sample::SampleMatrix;

/// Compute the kernel variance estimate at bandwidth `b >= 0`.
///
/// The result is exactly symmetric by construction: each upper-triangle entry
/// is accumulated once in a fixed order and shared between `(p, q)` and
/// `(q, p)`.
pub fn hac_estimate(
    d: &DistanceMatrix,
    y: &SampleMatrix,
    kernel: Kernel,
    bandwidth: f64,
) -> Result<CovMatrix> {
    if !bandwidth.is_finite() || bandwidth < 0.0 {
        return Err(Error::InvalidParameter {
            name: "bandwidth",
            reason: format!("bandwidth must be finite and >= 0, got {bandwidth}"),
        });
    }
    if y.n() != d.n() {
        return Err(Error::DimensionMismatch {
            what: "observations vs distance matrix",
            expected: d.n(),
            actual: y.n(),
        });
    }
    let n = d.n();
    let v = y.v();
    let u = y.demeaned();
    let reach = bandwidth + 1.0;

    // acc[p * v + q] for p <= q
    let mut acc = vec![0.0f64; v * v];
    for i in 0..n {
        let row = d.row(i);
        for (j, &dij) in row.iter().enumerate() {
            if dij > reach {
                continue;
            }
            let w = kernel.eval(dij / reach);
            if w == 0.0 {
                continue;
            }
            for p in 0..v {
                let up = u[(i, p)];
                for q in p..v {
                    acc[p * v + q] += w * up * u[(j, q)];
                }
            }
        }
    }
    let nf = n as f64;
    Ok(CovMatrix::from_upper_fn(v, |p, q| acc[p * v + q] / nf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::network::{Network, WeightMode};

    fn path(n: usize) -> DistanceMatrix {
        DistanceMatrix::from_network(
            &Network::from_edge_list(n, (1..n).map(|i| (i, i + 1, 1.0)), WeightMode::Unit)
                .unwrap(),
        )
    }

    fn triangle() -> DistanceMatrix {
        DistanceMatrix::from_network(
            &Network::from_edge_list(3, [(1, 2, 1.0), (2, 3, 1.0), (1, 3, 1.0)], WeightMode::Unit)
                .unwrap(),
        )
    }

    #[test]
    fn bandwidth_zero_bartlett_reduces_to_raw_variance() {
        // at b = 0 the bartlett weight is 1 at d = 0 and 0 at d = 1, leaving
        // only the diagonal terms: the plain variance of (1, 2, 3) is 2/3
        let d = triangle();
        let y = SampleMatrix::from_column(&[1.0, 2.0, 3.0]).unwrap();
        let s = hac_estimate(&d, &y, Kernel::Bartlett, 0.0).unwrap();
        assert!((s.get(0, 0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn five_node_path_bartlett_golden() {
        // Y_i = i/5, b = 1: demeaned u = (-.4, -.2, 0, .2, .4);
        // diagonal sum 0.4, adjacent ordered pairs sum 0.32 at weight 1/2,
        // distance-2 pairs at weight 0, giving (0.4 + 0.16)/5 = 14/125
        let d = path(5);
        let y =
            SampleMatrix::from_column(&[0.2, 0.4, 0.6, 0.8, 1.0]).unwrap();
        let s = hac_estimate(&d, &y, Kernel::Bartlett, 1.0).unwrap();
        assert!((s.get(0, 0) - 14.0 / 125.0).abs() < 1e-15);
        assert!((s.get(0, 0) - 0.112).abs() < 1e-15);
    }

    #[test]
    fn truncated_with_huge_bandwidth_collapses_to_zero_on_connected_graph() {
        // with every pair weighted 1 the double sum telescopes to
        // (sum of demeaned values)^2 = 0
        let d = path(6);
        let y = SampleMatrix::from_column(&[3.0, -1.0, 4.0, 1.0, -5.0, 9.0]).unwrap();
        let s = hac_estimate(&d, &y, Kernel::Truncated, 50.0).unwrap();
        assert!(s.get(0, 0).abs() < 1e-12);
    }

    #[test]
    fn boundary_distance_is_included() {
        // truncated kernel at b = 1 keeps pairs at d = 2 exactly (z = 1)
        let d = path(3);
        let y = SampleMatrix::from_column(&[1.0, 0.0, -1.0]).unwrap();
        let s = hac_estimate(&d, &y, Kernel::Truncated, 1.0).unwrap();
        // all pairs within reach: estimate telescopes to zero
        assert!(s.get(0, 0).abs() < 1e-15);
        // bartlett at the same bandwidth kills the d = 2 pair instead:
        // diagonal sum 2 at weight 1, adjacent products all zero, the
        // d = 2 pair weighted 0, so the estimate is 2/3
        let s2 = hac_estimate(&d, &y, Kernel::Bartlett, 1.0).unwrap();
        assert!((s2.get(0, 0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn disconnected_pairs_never_contribute() {
        // two isolated edges; cross terms at infinite distance must drop out
        let net = Network::from_edge_list(4, [(1, 2, 1.0), (3, 4, 1.0)], WeightMode::Unit).unwrap();
        let d = DistanceMatrix::from_network(&net);
        let y = SampleMatrix::from_column(&[1.0, 1.0, -1.0, -1.0]).unwrap();
        let s = hac_estimate(&d, &y, Kernel::Truncated, 100.0).unwrap();
        // within-component pairs all weight 1: (1+1)^2 + (-1-1)^2 scaled by
        // n^-1 -> (4 + 4)/4 = 2
        assert!((s.get(0, 0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn vector_valued_output_is_exactly_symmetric() {
        let d = path(4);
        let y = SampleMatrix::from_rows(&[
            vec![1.0, 2.0],
            vec![-1.0, 0.5],
            vec![0.0, -2.0],
            vec![2.0, 1.0],
        ])
        .unwrap();
        let s = hac_estimate(&d, &y, Kernel::Parzen, 1.5).unwrap();
        assert_eq!(s.get(0, 1), s.get(1, 0));
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn rejects_bad_bandwidth_and_shape_mismatch() {
        let d = path(3);
        let y = SampleMatrix::from_column(&[1.0, 2.0, 3.0]).unwrap();
        assert!(hac_estimate(&d, &y, Kernel::Bartlett, -1.0).is_err());
        assert!(hac_estimate(&d, &y, Kernel::Bartlett, f64::NAN).is_err());
        let y4 = SampleMatrix::from_column(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(matches!(
            hac_estimate(&d, &y4, Kernel::Bartlett, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
