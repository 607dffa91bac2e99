//! Dependent wild bootstrap with network-overlap multiplier weights.
//!
//! Each replicate perturbs the demeaned data with one scalar multiplier per
//! node, `Y*_i = Ybar + (Y_i - Ybar) W_i`, where the weight vector
//! `W = Ω^{1/2} ζ` (`ζ` iid standard normal) has covariance equal to the
//! ball-overlap table `Ω` — so nodes with overlapping neighborhoods receive
//! correlated multipliers and the local dependence structure survives the
//! resampling. The closed-form variance estimate is the `Ω`-weighted sum of
//! cross-products
//!
//! ```text
//! Sigma* = n^-1 Σ_{i,j} ω(i,j) (Y_i - Ybar)(Y_j - Ybar)' ,
//! ```
//!
//! which is also the exact conditional variance of `sqrt(n)(Ybar* - Ybar)`
//! under the Gaussian weight law.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::covariance::{sym_psd_sqrt, CovMatrix};
use crate::error::{Error, Result};
use crate::graph::denseness::{overlap_weights, OverlapWeights};
use crate::graph::DistanceMatrix;
use crate::inference::run::{BootstrapRun, Scheme};
use crate::rng::stream_rng;
use crate::sample::SampleMatrix;
use crate::smooth::{check_dim, SmoothFn};

/// Distribution of the multiplier vector. Only the Gaussian law ships; the
/// enum exists so a two-point or other law with matching covariance can be
/// added without an interface change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightLaw {
    /// `W = Ω^{1/2} ζ` with `ζ` iid standard normal.
    #[default]
    Gaussian,
}

/// Overlap table `Ω` with its symmetric square root cached, so repeated runs
/// on the same graph and radius (calibration studies, coverage loops) pay
/// the eigendecomposition once.
#[derive(Debug, Clone)]
pub struct DwbWeights {
    overlap: OverlapWeights,
    omega_sqrt: DMatrix<f64>,
    law: WeightLaw,
}

impl DwbWeights {
    /// Build `Ω` at radius `s_n` and cache its PSD square root.
    ///
    /// `Ω` is PSD in exact arithmetic; eigenvalues down to `-1e-10 * n` are
    /// accepted as round-off and clipped, anything lower is an error.
    pub fn new(d: &DistanceMatrix, s_n: f64) -> Result<Self> {
        let overlap = overlap_weights(d, s_n)?;
        let clip = 1e-10 * d.n() as f64;
        let omega_sqrt = sym_psd_sqrt(&overlap.omega, clip)?;
        Ok(DwbWeights {
            overlap,
            omega_sqrt,
            law: WeightLaw::Gaussian,
        })
    }

    /// The overlap table (weights and normalizer).
    pub fn overlap(&self) -> &OverlapWeights {
        &self.overlap
    }

    /// The weight covariance `Ω`.
    pub fn omega(&self) -> &DMatrix<f64> {
        &self.overlap.omega
    }

    /// Cached symmetric square root `Ω^{1/2}`.
    pub fn omega_sqrt(&self) -> &DMatrix<f64> {
        &self.omega_sqrt
    }

    /// The multiplier law.
    pub fn law(&self) -> WeightLaw {
        self.law
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.omega_sqrt.nrows()
    }
}

/// Draw one multiplier vector `W = Ω^{1/2} ζ` from the supplied stream.
pub fn dwb_draw_weights(w: &DwbWeights, rng: &mut ChaCha8Rng) -> DVector<f64> {
    let zeta = DVector::from_fn(w.n(), |_, _| rng.sample::<f64, _>(StandardNormal));
    w.omega_sqrt() * zeta
}

/// Form the pseudo-sample `Y*_i = Ybar + (Y_i - Ybar) W_i`.
pub fn dwb_pseudo_sample(y: &SampleMatrix, w: &DVector<f64>) -> Result<SampleMatrix> {
    if w.len() != y.n() {
        return Err(Error::DimensionMismatch {
            what: "multiplier vector",
            expected: y.n(),
            actual: w.len(),
        });
    }
    let ybar = y.mean();
    let mut data = DMatrix::zeros(y.n(), y.v());
    for i in 0..y.n() {
        for p in 0..y.v() {
            data[(i, p)] = ybar[p] + (y.get(i, p) - ybar[p]) * w[i];
        }
    }
    SampleMatrix::new(data)
}

/// Closed-form variance estimate `Sigma* = n^-1 Σ_{i,j} ω(i,j) u_i u_j'`
/// with `u = Y - Ybar`, exactly symmetric by construction.
pub fn dwb_variance(y: &SampleMatrix, ow: &OverlapWeights) -> Result<CovMatrix> {
    if ow.omega.nrows() != y.n() {
        return Err(Error::DimensionMismatch {
            what: "overlap table",
            expected: y.n(),
            actual: ow.omega.nrows(),
        });
    }
    let u = y.demeaned();
    // B = Ω u is n x v; entry (p, q) is then u_p . B_q / n, computed once
    // per unordered coordinate pair
    let b = &ow.omega * &u;
    let n = y.n() as f64;
    Ok(CovMatrix::from_upper_fn(y.v(), |p, q| {
        u.column(p).dot(&b.column(q)) / n
    }))
}

/// Full wild-bootstrap run at radius `s_n`; builds the overlap table and
/// square root, then delegates to [`dwb_run_with`].
pub fn dwb_run(
    y: &SampleMatrix,
    d: &DistanceMatrix,
    s_n: f64,
    reps: usize,
    phi: Option<&(dyn SmoothFn + Sync)>,
    seed: u64,
) -> Result<BootstrapRun> {
    let weights = DwbWeights::new(d, s_n)?;
    dwb_run_with(y, &weights, reps, phi, seed)
}

/// Wild-bootstrap run on a prebuilt weight table: `reps` replicates of
/// `T1* = sqrt(n) |Ybar* - Ybar|` (and `T2* = sqrt(n)(phi(Ybar*) -
/// phi(Ybar))` when `phi` is given), plus `Sigma*`.
///
/// Replicate `b` draws from the stream keyed by `b` under `seed`; output is
/// identical for any thread count.
pub fn dwb_run_with(
    y: &SampleMatrix,
    weights: &DwbWeights,
    reps: usize,
    phi: Option<&(dyn SmoothFn + Sync)>,
    seed: u64,
) -> Result<BootstrapRun> {
    if reps == 0 {
        return Err(Error::InvalidParameter {
            name: "reps",
            reason: "at least one replicate is required".into(),
        });
    }
    if weights.n() != y.n() {
        return Err(Error::DimensionMismatch {
            what: "weight table",
            expected: y.n(),
            actual: weights.n(),
        });
    }
    if let Some(f) = phi {
        check_dim(f, y.v())?;
    }
    let n = y.n();
    let nf = n as f64;
    let sqrt_n = nf.sqrt();
    let ybar = y.mean();
    let sigma_star = dwb_variance(y, weights.overlap())?;
    let phi_at_mean = phi.map(|f| f.eval(&ybar));
    // Ybar* - Ybar = n^-1 Σ_i u_i W_i = n^-1 (u' Ω^{1/2}) ζ; fold the data
    // into the square root once so each replicate costs O(n v)
    let projector = y.demeaned().transpose() * weights.omega_sqrt(); // v x n

    let draws: Vec<(f64, Option<f64>)> = (0..reps)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b as u64);
            let zeta = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
            let dev = (&projector * zeta) / nf;
            let t1 = sqrt_n * dev.norm();
            let t2 = phi.map(|f| sqrt_n * (f.eval(&(&ybar + &dev)) - phi_at_mean.unwrap()));
            (t1, t2)
        })
        .collect();

    Ok(BootstrapRun {
        scheme: Scheme::DependentWild,
        replicates_t1: draws.iter().map(|(t1, _)| *t1).collect(),
        replicates_t2: phi.map(|_| draws.iter().map(|(_, t2)| t2.unwrap()).collect()),
        sigma_star,
        center: ybar.clone(),
        sample_mean: ybar,
        phi_at_sample_mean: phi_at_mean,
        n,
        v: y.v(),
        s_n: weights.overlap().s,
        reps,
        seed,
        block: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::network::{Network, WeightMode};
    use crate::smooth::Identity;

    fn matrix(net: &Network) -> DistanceMatrix {
        DistanceMatrix::from_network(net)
    }

    fn path5() -> DistanceMatrix {
        matrix(
            &Network::from_edge_list(5, (1..5).map(|i| (i, i + 1, 1.0)), WeightMode::Unit)
                .unwrap(),
        )
    }

    fn edgeless(n: usize) -> DistanceMatrix {
        matrix(&Network::from_edge_list(n, Vec::new(), WeightMode::Unit).unwrap())
    }

    #[test]
    fn edgeless_graph_gives_iid_multipliers() {
        let w = DwbWeights::new(&edgeless(4), 1.0).unwrap();
        let eye = DMatrix::identity(4, 4);
        assert!((w.omega() - &eye).norm() < 1e-12);
        assert!((w.omega_sqrt() - &eye).norm() < 1e-10);
        assert_eq!(w.law(), WeightLaw::Gaussian);
    }

    #[test]
    fn single_edge_weights_are_perfectly_correlated() {
        let net = Network::from_edge_list(2, [(1, 2, 1.0)], WeightMode::Unit).unwrap();
        let w = DwbWeights::new(&matrix(&net), 1.0).unwrap();
        let mut rng = stream_rng(8, 0);
        for _ in 0..20 {
            let draw = dwb_draw_weights(&w, &mut rng);
            assert!((draw[0] - draw[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn weight_covariance_matches_omega_by_monte_carlo() {
        // 10^6 draws on P5; each sample covariance entry is compared to
        // ω(i,j) within 4 standard errors of the Gaussian product moment
        let w = DwbWeights::new(&path5(), 1.0).unwrap();
        let n = 5;
        let reps = 1_000_000usize;
        let mut acc = DMatrix::<f64>::zeros(n, n);
        let mut rng = stream_rng(123, 0);
        for _ in 0..reps {
            let draw = dwb_draw_weights(&w, &mut rng);
            for i in 0..n {
                for j in i..n {
                    acc[(i, j)] += draw[i] * draw[j];
                }
            }
        }
        for i in 0..n {
            for j in i..n {
                let est = acc[(i, j)] / reps as f64;
                let omega_ij = w.omega()[(i, j)];
                // Var(W_i W_j) = ω_ii ω_jj + ω_ij² for joint Gaussians
                let se = ((w.omega()[(i, i)] * w.omega()[(j, j)] + omega_ij * omega_ij)
                    / reps as f64)
                    .sqrt();
                assert!(
                    (est - omega_ij).abs() < 4.0 * se,
                    "entry ({i},{j}): {est} vs {omega_ij} (se {se})"
                );
            }
        }
    }

    #[test]
    fn pseudo_sample_goldens() {
        // Y = (0, 2), W = (1, -1): both entries collapse to 0
        let y = SampleMatrix::from_column(&[0.0, 2.0]).unwrap();
        let w = DVector::from_vec(vec![1.0, -1.0]);
        let star = dwb_pseudo_sample(&y, &w).unwrap();
        assert_eq!(star.get(0, 0), 0.0);
        assert_eq!(star.get(1, 0), 0.0);
        // zero weights collapse everything to the mean
        let z = DVector::zeros(2);
        let star = dwb_pseudo_sample(&y, &z).unwrap();
        assert_eq!(star.get(0, 0), 1.0);
        assert_eq!(star.get(1, 0), 1.0);
        // constant data are a fixed point regardless of weights
        let c = SampleMatrix::from_column(&[3.0, 3.0]).unwrap();
        let star = dwb_pseudo_sample(&c, &w).unwrap();
        assert_eq!(star.get(0, 0), 3.0);
        assert_eq!(star.get(1, 0), 3.0);
        // length mismatch is refused
        assert!(dwb_pseudo_sample(&y, &DVector::zeros(3)).is_err());
    }

    #[test]
    fn variance_on_edgeless_graph_is_sample_variance() {
        let y = SampleMatrix::from_column(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let ow = overlap_weights(&edgeless(4), 1.0).unwrap();
        let s = dwb_variance(&y, &ow).unwrap();
        assert!((s.get(0, 0) - 1.25).abs() < 1e-14);
    }

    #[test]
    fn variance_on_all_ones_omega_vanishes() {
        let net = Network::from_edge_list(2, [(1, 2, 1.0)], WeightMode::Unit).unwrap();
        let y = SampleMatrix::from_column(&[5.0, -3.0]).unwrap();
        let ow = overlap_weights(&matrix(&net), 1.0).unwrap();
        let s = dwb_variance(&y, &ow).unwrap();
        assert!(s.get(0, 0).abs() < 1e-14);
    }

    #[test]
    fn p5_variance_golden() {
        // direct double-sum evaluation gives 8/65 for this data
        let y = SampleMatrix::from_column(&[1.0, 0.0, 2.0, 0.0, 1.0]).unwrap();
        let ow = overlap_weights(&path5(), 1.0).unwrap();
        let s = dwb_variance(&y, &ow).unwrap();
        assert!((s.get(0, 0) - 8.0 / 65.0).abs() < 1e-14);
    }

    #[test]
    fn variance_matches_naive_double_sum() {
        // independent route: literal Σ_ij ω_ij u_i u_j' triple loop
        let net = Network::from_edge_list(
            9,
            (1..=9).map(|i| (i, i % 9 + 1, 1.0)),
            WeightMode::Unit,
        )
        .unwrap();
        let d = matrix(&net);
        let y = SampleMatrix::from_rows(&[
            vec![0.3, -1.0],
            vec![1.2, 0.4],
            vec![-0.7, 2.2],
            vec![0.0, -0.3],
            vec![2.1, 1.1],
            vec![-1.5, 0.6],
            vec![0.8, -2.0],
            vec![1.0, 0.0],
            vec![-0.2, 0.9],
        ])
        .unwrap();
        let ow = overlap_weights(&d, 2.0).unwrap();
        let s = dwb_variance(&y, &ow).unwrap();
        let u = y.demeaned();
        for p in 0..2 {
            for q in 0..2 {
                let mut naive = 0.0;
                for i in 0..9 {
                    for j in 0..9 {
                        naive += ow.omega[(i, j)] * u[(i, p)] * u[(j, q)];
                    }
                }
                naive /= 9.0;
                assert!((s.get(p, q) - naive).abs() < 1e-12, "entry ({p},{q})");
            }
        }
    }

    #[test]
    fn constant_data_gives_zero_statistics() {
        let y = SampleMatrix::from_column(&[4.0; 5]).unwrap();
        let run = dwb_run(&y, &path5(), 1.0, 40, None, 3).unwrap();
        assert!(run.replicates_t1.iter().all(|&t| t.abs() < 1e-12));
    }

    #[test]
    fn edgeless_run_reduces_to_plain_wild_bootstrap() {
        // T = sqrt(n)(Ybar* - Ybar) is exactly N(0, sample variance) under
        // the weight law; check the empirical variance within 4 SE
        let y = SampleMatrix::from_column(&[2.0, -1.0, 0.5, 3.0, -2.5, 1.0]).unwrap();
        let d = edgeless(6);
        let reps = 100_000;
        let run = dwb_run(&y, &d, 1.0, reps, Some(&Identity), 77).unwrap();
        let t2 = run.replicates_t2.as_ref().unwrap();
        let sigma2 = run.sigma_star.get(0, 0);
        let mean: f64 = t2.iter().sum::<f64>() / reps as f64;
        let var: f64 = t2.iter().map(|t| (t - mean) * (t - mean)).sum::<f64>() / reps as f64;
        let se_mean = sigma2.sqrt() / (reps as f64).sqrt();
        let se_var = sigma2 * (2.0 / reps as f64).sqrt();
        assert!(mean.abs() < 4.0 * se_mean, "mean {mean} (se {se_mean})");
        assert!(
            (var - sigma2).abs() < 4.0 * se_var,
            "var {var} vs {sigma2} (se {se_var})"
        );
    }

    #[test]
    fn cached_weights_reproduce_the_radius_run() {
        let y = SampleMatrix::from_column(&[1.0, 0.0, 2.0, 0.0, 1.0]).unwrap();
        let d = path5();
        let direct = dwb_run(&y, &d, 1.0, 32, None, 9).unwrap();
        let weights = DwbWeights::new(&d, 1.0).unwrap();
        let cached = dwb_run_with(&y, &weights, 32, None, 9).unwrap();
        assert_eq!(direct.replicates_t1, cached.replicates_t1);
    }

    #[test]
    fn runs_are_deterministic_across_thread_counts() {
        let y = SampleMatrix::from_column(&[1.0, 0.0, 2.0, 0.0, 1.0]).unwrap();
        let d = path5();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| dwb_run(&y, &d, 1.0, 64, None, 42).unwrap());
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| dwb_run(&y, &d, 1.0, 64, None, 42).unwrap());
        assert_eq!(one.replicates_t1, four.replicates_t1);
    }

    #[test]
    fn rejects_zero_replicates_and_mismatched_weights() {
        let y = SampleMatrix::from_column(&[1.0, 2.0]).unwrap();
        let d = edgeless(2);
        assert!(dwb_run(&y, &d, 1.0, 0, None, 1).is_err());
        let w3 = DwbWeights::new(&edgeless(3), 1.0).unwrap();
        assert!(dwb_run_with(&y, &w3, 5, None, 1).is_err());
    }
}
