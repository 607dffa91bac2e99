//! Neighborhood-block bootstrap: resample whole distance balls with
//! replacement and study the quasi-average of the drawn blocks.
//!
//! For a block radius `s > 0`, node `k` owns the block `B_k = N(k; s+1)` —
//! every node within distance `s` of it, itself included. With
//! `delta = n^-1 Σ_k |B_k|` the average block size, a replicate draws
//! `K = floor(n / delta)` block indices uniformly with replacement and forms
//! the quasi-average
//!
//! ```text
//! Ytilde* = n^-1 * ( Z_{k_1} + .. + Z_{k_K} ),   Z_k = Σ_{j ∈ B_k} Y_j .
//! ```
//!
//! Under the resampling law, `E[Ytilde*] = mu* = K Zbar / n`, and
//! `Var(sqrt(n) Ytilde*) = (K delta / n) * Sigma*` with the closed-form
//! estimate `Sigma* = delta^-1 ( n^-1 Σ_k Z_k Z_k' − Zbar Zbar' )`. The
//! factor `K delta / n` equals 1 exactly when `n / delta` is an integer; it
//! is reported rather than folded in, so the estimator stays the literal
//! closed form.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::covariance::CovMatrix;
use crate::error::{Error, Result};
use crate::graph::DistanceMatrix;
use crate::inference::run::{BlockRunStats, BootstrapRun, Scheme};
use crate::rng::stream_rng;
use crate::sample::SampleMatrix;
use crate::smooth::{check_dim, SmoothFn};

/// Blocks, block sums, and the resampling constants derived from them.
#[derive(Debug, Clone)]
pub struct BlockSet {
    /// Block radius the set was built at.
    pub s_n: f64,
    /// `B_k = N(k; s_n + 1)` for every node `k`, each sorted ascending.
    pub blocks: Vec<Vec<usize>>,
    /// `n x v` matrix of block sums; row `k` is `Z_k`.
    pub block_sums: DMatrix<f64>,
    /// Blocks drawn per replicate: `floor(n / delta)`, computed exactly as
    /// `floor(n^2 / Σ_k |B_k|)` in integer arithmetic.
    pub k_n: usize,
    /// Average block size `delta(s_n)`.
    pub avg_block_size: f64,
}

impl BlockSet {
    fn n(&self) -> usize {
        self.blocks.len()
    }

    fn v(&self) -> usize {
        self.block_sums.ncols()
    }

    /// Mean of the block sums, `Zbar = n^-1 Σ_k Z_k`.
    fn block_sum_mean(&self) -> DVector<f64> {
        let n = self.n() as f64;
        DVector::from_fn(self.v(), |p, _| self.block_sums.column(p).sum() / n)
    }

    /// `K delta / n`, the exact resampling-law variance factor, computed
    /// from integers.
    pub fn law_variance_factor(&self) -> f64 {
        let total: usize = self.blocks.iter().map(Vec::len).sum();
        (self.k_n * total) as f64 / (self.n() * self.n()) as f64
    }
}

/// One bootstrap replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct BBReplicate {
    /// The `K` drawn block indices, in draw order (repetitions allowed).
    pub chosen_blocks: Vec<usize>,
    /// Quasi-average `Ytilde* = n^-1 Σ Z*`.
    pub quasi_average: DVector<f64>,
    /// Pseudo-sample size `L = Σ |B*|` over the drawn blocks.
    pub pseudo_sample_size: usize,
}

/// Build the block set for radius `s_n > 0`.
///
/// Fails with [`Error::BlocksTooLarge`] if `floor(n / delta)` would be zero —
/// the blocks cover so much of the graph that not even one fits the budget —
/// and suggests shrinking the radius.
pub fn make_blocks(d: &DistanceMatrix, y: &SampleMatrix, s_n: f64) -> Result<BlockSet> {
    if !s_n.is_finite() || s_n <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "s_n",
            reason: format!("block radius must be finite and > 0, got {s_n}"),
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
    let blocks: Vec<Vec<usize>> = (0..n).map(|k| d.neighborhood(k, s_n + 1.0)).collect();
    let total: usize = blocks.iter().map(Vec::len).sum();
    // floor(n / delta) = floor(n^2 / total), exact in integers
    let k_n = n * n / total;
    if k_n == 0 {
        return Err(Error::BlocksTooLarge);
    }
    let mut block_sums = DMatrix::zeros(n, v);
    for (k, block) in blocks.iter().enumerate() {
        for &j in block {
            for p in 0..v {
                block_sums[(k, p)] += y.get(j, p);
            }
        }
    }
    Ok(BlockSet {
        s_n,
        blocks,
        block_sums,
        k_n,
        avg_block_size: total as f64 / n as f64,
    })
}

/// Draw one replicate: `K` block indices uniform on the nodes, with
/// replacement, from the supplied stream.
pub fn bb_resample(bs: &BlockSet, rng: &mut ChaCha8Rng) -> BBReplicate {
    let n = bs.n();
    let chosen: Vec<usize> = (0..bs.k_n).map(|_| rng.gen_range(0..n)).collect();
    let mut sum = DVector::zeros(bs.v());
    let mut pseudo = 0usize;
    for &k in &chosen {
        sum += bs.block_sums.row(k).transpose();
        pseudo += bs.blocks[k].len();
    }
    BBReplicate {
        chosen_blocks: chosen,
        quasi_average: sum / n as f64,
        pseudo_sample_size: pseudo,
    }
}

/// Conditional mean of the quasi-average under the resampling law:
/// `mu* = K Zbar / n`.
pub fn bb_center(bs: &BlockSet) -> DVector<f64> {
    bs.block_sum_mean() * (bs.k_n as f64 / bs.n() as f64)
}

/// Closed-form block variance estimate
/// `Sigma* = delta^-1 ( n^-1 Σ_k Z_k Z_k' − Zbar Zbar' )`, positive
/// semi-definite by construction and exactly symmetric.
pub fn bb_variance(bs: &BlockSet) -> CovMatrix {
    let n = bs.n() as f64;
    let v = bs.v();
    let zbar = bs.block_sum_mean();
    let delta = bs.avg_block_size;
    CovMatrix::from_upper_fn(v, |p, q| {
        let m2 = (0..bs.n())
            .map(|k| bs.block_sums[(k, p)] * bs.block_sums[(k, q)])
            .sum::<f64>()
            / n;
        (m2 - zbar[p] * zbar[q]) / delta
    })
}

/// Full bootstrap run: `reps` replicates of `T1* = sqrt(n) |Ytilde* - mu*|`
/// (and `T2* = sqrt(n) (phi(Ytilde*) - phi(mu*))` when `phi` is given),
/// plus the closed-form variance and centering quantities.
///
/// Replicate `b` draws from the stream keyed by `b` under `seed`, so the
/// output is identical for any thread count.
pub fn bb_run(
    y: &SampleMatrix,
    d: &DistanceMatrix,
    s_n: f64,
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
    if let Some(f) = phi {
        check_dim(f, y.v())?;
    }
    let bs = make_blocks(d, y, s_n)?;
    let center = bb_center(&bs);
    let sigma_star = bb_variance(&bs);
    let n = bs.n();
    let sqrt_n = (n as f64).sqrt();
    let phi_at_center = phi.map(|f| f.eval(&center));

    let draws: Vec<(f64, Option<f64>, usize)> = (0..reps)
        .into_par_iter()
        .map(|b| {
            let mut rng = stream_rng(seed, b as u64);
            let rep = bb_resample(&bs, &mut rng);
            let t1 = sqrt_n * (&rep.quasi_average - &center).norm();
            let t2 = phi
                .map(|f| sqrt_n * (f.eval(&rep.quasi_average) - phi_at_center.unwrap()));
            (t1, t2, rep.pseudo_sample_size)
        })
        .collect();

    let mean_pseudo_ratio =
        draws.iter().map(|(_, _, l)| *l as f64).sum::<f64>() / (reps as f64 * n as f64);
    let sample_mean = y.mean();
    let phi_at_sample_mean = phi.map(|f| f.eval(&sample_mean));
    Ok(BootstrapRun {
        scheme: Scheme::Block,
        replicates_t1: draws.iter().map(|(t1, _, _)| *t1).collect(),
        replicates_t2: phi.map(|_| draws.iter().map(|(_, t2, _)| t2.unwrap()).collect()),
        sigma_star,
        center,
        sample_mean,
        phi_at_sample_mean,
        n,
        v: y.v(),
        s_n,
        reps,
        seed,
        block: Some(BlockRunStats {
            k_n: bs.k_n,
            avg_block_size: bs.avg_block_size,
            mean_pseudo_ratio,
            law_variance_factor: bs.law_variance_factor(),
        }),
    })
}
