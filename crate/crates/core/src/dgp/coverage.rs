//! End-to-end Monte Carlo coverage studies: draw a process with known mean
//! on a generated network, run a bootstrap scheme, and count how often the
//! truth lands inside the nominal confidence set.

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bootstrap::{bb_run, dwb_run_with, DwbWeights};
use crate::dgp::networks::{gen_network, NetworkKind};
use crate::dgp::processes::{CliffOrdModel, MaModel, ProcessKind};
use crate::error::{Error, Result};
use crate::graph::DistanceMatrix;
use crate::inference::run::Scheme;
use crate::inference::stats::empirical_quantile;
use crate::rng::{child_seed, stream_rng};
use crate::sample::SampleMatrix;

/// Simulation design: which network, which process, how many nodes.
///
/// The optional `seed` lets config files carry one; the library entry
/// points take an explicit seed argument, which front ends resolve from
/// the flag or the file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DgpSpec {
    pub network: NetworkKind,
    pub process: ProcessKind,
    pub n: usize,
    #[serde(default)]
    pub seed: Option<u64>,
}

/// Domain-separation tags under the run seed.
const TAG_NETWORK: u64 = 0xB10C;
const TAG_DATA: u64 = 0xDA7A;
const TAG_BOOT: u64 = 0xB007;

/// A zero-mean process with a known variance of the scaled sample mean.
trait ScaledProcess: Sync {
    fn draw_column(&self, rng: &mut ChaCha8Rng) -> Vec<f64>;
    fn true_scaled_mean_variance(&self) -> f64;
    /// True mean of every coordinate (zero for all shipped processes).
    fn true_mean(&self) -> f64 {
        0.0
    }
}

struct IidNormal {
    n: usize,
}

impl ScaledProcess for IidNormal {
    fn draw_column(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        use rand::Rng;
        (0..self.n)
            .map(|_| rng.sample(rand_distr::StandardNormal))
            .collect()
    }
    fn true_scaled_mean_variance(&self) -> f64 {
        1.0
    }
}

impl ScaledProcess for MaModel {
    fn draw_column(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        self.draw(rng)
    }
    fn true_scaled_mean_variance(&self) -> f64 {
        MaModel::true_scaled_mean_variance(self)
    }
}

impl ScaledProcess for CliffOrdModel {
    fn draw_column(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        self.draw(rng)
    }
    fn true_scaled_mean_variance(&self) -> f64 {
        CliffOrdModel::true_scaled_mean_variance(self)
    }
}

/// One Monte Carlo repetition of a coverage study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageRow {
    pub rep: usize,
    /// Whether the confidence ball contained the true mean.
    pub covered: bool,
    /// Bootstrap variance estimate of this repetition.
    pub sigma_star: f64,
    /// Confidence-ball radius of this repetition.
    pub radius: f64,
}

/// Result of a coverage study.
#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub scheme: Scheme,
    pub network: String,
    pub process: String,
    pub n: usize,
    pub s_n: f64,
    /// Bootstrap replicates per repetition.
    pub reps: usize,
    pub alpha: f64,
    pub mc_reps: usize,
    pub seed: u64,
    /// Fraction of repetitions whose confidence set contained the truth.
    pub coverage: f64,
    /// Binomial standard error at the nominal level,
    /// `sqrt(alpha (1 - alpha) / mc_reps)`.
    pub binomial_se: f64,
    /// Average bootstrap variance estimate across repetitions.
    pub mean_sigma_star: f64,
    /// Exact `Var(sqrt(n) * Ybar)` under the process.
    pub true_scaled_variance: f64,
    /// Average confidence-ball radius across repetitions.
    pub mean_radius: f64,
}

/// Run `mc_reps` independent repetitions of: draw the process, bootstrap it
/// with `reps` replicates, and check whether the true mean lies within the
/// `(1 - alpha)` confidence ball.
///
/// Every repetition draws its data and its bootstrap from separate
/// substreams of `seed`; results are identical for any thread count.
pub fn run_coverage(
    spec: &DgpSpec,
    scheme: Scheme,
    s_n: f64,
    reps: usize,
    alpha: f64,
    mc_reps: usize,
    seed: u64,
) -> Result<CoverageReport> {
    run_coverage_detailed(spec, scheme, s_n, reps, alpha, mc_reps, seed).map(|(rep, _)| rep)
}

/// Like [`run_coverage`], additionally returning the per-repetition rows
/// (for record files and external plotting).
pub fn run_coverage_detailed(
    spec: &DgpSpec,
    scheme: Scheme,
    s_n: f64,
    reps: usize,
    alpha: f64,
    mc_reps: usize,
    seed: u64,
) -> Result<(CoverageReport, Vec<CoverageRow>)> {
    if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
        return Err(Error::InvalidParameter {
            name: "alpha",
            reason: format!("level must lie in (0, 1), got {alpha}"),
        });
    }
    if mc_reps == 0 {
        return Err(Error::InvalidParameter {
            name: "mc_reps",
            reason: "at least one repetition is required".into(),
        });
    }
    let net = gen_network(spec.network, spec.n, child_seed(seed, TAG_NETWORK))?;
    let d = DistanceMatrix::from_network(&net);
    let process: Box<dyn ScaledProcess> = match spec.process {
        ProcessKind::IidNormal => Box::new(IidNormal { n: spec.n }),
        ProcessKind::MaNeighborhood { q } => Box::new(MaModel::new(&d, q)?),
        ProcessKind::CliffOrd { lambda } => Box::new(CliffOrdModel::new(&net, lambda)?),
    };
    let rows = coverage_engine(&d, process.as_ref(), scheme, s_n, reps, alpha, mc_reps, seed)?;
    let (coverage, mean_sigma_star, mean_radius) = aggregate(&rows);
    let report = CoverageReport {
        scheme,
        network: spec.network.name().to_string(),
        process: spec.process.name().to_string(),
        n: spec.n,
        s_n,
        reps,
        alpha,
        mc_reps,
        seed,
        coverage,
        binomial_se: (alpha * (1.0 - alpha) / mc_reps as f64).sqrt(),
        mean_sigma_star,
        true_scaled_variance: process.true_scaled_mean_variance(),
        mean_radius,
    };
    Ok((report, rows))
}

/// (coverage fraction, mean Sigma*, mean radius) over the rows.
fn aggregate(rows: &[CoverageRow]) -> (f64, f64, f64) {
    let m = rows.len() as f64;
    let covered = rows.iter().filter(|r| r.covered).count() as f64;
    let sig: f64 = rows.iter().map(|r| r.sigma_star).sum();
    let rad: f64 = rows.iter().map(|r| r.radius).sum();
    (covered / m, sig / m, rad / m)
}

/// Shared repetition loop.
#[allow(clippy::too_many_arguments)]
fn coverage_engine(
    d: &DistanceMatrix,
    process: &dyn ScaledProcess,
    scheme: Scheme,
    s_n: f64,
    reps: usize,
    alpha: f64,
    mc_reps: usize,
    seed: u64,
) -> Result<Vec<CoverageRow>> {
    // the weight table depends only on the network: build it once
    let weights = match scheme {
        Scheme::DependentWild => Some(DwbWeights::new(d, s_n)?),
        Scheme::Block => None,
    };
    let data_root = child_seed(seed, TAG_DATA);
    let boot_root = child_seed(seed, TAG_BOOT);
    let n = d.n();
    let mu = process.true_mean();

    (0..mc_reps)
        .into_par_iter()
        .map(|rep| -> Result<CoverageRow> {
            let mut rng = stream_rng(data_root, rep as u64);
            let y = SampleMatrix::from_column(&process.draw_column(&mut rng))?;
            let boot_seed = child_seed(boot_root, rep as u64);
            let run = match &weights {
                Some(w) => dwb_run_with(&y, w, reps, None, boot_seed)?,
                None => bb_run(&y, d, s_n, reps, None, boot_seed)?,
            };
            let c = empirical_quantile(&run.replicates_t1, 1.0 - alpha)?;
            let t1_truth = (n as f64).sqrt() * (y.mean()[0] - mu).abs();
            Ok(CoverageRow {
                rep,
                covered: t1_truth <= c,
                sigma_star: run.sigma_star.get(0, 0),
                radius: c / (n as f64).sqrt(),
            })
        })
        .collect()
}
