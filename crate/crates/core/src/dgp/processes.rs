//! Simulated node processes with known means and known variance of the
//! scaled sample mean, so bootstrap output can be checked against truth.
//!
//! All three processes have true mean zero. "Scaled-mean variance" always
//! refers to `Var(sqrt(n) * Ybar)`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::network::Network;
use crate::graph::DistanceMatrix;
use crate::rng::stream_rng;
use crate::sample::SampleMatrix;

/// Family of simulated processes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProcessKind {
    /// Independent standard normals — the no-dependence baseline.
    IidNormal,
    /// Normalized innovation sums over radius-`q` neighborhoods; nodes
    /// farther apart than `2(q+1)` are independent.
    MaNeighborhood { q: f64 },
    /// Autoregression in the network: `Y = lambda * Wtilde * Y + u` with the
    /// adjacency matrix normalized by its spectral radius.
    CliffOrd { lambda: f64 },
}

impl ProcessKind {
    /// Short name used in reports.
    pub fn name(self) -> &'static str {
        match self {
            ProcessKind::IidNormal => "iid_normal",
            ProcessKind::MaNeighborhood { .. } => "ma_neighborhood",
            ProcessKind::CliffOrd { .. } => "cliff_ord",
        }
    }
}

/// Draw `n` independent standard normals as a one-column sample.
pub fn gen_iid_normal(n: usize, seed: u64) -> Result<SampleMatrix> {
    let mut rng = stream_rng(seed, 0);
    let y: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
    SampleMatrix::from_column(&y)
}

/// Moving-average process on neighborhoods: node `i` averages iid standard
/// normal innovations over its open ball of radius `q + 1`, normalized by
/// the square root of the ball size so every marginal variance is exactly 1.
///
/// Two nodes are independent as soon as their distance reaches `2(q + 1)`,
/// because their balls can no longer share an innovation.
#[derive(Debug, Clone)]
pub struct MaModel {
    /// Sorted open ball `N(i; q+1)` per node; never empty (contains `i`).
    balls: Vec<Vec<usize>>,
    q: f64,
}

impl MaModel {
    /// Precompute the neighborhood structure for radius `q >= 0`.
    pub fn new(d: &DistanceMatrix, q: f64) -> Result<Self> {
        if !q.is_finite() || q < 0.0 {
            return Err(Error::InvalidParameter {
                name: "q",
                reason: format!("neighborhood radius must be finite and >= 0, got {q}"),
            });
        }
        let balls = (0..d.n()).map(|i| d.neighborhood(i, q + 1.0)).collect();
        Ok(MaModel { balls, q })
    }

    /// The neighborhood radius.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.balls.len()
    }

    /// One draw of the process.
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let n = self.balls.len();
        let eta: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        self.balls
            .iter()
            .map(|ball| {
                ball.iter().map(|&j| eta[j]).sum::<f64>() / (ball.len() as f64).sqrt()
            })
            .collect()
    }

    /// Exact covariance of two coordinates: shared innovations over the
    /// geometric mean of the ball sizes.
    pub fn covariance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = (&self.balls[i], &self.balls[j]);
        let (mut x, mut y, mut shared) = (0usize, 0usize, 0usize);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Equal => {
                    shared += 1;
                    x += 1;
                    y += 1;
                }
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
            }
        }
        shared as f64 / ((a.len() * b.len()) as f64).sqrt()
    }

    /// Exact `Var(sqrt(n) * Ybar)`: with `c_k` the total normalized loading
    /// of innovation `k` across all nodes, the variance is `n^-1 Σ_k c_k²`.
    pub fn true_scaled_mean_variance(&self) -> f64 {
        let n = self.balls.len();
        let mut c = vec![0.0f64; n];
        for ball in &self.balls {
            let w = 1.0 / (ball.len() as f64).sqrt();
            for &k in ball {
                c[k] += w;
            }
        }
        c.iter().map(|x| x * x).sum::<f64>() / n as f64
    }
}

/// Convenience draw of the neighborhood moving average as a sample.
pub fn gen_ma_neighborhood(d: &DistanceMatrix, q: f64, seed: u64) -> Result<SampleMatrix> {
    let model = MaModel::new(d, q)?;
    SampleMatrix::from_column(&model.draw(&mut stream_rng(seed, 0)))
}

/// Network autoregression `Y = lambda * Wtilde * Y + u`, solved as
/// `Y = C u` with `C = (I - lambda * Wtilde)^-1` and `Wtilde` the adjacency
/// matrix divided by its spectral radius. Innovations are iid standard
/// normal.
#[derive(Debug, Clone)]
pub struct CliffOrdModel {
    lambda: f64,
    spectral_radius: f64,
    /// `I - lambda * Wtilde`, kept for residual checks.
    system: DMatrix<f64>,
    /// `C = system^-1`.
    c: DMatrix<f64>,
}

/// Iterations after which power iteration is declared stuck. Generous
/// because near-bipartite chains (long paths) have a thin spectral gap even
/// after shifting.
const POWER_MAX_ITER: usize = 500_000;

/// Largest eigenvalue in magnitude of the symmetric nonnegative adjacency
/// matrix, by power iteration on the diagonally shifted matrix `A + σI`
/// (σ = max row sum). The shift makes the dominant eigenvalue simple even
/// when the spectrum is symmetric around zero (paths, stars, even cycles),
/// where unshifted iteration oscillates. Since `A + σI` is positive
/// semidefinite, `ρ(A) = λ_max(A + σI) − σ`.
fn spectral_radius(a: &DMatrix<f64>) -> Result<f64> {
    let n = a.nrows();
    let sigma = (0..n)
        .map(|i| a.row(i).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0f64, f64::max);
    if sigma == 0.0 {
        return Ok(0.0); // no edges at all
    }
    let shifted = {
        let mut m = a.clone();
        for i in 0..n {
            m[(i, i)] += sigma;
        }
        m
    };
    let mut v = DVector::from_element(n, (n as f64).sqrt().recip());
    let mut prev = f64::NAN;
    for _ in 0..POWER_MAX_ITER {
        let w = &shifted * &v;
        let rayleigh = v.dot(&w); // v is unit-norm, so this is the quotient
        let norm = w.norm();
        if norm == 0.0 {
            return Ok(0.0);
        }
        v = w / norm;
        if (rayleigh - prev).abs() <= 1e-10 * rayleigh.abs().max(1.0) {
            return Ok((rayleigh - sigma).max(0.0));
        }
        prev = rayleigh;
    }
    Err(Error::PowerIterationDiverged {
        iterations: POWER_MAX_ITER,
    })
}

impl CliffOrdModel {
    /// Build the model on a network for autoregression strength
    /// `|lambda| < 1`.
    ///
    /// An edgeless network has spectral radius zero; the model then
    /// degenerates to `Y = u` regardless of `lambda`.
    pub fn new(net: &Network, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda.abs() >= 1.0 {
            return Err(Error::InvalidParameter {
                name: "lambda",
                reason: format!("autoregression strength must satisfy |lambda| < 1, got {lambda}"),
            });
        }
        let n = net.node_count();
        let mut a = DMatrix::<f64>::zeros(n, n);
        for e in net.edges() {
            a[(e.a, e.b)] = e.weight;
            a[(e.b, e.a)] = e.weight;
        }
        let rho = spectral_radius(&a)?;
        let system = if rho == 0.0 {
            DMatrix::identity(n, n)
        } else {
            DMatrix::identity(n, n) - a * (lambda / rho)
        };
        let c = system.clone().try_inverse().ok_or(Error::InvalidParameter {
            name: "lambda",
            reason: "autoregression system is numerically singular".into(),
        })?;
        Ok(CliffOrdModel {
            lambda,
            spectral_radius: rho,
            system,
            c,
        })
    }

    /// The autoregression strength.
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Spectral radius of the raw adjacency matrix.
    pub fn spectral_radius(&self) -> f64 {
        self.spectral_radius
    }

    /// The solved coefficient matrix `C`.
    pub fn coefficients(&self) -> &DMatrix<f64> {
        &self.c
    }

    /// Number of nodes.
    pub fn n(&self) -> usize {
        self.c.nrows()
    }

    /// Map innovations to the process: `Y = C u`.
    pub fn from_innovations(&self, u: &DVector<f64>) -> Result<DVector<f64>> {
        if u.len() != self.n() {
            return Err(Error::DimensionMismatch {
                what: "innovation vector",
                expected: self.n(),
                actual: u.len(),
            });
        }
        Ok(&self.c * u)
    }

    /// One draw with iid standard normal innovations.
    pub fn draw(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let u = DVector::from_iterator(
            self.n(),
            (0..self.n()).map(|_| rng.sample::<f64, _>(StandardNormal)),
        );
        (&self.c * u).iter().copied().collect()
    }

    /// Residual of the defining equation for a given draw pair, relative to
    /// the innovation norm — should sit at solver precision.
    pub fn relative_residual(&self, y: &DVector<f64>, u: &DVector<f64>) -> f64 {
        (&self.system * y - u).norm() / u.norm().max(f64::MIN_POSITIVE)
    }

    /// Dependence coefficients `gamma_s = E|u| * max_i Σ_{j: d(i,j) >= s+1}
    /// |C_ij|` for `s = 1 .. max distance class`, with `E|u| = sqrt(2/π)`
    /// for standard normal innovations. Nonincreasing in `s` by
    /// construction.
    pub fn gamma_series(&self, d: &DistanceMatrix) -> Result<Vec<f64>> {
        let n = self.n();
        if d.n() != n {
            return Err(Error::DimensionMismatch {
                what: "distance matrix",
                expected: n,
                actual: d.n(),
            });
        }
        let s_max = d.max_class();
        if s_max == 0 {
            return Ok(Vec::new());
        }
        let mu = (2.0 / std::f64::consts::PI).sqrt();
        let mut gamma = vec![0.0f64; s_max];
        for i in 0..n {
            // bucket |C_ij| by the largest s with d(i,j) >= s+1, then
            // suffix-sum so tail[s] = Σ_{j: d >= s+1} |C_ij|
            let mut bucket = vec![0.0f64; s_max + 1];
            for j in 0..n {
                let dij = d.get(i, j);
                if dij.is_finite() && dij >= 2.0 {
                    // contributes to every s <= floor(dij) - 1
                    bucket[(dij.floor() as usize - 1).min(s_max)] += self.c[(i, j)].abs();
                }
                // infinite distance would contribute for every s, but C is
                // zero across components, so it never does
            }
            let mut tail = 0.0;
            for s in (1..=s_max).rev() {
                tail += bucket[s];
                gamma[s - 1] = gamma[s - 1].max(mu * tail);
            }
        }
        Ok(gamma)
    }

    /// Exact `Var(sqrt(n) * Ybar) = n^-1 ‖Cᵀ1‖²` — each innovation enters
    /// the scaled mean with its column sum of `C`.
    pub fn true_scaled_mean_variance(&self) -> f64 {
        let n = self.n();
        (0..n)
            .map(|k| self.c.column(k).sum().powi(2))
            .sum::<f64>()
            / n as f64
    }
}

/// Convenience draw of the autoregression: the sample plus its dependence
/// coefficients (which need the distance matrix).
pub fn gen_cliff_ord(
    net: &Network,
    d: &DistanceMatrix,
    lambda: f64,
    seed: u64,
) -> Result<(SampleMatrix, Vec<f64>)> {
    let model = CliffOrdModel::new(net, lambda)?;
    let y = SampleMatrix::from_column(&model.draw(&mut stream_rng(seed, 0)))?;
    let gamma = model.gamma_series(d)?;
    Ok((y, gamma))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dgp::networks::{gen_network, NetworkKind};
    use crate::graph::network::WeightMode;

    fn net_and_dist(kind: NetworkKind, n: usize) -> (Network, DistanceMatrix) {
        let net = gen_network(kind, n, 0).unwrap();
        let d = DistanceMatrix::from_network(&net);
        (net, d)
    }

    #[test]
    fn iid_is_reproducible_and_roughly_standard() {
        let a = gen_iid_normal(1000, 5).unwrap();
        let b = gen_iid_normal(1000, 5).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let mean = a.mean()[0];
        let var = a
            .matrix()
            .iter()
            .map(|x| (x - mean).powi(2))
            .sum::<f64>()
            / 999.0;
        assert!(mean.abs() < 4.0 / (1000f64).sqrt());
        assert!((var - 1.0).abs() < 0.2);
    }

    #[test]
    fn ma_radius_zero_is_iid() {
        let (_, d) = net_and_dist(NetworkKind::Cycle, 8);
        let model = MaModel::new(&d, 0.0).unwrap();
        assert!(model.balls.iter().all(|b| b.len() == 1));
        assert_eq!(model.true_scaled_mean_variance(), 1.0);
        let mut rng = stream_rng(3, 0);
        let y = model.draw(&mut rng);
        // same innovations pass straight through
        let mut rng2 = stream_rng(3, 0);
        let eta: Vec<f64> = (0..8).map(|_| rng2.sample(StandardNormal)).collect();
        assert_eq!(y, eta);
    }

    #[test]
    fn ma_line_interior_correlation_is_two_thirds() {
        let (_, d) = net_and_dist(NetworkKind::Line, 9);
        let model = MaModel::new(&d, 1.0).unwrap();
        // interior nodes have 3-element balls overlapping in 2 innovations
        assert!((model.covariance(4, 5) - 2.0 / 3.0).abs() < 1e-15);
        assert!((model.covariance(4, 4) - 1.0).abs() < 1e-15);
        // disjoint balls at distance >= 2(q+1) = 4
        assert_eq!(model.covariance(0, 8), 0.0);
        assert_eq!(model.covariance(2, 6), 0.0);
        // distance 2: balls still share one innovation
        assert!((model.covariance(2, 4) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn ma_cycle_scaled_variance_is_three() {
        // every ball has 3 nodes and every innovation enters 3 balls, so
        // c_k = 3/sqrt(3) and the scaled-mean variance is exactly 3
        for n in [6, 10, 400] {
            let (_, d) = net_and_dist(NetworkKind::Cycle, n);
            let model = MaModel::new(&d, 1.0).unwrap();
            assert!((model.true_scaled_mean_variance() - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn ma_marginals_are_standard_over_many_draws() {
        let (_, d) = net_and_dist(NetworkKind::Line, 5);
        let model = MaModel::new(&d, 1.0).unwrap();
        let reps = 100_000usize;
        let mut sums = [0.0f64; 5];
        let mut sq = [0.0f64; 5];
        let mut rng = stream_rng(11, 0);
        for _ in 0..reps {
            let y = model.draw(&mut rng);
            for (i, v) in y.iter().enumerate() {
                sums[i] += v;
                sq[i] += v * v;
            }
        }
        for i in 0..5 {
            let mean = sums[i] / reps as f64;
            let var = sq[i] / reps as f64 - mean * mean;
            // SE(mean) = 1/sqrt(reps); SE(var) ≈ sqrt(2/reps)
            assert!(mean.abs() < 4.0 / (reps as f64).sqrt(), "node {i}: {mean}");
            assert!(
                (var - 1.0).abs() < 4.0 * (2.0 / reps as f64).sqrt(),
                "node {i}: {var}"
            );
        }
    }

    #[test]
    fn ma_empirical_covariance_vanishes_past_the_dependence_range() {
        let (_, d) = net_and_dist(NetworkKind::Line, 9);
        let model = MaModel::new(&d, 1.0).unwrap();
        let reps = 100_000usize;
        let mut cross = 0.0f64;
        let mut rng = stream_rng(13, 0);
        for _ in 0..reps {
            let y = model.draw(&mut rng);
            cross += y[0] * y[8]; // distance 8 >= 2(q+1) = 4
        }
        let est = cross / reps as f64;
        // product of independent standard normals has variance 1
        assert!(est.abs() < 4.0 / (reps as f64).sqrt(), "cov {est}");
    }

    #[test]
    fn spectral_radius_known_values() {
        // 2-regular cycle: rho = 2; star on n: rho = sqrt(n-1); edge: 1
        let (net, _) = net_and_dist(NetworkKind::Cycle, 6);
        let m = CliffOrdModel::new(&net, 0.5).unwrap();
        assert!((m.spectral_radius() - 2.0).abs() < 1e-8);
        let (net, _) = net_and_dist(NetworkKind::Star, 10);
        let m = CliffOrdModel::new(&net, 0.5).unwrap();
        assert!((m.spectral_radius() - 3.0).abs() < 1e-8);
        let (net, _) = net_and_dist(NetworkKind::Line, 2);
        let m = CliffOrdModel::new(&net, 0.5).unwrap();
        assert!((m.spectral_radius() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn two_node_model_matches_the_closed_form() {
        // single edge, lambda = 1/2: Wtilde swaps coordinates, and
        // (I - Wtilde/2)^-1 = [[4/3, 2/3], [2/3, 4/3]]
        let (net, d) = net_and_dist(NetworkKind::Line, 2);
        let m = CliffOrdModel::new(&net, 0.5).unwrap();
        let c = m.coefficients();
        for (i, j, want) in [(0, 0, 4.0 / 3.0), (0, 1, 2.0 / 3.0), (1, 0, 2.0 / 3.0), (1, 1, 4.0 / 3.0)] {
            assert!((c[(i, j)] - want).abs() < 1e-12, "C[{i},{j}] = {}", c[(i, j)]);
        }
        // each row of C sums to 2, so Var(sqrt(2) * mean) = (4 + 4)/2 = 4
        assert!((m.true_scaled_mean_variance() - 4.0).abs() < 1e-12);
        // epsilon_1 = (4/3) u_1 + (2/3) u_2
        let u = DVector::from_vec(vec![3.0, -1.5]);
        let eps = m.from_innovations(&u).unwrap();
        assert!((eps[0] - (4.0 - 1.0)).abs() < 1e-12);
        // both nodes are at distance 1 < 2, so gamma_1 has no mass
        assert_eq!(m.gamma_series(&d).unwrap(), vec![0.0]);
    }

    #[test]
    fn lambda_zero_is_the_identity_model() {
        let (net, d) = net_and_dist(NetworkKind::Cycle, 7);
        let m = CliffOrdModel::new(&net, 0.0).unwrap();
        assert_eq!(m.coefficients(), &DMatrix::identity(7, 7));
        assert!(m.gamma_series(&d).unwrap().iter().all(|&g| g == 0.0));
        assert!((m.true_scaled_mean_variance() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn edgeless_network_degenerates_to_innovations() {
        let net = Network::from_edge_list(5, Vec::new(), WeightMode::Unit).unwrap();
        let m = CliffOrdModel::new(&net, 0.9).unwrap();
        assert_eq!(m.spectral_radius(), 0.0);
        assert_eq!(m.coefficients(), &DMatrix::identity(5, 5));
        let d = DistanceMatrix::from_network(&net);
        assert!(m.gamma_series(&d).unwrap().is_empty());
    }

    #[test]
    fn residual_check_holds_on_random_draws() {
        let (net, _) = net_and_dist(NetworkKind::ErdosRenyi { p: 0.15 }, 40);
        let m = CliffOrdModel::new(&net, 0.6).unwrap();
        let mut rng = stream_rng(21, 0);
        for _ in 0..20 {
            let u = DVector::from_iterator(
                40,
                (0..40).map(|_| rng.sample::<f64, _>(StandardNormal)),
            );
            let y = m.from_innovations(&u).unwrap();
            assert!(m.relative_residual(&y, &u) <= 1e-8);
        }
    }

    #[test]
    fn gamma_series_is_nonincreasing_and_positive_under_dependence() {
        let (net, d) = net_and_dist(NetworkKind::Cycle, 12);
        let m = CliffOrdModel::new(&net, 0.5).unwrap();
        let g = m.gamma_series(&d).unwrap();
        assert_eq!(g.len(), d.max_class());
        assert!(g[0] > 0.0);
        assert!(g.windows(2).all(|w| w[0] >= w[1]));
        // brute-force the definition for every s
        let mu = (2.0 / std::f64::consts::PI).sqrt();
        for (idx, &gs) in g.iter().enumerate() {
            let s = (idx + 1) as f64;
            let direct = (0..12)
                .map(|i| {
                    (0..12)
                        .filter(|&j| d.get(i, j) >= s + 1.0)
                        .map(|j| m.coefficients()[(i, j)].abs())
                        .sum::<f64>()
                })
                .fold(0.0f64, f64::max)
                * mu;
            assert!((gs - direct).abs() < 1e-12, "s={s}: {gs} vs {direct}");
        }
    }

    #[test]
    fn rejects_out_of_range_strength_and_radius() {
        let (net, d) = net_and_dist(NetworkKind::Cycle, 5);
        for lambda in [1.0, -1.0, 1.5, f64::NAN] {
            assert!(CliffOrdModel::new(&net, lambda).is_err());
        }
        assert!(MaModel::new(&d, -0.5).is_err());
        assert!(MaModel::new(&d, f64::INFINITY).is_err());
    }

    #[test]
    fn convenience_generators_are_deterministic() {
        let (net, d) = net_and_dist(NetworkKind::Cycle, 10);
        let (y1, g1) = gen_cliff_ord(&net, &d, 0.3, 9).unwrap();
        let (y2, g2) = gen_cliff_ord(&net, &d, 0.3, 9).unwrap();
        assert_eq!(y1.matrix(), y2.matrix());
        assert_eq!(g1, g2);
        let m1 = gen_ma_neighborhood(&d, 1.0, 4).unwrap();
        let m2 = gen_ma_neighborhood(&d, 1.0, 4).unwrap();
        assert_eq!(m1.matrix(), m2.matrix());
    }
}
