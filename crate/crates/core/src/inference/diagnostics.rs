//! Finite-sample evaluation of the consistency conditions: every field is
//! the literal value of one displayed expression, computed on the realized
//! network with a user-supplied dependence-coefficient sequence.
//!
//! Nothing here produces a verdict. The conditions are asymptotic (they
//! require decay along a sequence of networks), so single-network values are
//! reported raw for the user to compare across sizes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::denseness::{
    denseness, local_denseness_profile, overlap_weights, quadruple_histogram, PairRadius,
};
use crate::graph::DistanceMatrix;

/// What to assume about dependence coefficients beyond the supplied range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailPolicy {
    /// Treat `gamma_s = 0` for `s` past the supplied values (finitely
    /// supported dependence).
    Zero,
    /// Refuse to run when the graph has distance classes beyond the
    /// supplied values.
    Reject,
}

/// User-supplied weak-dependence coefficients `gamma_1, gamma_2, ..`.
///
/// `gamma_0` is fixed at 1 by convention and never supplied. The
/// coefficients are model-level inputs — they are never estimated from
/// data; every diagnostic is conditional on the user's choice.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaSequence {
    values: Vec<f64>,
    tail: TailPolicy,
}

impl GammaSequence {
    /// Build from the values for `s = 1, 2, ..` and a tail policy.
    pub fn new(values: Vec<f64>, tail: TailPolicy) -> Result<Self> {
        for (i, &g) in values.iter().enumerate() {
            if !g.is_finite() || g < 0.0 {
                return Err(Error::InvalidParameter {
                    name: "gamma",
                    reason: format!("gamma_{} must be finite and >= 0, got {g}", i + 1),
                });
            }
        }
        Ok(GammaSequence { values, tail })
    }

    /// `gamma_s` with the conventions applied: 1 at `s = 0`, supplied values
    /// for `1 <= s <= S`, tail policy beyond.
    pub fn get(&self, s: usize) -> f64 {
        if s == 0 {
            1.0
        } else {
            self.values.get(s - 1).copied().unwrap_or(0.0)
        }
    }

    /// Number of supplied coefficients.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when no coefficients were supplied.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The tail policy.
    pub fn tail(&self) -> TailPolicy {
        self.tail
    }

    /// Fail under [`TailPolicy::Reject`] when the graph reaches distance
    /// classes the sequence does not cover.
    pub fn check_support(&self, max_class: usize) -> Result<()> {
        if self.tail == TailPolicy::Reject && self.values.len() < max_class {
            return Err(Error::GammaTooShort {
                needed: max_class,
                got: self.values.len(),
            });
        }
        Ok(())
    }
}

/// Which conditional third-moment norm `|W_i|_3` to use in the triple-sum
/// diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightNormProfile {
    /// The norms of the Gaussian multipliers actually shipped:
    /// `|W_i|_3 = sqrt(omega(i,i)) * (E|Z|^3)^{1/3}`.
    #[default]
    GaussianFromOmega,
    /// All norms set to 1 — the bare combinatorial triple sum.
    Unit,
}

/// Finite-sample values of the consistency conditions. All fields are
/// nonnegative; smaller is better in every case.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    /// `n^-1 Σ_{s>=1} delta_boundary(s;1) gamma_s` — the mean-convergence
    /// condition.
    pub lln_condition: f64,
    /// `Delta(s_n;2)/delta(s_n) + D(s_n)/sqrt(delta(s_n) n)` — block-size
    /// homogeneity.
    pub bb1_a: f64,
    /// `max_i |Σ_{j in B_i} (omega(j,j) - 1)| / sqrt(n)` — per-block weight
    /// balance.
    pub bb1_b: f64,
    /// `Σ_{s>=1} [ n^-1 Σ_i Σ_{j in shell(i;s)} |omega(i,j) - 1| ] gamma_s`
    /// — autocovariance recovery (per-`s` family, reported as the
    /// `gamma`-weighted sum).
    pub bb1_c: f64,
    /// `Σ_{s>=1} delta_boundary(s;1) gamma_s^{1-2/r}` — variance
    /// summability.
    pub bb2_a: f64,
    /// `n^-2 Σ_{s>=0} |H(s, 2 s_n + 1)| gamma_s^{1-2/r}` — quadruple-count
    /// growth (`gamma_0 = 1`).
    pub bb2_b: f64,
    /// `(delta(s_n)/n)^{1/3} Σ_{s>=0} delta_boundary_local(s, s_n)
    /// gamma_s^{1-2/p} + (delta(s_n)^{5/2}/n)^{2/3} Σ_{s>=0} h_local(s, s_n)
    /// gamma_s^{1-2/p}` — local-denseness growth for the block scheme.
    pub bb4: f64,
    /// `Delta(s_n;1)/delta(s_n) + D(s_n)/n` — the wild-scheme analogue of
    /// `bb1_a` (weaker).
    pub dwb2_a: f64,
    /// Same expression as `bb1_c`; listed separately because the wild
    /// scheme needs only this and `dwb2_a`.
    pub dwb2_b: f64,
    /// `n^{-3/2} Σ_i Σ_{j in B_i} Σ_{k in B_i ∪ B_j} nu_i nu_j nu_k` with
    /// `nu` the selected third-moment norms — the non-Gaussian-weight
    /// condition.
    pub dwb_third_moment: f64,
    /// Largest off-diagonal overlap weight — a proxy for how far the
    /// weight table is from the identity.
    pub omega_max_offdiag: f64,
}

/// Evaluate every condition at block radius `s_n` with moment orders
/// `r, p > 2`.
///
/// The quadruple histogram is quadratic in the number of admissible node
/// pairs, so expect roughly `O((n delta(2 s_n+1))^2)` work for `bb2_b` —
/// fine for calibration-sized graphs, noticeable beyond tens of thousands
/// of pairs.
pub fn diagnostics(
    d: &DistanceMatrix,
    s_n: f64,
    gamma: &GammaSequence,
    r: f64,
    p: f64,
    profile: WeightNormProfile,
) -> Result<DiagnosticsReport> {
    if !s_n.is_finite() || s_n <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "s_n",
            reason: format!("block radius must be finite and > 0, got {s_n}"),
        });
    }
    for (name, val) in [("r", r), ("p", p)] {
        if !val.is_finite() || val <= 2.0 {
            return Err(Error::InvalidParameter {
                name,
                reason: format!("moment order must be finite and > 2, got {val}"),
            });
        }
    }
    let n = d.n();
    let nf = n as f64;
    let max_class = d.max_class();
    gamma.check_support(max_class)?;

    let exp_r = 1.0 - 2.0 / r;
    let exp_p = 1.0 - 2.0 / p;

    // boundary-shell first moments per distance class
    let shell_first: Vec<f64> = (1..=max_class)
        .map(|s| denseness(d, s as f64, 1).map(|rep| rep.delta_boundary))
        .collect::<Result<_>>()?;
    let lln_condition = shell_first
        .iter()
        .enumerate()
        .map(|(idx, &ds)| ds * gamma.get(idx + 1))
        .sum::<f64>()
        / nf;
    let bb2_a = shell_first
        .iter()
        .enumerate()
        .map(|(idx, &ds)| ds * gamma.get(idx + 1).powf(exp_r))
        .sum::<f64>();

    // block-size aggregates at the chosen radius
    let rep2 = denseness(d, s_n, 2)?;
    let rep1 = denseness(d, s_n, 1)?;
    let delta = rep1.delta;
    let d_max = rep1.d_max as f64;
    let bb1_a = rep2.delta_central / delta + d_max / (delta * nf).sqrt();
    let dwb2_a = rep1.delta_central / delta + d_max / nf;

    // overlap-weight conditions
    let ow = overlap_weights(d, s_n)?;
    let blocks: Vec<Vec<usize>> = (0..n).map(|i| d.neighborhood(i, s_n + 1.0)).collect();
    let bb1_b = blocks
        .iter()
        .map(|block| {
            block
                .iter()
                .map(|&j| ow.omega[(j, j)] - 1.0)
                .sum::<f64>()
                .abs()
        })
        .fold(0.0f64, f64::max)
        / nf.sqrt();
    // per-class sum of |omega(i,j) - 1| over boundary shells
    let mut shell_omega_dev = vec![0.0f64; max_class + 1];
    for i in 0..n {
        for (j, &dij) in d.row(i).iter().enumerate() {
            if dij >= 1.0 && dij.is_finite() {
                shell_omega_dev[dij.floor() as usize] += (ow.omega[(i, j)] - 1.0).abs();
            }
        }
    }
    let bb1_c = (1..=max_class)
        .map(|s| shell_omega_dev[s] / nf * gamma.get(s))
        .sum::<f64>();
    let dwb2_b = bb1_c;
    let omega_max_offdiag = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| ow.omega[(i, j)])
        .fold(0.0f64, f64::max);

    // quadruple growth at pair radius 2 s_n + 1
    let hist = quadruple_histogram(d, PairRadius::Finite(2.0 * s_n + 1.0));
    let bb2_b = hist
        .iter()
        .enumerate()
        .map(|(s, &h)| h as f64 * gamma.get(s).powf(exp_r))
        .sum::<f64>()
        / (nf * nf);

    // local denseness at ball radius s_n
    let (delta_loc, h_loc) = local_denseness_profile(d, s_n);
    let loc_sum_delta = delta_loc
        .iter()
        .enumerate()
        .map(|(s, &v)| v * gamma.get(s).powf(exp_p))
        .sum::<f64>();
    let loc_sum_h = h_loc
        .iter()
        .enumerate()
        .map(|(s, &v)| v * gamma.get(s).powf(exp_p))
        .sum::<f64>();
    let bb4 = (delta / nf).powf(1.0 / 3.0) * loc_sum_delta
        + (delta.powf(2.5) / nf).powf(2.0 / 3.0) * loc_sum_h;

    // third-moment triple sum over blocks
    let nu: Vec<f64> = match profile {
        WeightNormProfile::Unit => vec![1.0; n],
        WeightNormProfile::GaussianFromOmega => {
            // E|Z|^3 = 2 sqrt(2/pi) for standard normal Z
            let z3 = (2.0 * (2.0 / std::f64::consts::PI).sqrt()).powf(1.0 / 3.0);
            (0..n).map(|i| ow.omega[(i, i)].sqrt() * z3).collect()
        }
    };
    let mut triple = 0.0f64;
    for i in 0..n {
        for &j in &blocks[i] {
            // union of two sorted lists
            let (bi, bj) = (&blocks[i], &blocks[j]);
            let (mut a, mut b) = (0usize, 0usize);
            let mut union_nu = 0.0;
            while a < bi.len() || b < bj.len() {
                match (bi.get(a), bj.get(b)) {
                    (Some(&x), Some(&y)) if x == y => {
                        union_nu += nu[x];
                        a += 1;
                        b += 1;
                    }
                    (Some(&x), Some(&y)) if x < y => {
                        union_nu += nu[x];
                        a += 1;
                    }
                    (Some(_), Some(&y)) => {
                        union_nu += nu[y];
                        b += 1;
                    }
                    (Some(&x), None) => {
                        union_nu += nu[x];
                        a += 1;
                    }
                    (None, Some(&y)) => {
                        union_nu += nu[y];
                        b += 1;
                    }
                    (None, None) => break,
                }
            }
            triple += nu[i] * nu[j] * union_nu;
        }
    }
    let dwb_third_moment = triple / nf.powf(1.5);

    Ok(DiagnosticsReport {
        lln_condition,
        bb1_a,
        bb1_b,
        bb1_c,
        bb2_a,
        bb2_b,
        bb4,
        dwb2_a,
        dwb2_b,
        dwb_third_moment,
        omega_max_offdiag,
    })
}

/// Weak-dependence decay rate of a locally Lipschitz transform: for moment
/// order `p > 1` and transform growth order `tau in [1, p)`, the
/// coefficients decay at rate `(p - tau)/(p - 1)` when the quartic term is
/// absent, else `(p - tau)/(p + tau - 2)`. Always in `(0, 1]`.
pub fn dependence_transform_rate(p: f64, tau: f64, c4_zero: bool) -> Result<f64> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::InvalidParameter {
            name: "p",
            reason: format!("moment order must be finite and > 1, got {p}"),
        });
    }
    if !tau.is_finite() || tau < 1.0 || tau >= p {
        return Err(Error::InvalidParameter {
            name: "tau",
            reason: format!("growth order must satisfy 1 <= tau < p, got tau={tau}, p={p}"),
        });
    }
    Ok(if c4_zero {
        (p - tau) / (p - 1.0)
    } else {
        (p - tau) / (p + tau - 2.0)
    })
}
