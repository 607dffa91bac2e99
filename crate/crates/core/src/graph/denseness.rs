//! Network denseness measures, quadruple counts, and overlap weights.
//!
//! For a distance matrix `D` on `n` nodes and a radius argument `s >= 0`, the
//! aggregate measures summarize how fast neighborhoods grow:
//!
//! ```text
//! delta(s; k)          = n^-1 * sum_i |N(i; s+1)|^k        (k-th moment of ball sizes)
//! delta_boundary(s; k) = n^-1 * sum_i |N∂(i; s)|^k         (k-th moment of shell sizes)
//! d_max(s)             = max_i |N(i; s+1)|
//! d_max_boundary(s)    = max_i |N∂(i; s)|
//! delta_central(s; k)  = n^-1 * sum_i | |N(i; s+1)| - delta(s; 1) |^k
//! ```
//!
//! The shorthand `delta(s)` always means `delta(s; 1)`, the average ball size,
//! which doubles as the average block size of the block bootstrap.
//!
//! The quadruple family `H(s, m)` collects ordered quadruples `(i, j, k, l)`
//! with `j ∈ N(i; m+1)`, `l ∈ N(k; m+1)` whose pair sets are at set distance
//! class `s`: `floor( min over cross pairs of d ) = s`. It drives the
//! fourth-moment diagnostics.
//!
//! The local measures restrict attention to a single ball `N(i; m)`:
//! `delta_boundary_local(s, m)` averages, per member of the ball, how many
//! other members sit in its distance-`[s, s+1)` shell, maximized over `i`;
//! `h_local(s, m)` counts quadruples from the ball classified by the distance
//! of their base pair, normalized by `|N(i; m)|^3`. Both equal 1 at `s = 0`
//! and `h_local <= delta_boundary_local` everywhere, by construction.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::distance::DistanceMatrix;

/// Aggregate denseness measures at radius `s` and moment order `k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensenessReport {
    /// Radius argument the report was computed at.
    pub s: f64,
    /// Moment order for `delta`, `delta_boundary`, `delta_central`.
    pub k: u32,
    /// `n^-1 sum_i |N(i; s+1)|^k`
    pub delta: f64,
    /// `n^-1 sum_i |N∂(i; s)|^k`
    pub delta_boundary: f64,
    /// `max_i |N(i; s+1)|`
    pub d_max: usize,
    /// `max_i |N∂(i; s)|`
    pub d_max_boundary: usize,
    /// `n^-1 sum_i | |N(i; s+1)| - delta(s; 1) |^k`
    pub delta_central: f64,
}

/// Ball sizes `|N(i; s+1)|` for every node.
fn ball_sizes(d: &DistanceMatrix, s: f64) -> Vec<usize> {
    let r = s + 1.0;
    (0..d.n())
        .map(|i| d.row(i).iter().filter(|&&x| x < r).count())
        .collect()
}

/// Shell sizes `|N∂(i; s)|` for every node.
fn shell_sizes(d: &DistanceMatrix, s: f64) -> Vec<usize> {
    (0..d.n())
        .map(|i| {
            d.row(i)
                .iter()
                .filter(|&&x| s <= x && x < s + 1.0)
                .count()
        })
        .collect()
}

/// Compute the aggregate denseness measures at radius `s`, moment order `k`.
///
/// Preconditions: `s >= 0` finite, `k >= 1`.
pub fn denseness(d: &DistanceMatrix, s: f64, k: u32) -> Result<DensenessReport> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::InvalidParameter {
            name: "s",
            reason: format!("radius must be finite and >= 0, got {s}"),
        });
    }
    if k == 0 {
        return Err(Error::InvalidParameter {
            name: "k",
            reason: "moment order must be >= 1".into(),
        });
    }
    let n = d.n() as f64;
    let balls = ball_sizes(d, s);
    let shells = shell_sizes(d, s);
    let delta1 = balls.iter().map(|&b| b as f64).sum::<f64>() / n;
    let pow = |x: f64| x.powi(k as i32);
    Ok(DensenessReport {
        s,
        k,
        delta: balls.iter().map(|&b| pow(b as f64)).sum::<f64>() / n,
        delta_boundary: shells.iter().map(|&b| pow(b as f64)).sum::<f64>() / n,
        d_max: balls.iter().copied().max().unwrap_or(0),
        d_max_boundary: shells.iter().copied().max().unwrap_or(0),
        delta_central: balls
            .iter()
            .map(|&b| (b as f64 - delta1).abs().powi(k as i32))
            .sum::<f64>()
            / n,
    })
}

/// Radius bound for the pair constraint of [`quadruple_count`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairRadius {
    /// `j` must lie in `N(i; m+1)`.
    Finite(f64),
    /// No constraint on the pairing (the `m = ∞` convention).
    Unbounded,
}

/// Ordered pairs `(i, j)` admissible under `m`: `j ∈ N(i; m+1)` for finite
/// `m`, every ordered pair (including `j = i`) otherwise.
fn admissible_pairs(d: &DistanceMatrix, m: PairRadius) -> Vec<(usize, usize)> {
    let n = d.n();
    let mut pairs = Vec::new();
    match m {
        PairRadius::Finite(m) => {
            let r = m + 1.0;
            for i in 0..n {
                for (j, &dij) in d.row(i).iter().enumerate() {
                    if dij < r {
                        pairs.push((i, j));
                    }
                }
            }
        }
        PairRadius::Unbounded => {
            for i in 0..n {
                for j in 0..n {
                    pairs.push((i, j));
                }
            }
        }
    }
    pairs
}

/// Distance class of two pair sets: `floor` of the minimum cross distance, or
/// `None` when every cross distance is infinite.
#[inline]
fn cross_class(d: &DistanceMatrix, (i, j): (usize, usize), (k, l): (usize, usize)) -> Option<usize> {
    let m = d
        .get(i, k)
        .min(d.get(i, l))
        .min(d.get(j, k))
        .min(d.get(j, l));
    m.is_finite().then(|| m.floor() as usize)
}

/// Histogram over `s` of `|H(s, m)|`: index `s` holds the number of ordered
/// quadruples `(i, j, k, l)` with `j ∈ N(i; m+1)`, `l ∈ N(k; m+1)` and the
/// pair sets `{i,j}`, `{k,l}` at set-distance class `s`.
///
/// Runs in `O(P^2)` for `P` admissible pairs, so it is meant for moderate
/// `n * delta(m)`.
pub fn quadruple_histogram(d: &DistanceMatrix, m: PairRadius) -> Vec<u64> {
    let pairs = admissible_pairs(d, m);
    let mut hist = vec![0u64; d.max_class() + 1];
    for &p in &pairs {
        for &q in &pairs {
            if let Some(s) = cross_class(d, p, q) {
                hist[s] += 1;
            }
        }
    }
    hist
}

/// `|H(s, m)|` for a single distance class `s`.
pub fn quadruple_count(d: &DistanceMatrix, s: usize, m: PairRadius) -> u64 {
    quadruple_histogram(d, m).get(s).copied().unwrap_or(0)
}

/// Local denseness profile inside balls of radius `m`: element `s` of each
/// vector is the measure at distance class `s` (classes `0..=max_class`).
///
/// For each node `i`, write `T = N(i; m)` and `t = |T|`, and let
/// `P_i(s) = #{ (a, b) ∈ T^2 : floor(d(a, b)) = s }`. Then
///
/// * `delta_boundary_local(s, m) = max_i sum_{j ∈ T} |N∂(j; s) ∩ T| / t`,
///   which equals `max_i P_i(s) / t`;
/// * `h_local(s, m) = max_i #{ (q1,q2,q3,q4) ∈ T^4 : floor(d(q1, q3)) = s } / t^3
///   = max_i P_i(s) * t^2 / t^3`, counting quadruples classified by their
///   base pair with the companions `q2`, `q4` free inside the ball.
///
/// An empty ball (possible only at `m = 0`) contributes the single-node limit:
/// 1 at `s = 0`, 0 elsewhere. At `s = 0` both measures are identically 1 and
/// `h_local <= delta_boundary_local` holds for every class.
pub fn local_denseness_profile(d: &DistanceMatrix, m: f64) -> (Vec<f64>, Vec<f64>) {
    let classes = d.max_class() + 1;
    let mut delta_loc = vec![0.0; classes];
    let mut h_loc = vec![0.0; classes];
    let mut saw_empty = false;
    for i in 0..d.n() {
        let ball = d.neighborhood(i, m);
        let t = ball.len();
        if t == 0 {
            saw_empty = true;
            continue;
        }
        // per-class pair counts over the ball, via the boundary-shell route
        let mut pair_counts = vec![0u64; classes];
        for &a in &ball {
            for &b in &ball {
                let dab = d.get(a, b);
                // finite inside a ball: both within m of i
                pair_counts[dab.floor() as usize] += 1;
            }
        }
        let tf = t as f64;
        for s in 0..classes {
            let p = pair_counts[s] as f64;
            // sum_j |N∂(j;s) ∩ T| = P_i(s), normalized by t
            let dval = p / tf;
            // quadruples (q1,q2,q3,q4) with base pair in class s: P_i(s)·t²,
            // normalized by t³ — the companions q2, q4 range freely over T
            let hval = p * tf * tf / (tf * tf * tf);
            if dval > delta_loc[s] {
                delta_loc[s] = dval;
            }
            if hval > h_loc[s] {
                h_loc[s] = hval;
            }
        }
    }
    if saw_empty {
        // single-node limit of an empty ball
        if delta_loc[0] < 1.0 {
            delta_loc[0] = 1.0;
        }
        if h_loc[0] < 1.0 {
            h_loc[0] = 1.0;
        }
    }
    (delta_loc, h_loc)
}

/// Local denseness measures `(delta_boundary_local(s, m), h_local(s, m))` at a
/// single class `s`. See [`local_denseness_profile`].
pub fn local_denseness(d: &DistanceMatrix, s: usize, m: f64) -> Result<(f64, f64)> {
    if !m.is_finite() || m < 0.0 {
        return Err(Error::InvalidParameter {
            name: "m",
            reason: format!("ball radius must be finite and >= 0, got {m}"),
        });
    }
    let (dl, hl) = local_denseness_profile(d, m);
    Ok((
        dl.get(s).copied().unwrap_or(0.0),
        hl.get(s).copied().unwrap_or(0.0),
    ))
}

/// Overlap weight table for a block radius.
#[derive(Debug, Clone)]
pub struct OverlapWeights {
    /// `omega(i, j) = |N(i; s+1) ∩ N(j; s+1)| / delta(s)`, exactly symmetric.
    pub omega: DMatrix<f64>,
    /// Average ball size `delta(s)` used as the normalizer.
    pub delta: f64,
    /// Radius the table was built at.
    pub s: f64,
}

/// Build the overlap weights `omega(i, j) = |N(i; s+1) ∩ N(j; s+1)| / delta(s)`.
///
/// The table is positive semi-definite: for any vector `c`,
/// `c' Ω c = delta(s)^-1 * sum_k ( sum_{i : k ∈ N(i; s+1)} c_i )^2 >= 0`.
/// Entries vanish whenever `d(i, j) >= 2(s+1)` because the balls cannot
/// intersect past twice their radius.
pub fn overlap_weights(d: &DistanceMatrix, s: f64) -> Result<OverlapWeights> {
    if !s.is_finite() || s < 0.0 {
        return Err(Error::InvalidParameter {
            name: "s",
            reason: format!("block radius must be finite and >= 0, got {s}"),
        });
    }
    let n = d.n();
    let r = s + 1.0;
    let balls: Vec<Vec<usize>> = (0..n).map(|i| d.neighborhood(i, r)).collect();
    let delta = balls.iter().map(|b| b.len()).sum::<usize>() as f64 / n as f64;
    let mut omega = DMatrix::zeros(n, n);
    for i in 0..n {
        omega[(i, i)] = balls[i].len() as f64 / delta;
        for j in (i + 1)..n {
            // balls of radius s+1 around nodes further apart than 2(s+1)
            // cannot intersect; skip the merge
            if d.get(i, j) >= 2.0 * r {
                continue;
            }
            let mut count = 0usize;
            let (mut a, mut b) = (0usize, 0usize);
            let (bi, bj) = (&balls[i], &balls[j]);
            while a < bi.len() && b < bj.len() {
                match bi[a].cmp(&bj[b]) {
                    std::cmp::Ordering::Less => a += 1,
                    std::cmp::Ordering::Greater => b += 1,
                    std::cmp::Ordering::Equal => {
                        count += 1;
                        a += 1;
                        b += 1;
                    }
                }
            }
            let w = count as f64 / delta;
            omega[(i, j)] = w;
            omega[(j, i)] = w; // mirrored, so exactly symmetric
        }
    }
    Ok(OverlapWeights { omega, delta, s })
}
