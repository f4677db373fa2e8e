//! Empirical entropy numbers of `B_p(L)` under the discretized uniform norm
//! `||f||_{inf,X} = max_j |f(X_j)|`.
//!
//! The continuum ball is replaced by a random candidate cloud on its boundary;
//! `e_k` covering estimates come from a greedy farthest-first cover with `n_k`
//! centers (`n_0 = 1`, `n_k = 2^(2^k)` for `k >= 1`) and packing lower
//! estimates from the same traversal with `n_k + 1` points, min pairwise
//! distance halved. Greedy covering is a 2-approximation, so every check that
//! compares against theory carries an explicit estimator slack.

use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discretize::SampleSet;
use crate::rng::{rng_from, split_seed, standard_normal_vector};
use crate::subspace::{FunctionCoeffs, Subspace};
use crate::{Error, Result};

/// Relative slack granted to covering estimates in theory-facing checks.
pub const ESTIMATOR_SLACK: f64 = 0.2;

/// Covering cardinality at level `k`: `n_0 = 1`, `n_k = 2^(2^k)`.
pub fn covering_cardinality(k: usize) -> usize {
    if k == 0 {
        1
    } else {
        1usize << (1usize << k)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayFit {
    #[serde(rename = "W")]
    pub w: f64,
    pub theta: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EntropyProfile {
    pub k_max: usize,
    /// Covering-radius upper estimates `e_hat_k`, `k = 0..=k_max`.
    pub covering: Vec<f64>,
    /// Packing lower estimates `p_hat_k`.
    pub packing: Vec<f64>,
    /// Least-squares fit `e_hat_k ~ W 2^{-k/theta}` (absent when too flat).
    pub fitted: Option<DecayFit>,
    /// Identity of the point set X.
    pub m: usize,
    pub seed: u64,
    pub candidate_count: usize,
}

impl EntropyProfile {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "k": (0..=self.k_max).collect::<Vec<_>>(),
            "e_hat": self.covering,
            "p_hat": self.packing,
            "W": self.fitted.as_ref().map(|f| f.w),
            "theta": self.fitted.as_ref().map(|f| f.theta),
            "m": self.m,
            "seed": self.seed,
        })
    }
}

fn linf_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Greedy covering and packing estimates for a cloud of value vectors.
///
/// The zero vector (the ball's center) starts the farthest-first traversal;
/// `e_hat_0` is the better of the zero center and the farthest candidate as a
/// single center, and `e_hat_{k+1} <= e_hat_k` holds by center reuse.
pub fn covering_packing_from_cloud(cloud: &[Vec<f64>], k_max: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(!cloud.is_empty(), "cloud must be nonempty");
    let dim = cloud[0].len();
    let zero = vec![0.0; dim];
    let mut points: Vec<&[f64]> = Vec::with_capacity(cloud.len() + 1);
    points.push(&zero);
    for c in cloud {
        points.push(c.as_slice());
    }

    let max_centers = covering_cardinality(k_max) + 1;
    // dist[i] = distance of point i to the chosen center set; center 0 is the zero vector.
    let mut dist: Vec<f64> = points.iter().map(|p| linf_distance(p, &zero)).collect();
    let mut chosen: Vec<usize> = vec![0];
    // radius_after[j] = covering radius with the first j centers, j >= 1.
    let mut radius_after: Vec<f64> = Vec::with_capacity(max_centers);
    loop {
        let (far_idx, far_dist) = dist.iter().enumerate().fold(
            (0usize, -1.0f64),
            |best, (i, &d)| if d > best.1 { (i, d) } else { best },
        );
        radius_after.push(far_dist);
        if chosen.len() >= max_centers || far_dist == 0.0 {
            break;
        }
        chosen.push(far_idx);
        let new_center = points[far_idx];
        for (i, p) in points.iter().enumerate() {
            let d = linf_distance(p, new_center);
            if d < dist[i] {
                dist[i] = d;
            }
        }
    }
    let radius_with = |centers: usize| -> f64 {
        if centers <= radius_after.len() {
            radius_after[centers - 1]
        } else {
            0.0
        }
    };

    // Alternative single center: the farthest candidate covers an all-identical
    // cloud with radius zero, which the zero center cannot.
    let far_candidate = points[chosen.get(1).copied().unwrap_or(0)];
    let alt0 = points
        .iter()
        .map(|p| linf_distance(p, far_candidate))
        .fold(0.0, f64::max);
    let mut covering = Vec::with_capacity(k_max + 1);
    covering.push(radius_with(1).min(alt0));
    for k in 1..=k_max {
        let r = radius_with(covering_cardinality(k));
        covering.push(r.min(covering[k - 1]));
    }

    // Packing: min pairwise distance among the first n_k + 1 traversal points, halved.
    let mut packing = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let take = (covering_cardinality(k) + 1).min(chosen.len());
        let mut min_pair = if take >= 2 { f64::INFINITY } else { 0.0 };
        for i in 0..take {
            for j in (i + 1)..take {
                min_pair = min_pair.min(linf_distance(points[chosen[i]], points[chosen[j]]));
            }
        }
        // Fewer traversal points than requested means the cloud was exhausted
        // (covering radius zero): no (n_k + 1)-point packing with positive
        // separation exists.
        if take < covering_cardinality(k) + 1 {
            min_pair = 0.0;
        }
        packing.push(0.5 * min_pair);
    }
    (covering, packing)
}

/// Empirical entropy profile of `B_p(L)` under `||.||_{inf,X}`.
///
/// Draws `candidate_count` random directions on the boundary of the ball,
/// maps them to value vectors on the sample points, and runs the greedy
/// covering/packing estimator.
pub fn entropy_profile(
    subspace: &Subspace,
    p: f64,
    samples: &SampleSet,
    k_max: usize,
    candidate_count: usize,
    seed: u64,
) -> Result<EntropyProfile> {
    if p < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "p must be at least 1 (got {p})"
        )));
    }
    if k_max > 4 {
        return Err(Error::InvalidArgument(
            "k_max above 4 needs more than 2^16 centers; not supported".into(),
        ));
    }
    if candidate_count < covering_cardinality(k_max) {
        return Err(Error::InvalidArgument(format!(
            "candidate_count {candidate_count} is below the covering cardinality {}",
            covering_cardinality(k_max)
        )));
    }
    let n = subspace.dim();
    let mut rng = rng_from(split_seed(seed, 0x656e_7470));
    let mut directions: Vec<DVector<f64>> = Vec::with_capacity(candidate_count);
    while directions.len() < candidate_count {
        let c = standard_normal_vector(n, &mut rng);
        let norm = subspace.lp_norm(&FunctionCoeffs::from_dvector(&c), p);
        if norm > 0.0 {
            directions.push(c / norm);
        }
    }
    let cloud: Vec<Vec<f64>> = directions
        .par_iter()
        .map(|c| (&samples.eval * c).as_slice().to_vec())
        .collect();
    let (covering, packing) = covering_packing_from_cloud(&cloud, k_max);
    let mut profile = EntropyProfile {
        k_max,
        covering,
        packing,
        fitted: None,
        m: samples.len(),
        seed,
        candidate_count,
    };
    profile.fitted = fit_decay(&profile)
        .ok()
        .map(|(w, theta)| DecayFit { w, theta });
    Ok(profile)
}

/// Least-squares fit of `log2 e_hat_k` against `k`: returns `(W, theta)` with
/// `e_hat_k ~ W 2^{-k/theta}`. Zero estimates are dropped from the fit.
pub fn fit_decay(profile: &EntropyProfile) -> Result<(f64, f64)> {
    if profile.covering.len() < 3 {
        return Err(Error::InvalidArgument(
            "decay fit needs at least 3 entropy estimates".into(),
        ));
    }
    let pts: Vec<(f64, f64)> = profile
        .covering
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0.0)
        .map(|(k, &e)| (k as f64, e.log2()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::ProfileTooFlat);
    }
    let n = pts.len() as f64;
    let mean_x = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let var_x = pts
        .iter()
        .map(|p| (p.0 - mean_x) * (p.0 - mean_x))
        .sum::<f64>();
    let cov = pts
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum::<f64>();
    let slope = cov / var_x;
    let intercept = mean_y - slope * mean_x;
    let theta = -1.0 / slope;
    Ok((intercept.exp2(), theta))
}

/// Truncated Dudley-type entropy sum `sum_k 2^{k/tau} e_hat_k` for `tau >= 2`.
pub fn dudley_sum(profile: &EntropyProfile, tau: f64) -> Result<f64> {
    if tau < 2.0 {
        return Err(Error::InvalidArgument(format!(
            "tau must be at least 2 (got {tau})"
        )));
    }
    Ok(profile
        .covering
        .iter()
        .enumerate()
        .map(|(k, &e)| (k as f64 / tau).exp2() * e)
        .sum())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropagationCheck {
    pub k: usize,
    pub estimate: f64,
    pub bound: f64,
    pub ok: bool,
}

/// Per-k results of the finite-dimensional decay propagation check.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecayPropagation {
    pub k0: usize,
    pub checks: Vec<PropagationCheck>,
}

impl DecayPropagation {
    /// True when every measured `k > k0` obeys the propagated bound
    /// (vacuously true for single-point profiles).
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }
}

/// Check `e_hat_k <= 3 * 2^(2^k0 / N) * e_hat_k0 * 2^(-2^k / N) * (1 + slack)`
/// for all measured `k > k0`, anchored at `k0 = 0` (the cardinality-1 estimate,
/// the one the candidate cloud resolves most reliably).
pub fn decay_propagation_check(profile: &EntropyProfile, dim: usize) -> DecayPropagation {
    let k0 = 0usize;
    let n = dim as f64;
    let anchor = profile.covering[k0];
    let lead = 3.0 * (((1u64 << k0) as f64) / n).exp2();
    let checks = (k0 + 1..=profile.k_max)
        .map(|k| {
            let decay = (-((1u64 << k) as f64) / n).exp2();
            let bound = lead * anchor * decay * (1.0 + ESTIMATOR_SLACK);
            PropagationCheck {
                k,
                estimate: profile.covering[k],
                bound,
                ok: profile.covering[k] <= bound,
            }
        })
        .collect();
    DecayPropagation { k0, checks }
}
