//! Sampling discretization: sample sets, the deviation `V_p`, eps-checks,
//! success probabilities, and the symmetrization inequality.
//!
//! For `p = 2` and an orthonormal basis the deviation is computed exactly:
//! `V_2 = || sum_j lambda_j e_j e_j^T - I ||` (spectral norm, symmetric
//! eigendecomposition), because the sup of `|c^T (G_emp - I) c|` over the
//! Euclidean unit ball is the largest-magnitude eigenvalue. For general `p`
//! a multistart projected ascent over the `L^p` sphere certifies a lower
//! bound; every iterate is feasible, so the reported value never overshoots.

use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::measure::MeasureDescriptor;
use crate::rng::{rng_from, split_seed, standard_normal_vector, Rng};
use crate::subspace::{lp_norm_of_values, FunctionCoeffs, Subspace};
use crate::{Error, Result};

/// 95% normal quantile for Wilson score intervals.
const WILSON_Z: f64 = 1.959963984540054;

/// Optimizer restarts used when an operation needs a default (p != 2 paths).
pub const DEFAULT_RESTARTS: usize = 8;

/// `m` sample points with their basis evaluations and per-point weights.
#[derive(Clone, Debug)]
pub struct SampleSet {
    pub points: Vec<f64>,
    /// `m x N` matrix with `eval[(j, i)] = u_i(X_j)`.
    pub eval: DMatrix<f64>,
    /// Weights `lambda_j`; `1/m` each for unweighted discretization.
    pub weights: Vec<f64>,
    pub seed: u64,
    /// Density descriptor of the sampling measure when it is not the reference
    /// measure (weighted discretization draws from the Lewis density).
    pub nu: Option<MeasureDescriptor>,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Build a synthetic sample set from explicit points (weights `1/m`).
    pub fn from_points(subspace: &Subspace, points: Vec<f64>, seed: u64) -> Self {
        assert!(!points.is_empty(), "sample set must be nonempty");
        let m = points.len();
        let n = subspace.dim();
        let mut eval = DMatrix::zeros(m, n);
        for (j, &x) in points.iter().enumerate() {
            eval.row_mut(j).copy_from(&subspace.eval_all(x).transpose());
        }
        SampleSet {
            points,
            eval,
            weights: vec![1.0 / m as f64; m],
            seed,
            nu: None,
        }
    }

    pub(crate) fn with_weights(
        subspace: &Subspace,
        points: Vec<f64>,
        weights: Vec<f64>,
        seed: u64,
        nu: Option<MeasureDescriptor>,
    ) -> Self {
        let mut s = SampleSet::from_points(subspace, points, seed);
        assert!(
            weights.iter().all(|&w| w > 0.0),
            "sample weights must be positive"
        );
        s.weights = weights;
        s.nu = nu;
        s
    }

    /// Serializable form: points, weights, seed and the optional density descriptor.
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::json!({
            "m": self.len(),
            "points": self.points,
            "weights": self.weights,
            "seed": self.seed,
            "nu": self.nu,
        })
    }
}

/// Draw `m` i.i.d. points from the reference measure of the subspace.
pub fn sample_points(subspace: &Subspace, m: usize, seed: u64) -> SampleSet {
    assert!(m >= 1, "need at least one sample point");
    let mut rng: Rng = rng_from(seed);
    let points: Vec<f64> = (0..m)
        .map(|_| subspace.measure().sample(&mut rng))
        .collect();
    SampleSet::from_points(subspace, points, seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    /// Exact value from the symmetric eigendecomposition (`p = 2`).
    EigenExact,
    /// Certified lower bound from the ascent optimizer.
    LowerBound,
}

/// Outcome of one discretization trial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiscretizationReport {
    pub p: f64,
    pub m: usize,
    #[serde(rename = "N")]
    pub dim: usize,
    /// `V_p` (exact) or a lower bound on it.
    #[serde(rename = "V")]
    pub value: f64,
    pub exactness: Exactness,
    pub worst_coeffs: FunctionCoeffs,
    pub epsilon: Option<f64>,
    /// `V_p <= eps`; for lower-bound reports `true` means "not refuted".
    pub pass: Option<bool>,
    pub seed: u64,
    pub elapsed_ms: f64,
}

impl DiscretizationReport {
    /// Whether a `pass = true` verdict only means "not refuted".
    pub fn not_refuted_semantics(&self) -> bool {
        self.exactness == Exactness::LowerBound
    }

    /// Recompute `|sum_j lambda_j |f(X_j)|^p - ||f||_p^p|` for the stored witness.
    pub fn reverify(&self, subspace: &Subspace, samples: &SampleSet) -> f64 {
        let norm = subspace.lp_norm(&self.worst_coeffs, self.p);
        let c = self.worst_coeffs.as_dvector();
        let scaled = FunctionCoeffs::from_dvector(&(c / norm));
        let v = &samples.eval * scaled.as_dvector();
        let empirical: f64 = v
            .iter()
            .zip(&samples.weights)
            .map(|(&x, &w)| w * x.abs().powf(self.p))
            .sum();
        let truth = subspace.lp_norm(&scaled, self.p).powf(self.p);
        (empirical - truth).abs()
    }

    /// JSON line used by the CLI: `{p, m, N, V, exact, pass, seed, elapsed_ms}`.
    pub fn to_json_line(&self) -> String {
        let exact = match self.exactness {
            Exactness::EigenExact => "eigen-exact",
            Exactness::LowerBound => "lower-bound",
        };
        serde_json::json!({
            "p": self.p,
            "m": self.m,
            "N": self.dim,
            "V": self.value,
            "exact": exact,
            "pass": self.pass,
            "seed": self.seed,
            "elapsed_ms": self.elapsed_ms,
        })
        .to_string()
    }
}

/// Empirical Gram deviation `sum_j lambda_j e_j e_j^T - I`.
fn gram_deviation(samples: &SampleSet, dim: usize) -> DMatrix<f64> {
    let mut weighted = samples.eval.clone();
    for (j, &w) in samples.weights.iter().enumerate() {
        weighted.row_mut(j).scale_mut(w);
    }
    samples.eval.transpose() * weighted - DMatrix::identity(dim, dim)
}

/// Exact `V_2` by symmetric eigendecomposition of the empirical Gram deviation.
pub fn v2_exact(subspace: &Subspace, samples: &SampleSet) -> DiscretizationReport {
    assert!(
        subspace.is_orthonormal(),
        "v2_exact requires an orthonormal basis"
    );
    let start = Instant::now();
    let n = subspace.dim();
    let deviation = gram_deviation(samples, n);
    let eig = deviation.symmetric_eigen();
    let mut worst = 0usize;
    let mut value = -1.0;
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l.abs() > value {
            value = l.abs();
            worst = i;
        }
    }
    let worst_coeffs = FunctionCoeffs(eig.eigenvectors.column(worst).iter().cloned().collect());
    DiscretizationReport {
        p: 2.0,
        m: samples.len(),
        dim: n,
        value,
        exactness: Exactness::EigenExact,
        worst_coeffs,
        epsilon: None,
        pass: None,
        seed: samples.seed,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    }
}

/// `sign(v) |v|^e`, with the subgradient choice `0` at `v = 0`.
fn signed_pow(v: f64, e: f64) -> f64 {
    if v == 0.0 {
        0.0
    } else {
        v.signum() * v.abs().powf(e)
    }
}

/// Certified lower bound on `V_p` by multistart projected ascent on the `L^p` sphere.
///
/// Starts: `restarts` random directions plus both extreme eigenvectors of the
/// empirical Gram deviation (the negative extreme witnesses rank deficiency,
/// `V_p >= 1` whenever some unit function vanishes on all sample points).
pub fn vp_lower_bound(
    subspace: &Subspace,
    samples: &SampleSet,
    p: f64,
    restarts: usize,
    seed: u64,
) -> Result<DiscretizationReport> {
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "p must lie in (1, inf) (got {p})"
        )));
    }
    let start = Instant::now();
    let n = subspace.dim();
    let deviation = gram_deviation(samples, n);
    let eig = deviation.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let mut starts: Vec<DVector<f64>> = vec![
        eig.eigenvectors.column(order[0]).into_owned(),
        eig.eigenvectors.column(order[n - 1]).into_owned(),
    ];
    let mut rng = rng_from(split_seed(seed, 0x7670));
    for _ in 0..restarts {
        starts.push(standard_normal_vector(n, &mut rng));
    }

    let refined: Vec<(f64, DVector<f64>)> = starts
        .par_iter()
        .map(|s| ascend_deviation(subspace, samples, p, 1.0, None, s))
        .collect();
    let (value, c) = refined
        .into_iter()
        .max_by(|a, b| a.0.partial_cmp(&b.0).expect("finite objectives"))
        .expect("at least one start");

    Ok(DiscretizationReport {
        p,
        m: samples.len(),
        dim: n,
        value,
        exactness: Exactness::LowerBound,
        worst_coeffs: FunctionCoeffs::from_dvector(&c),
        epsilon: None,
        pass: None,
        seed: samples.seed,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Maximize `|sum_j a_j lambda'_j |f(X_j)|^p - beta ||f||_p^p|` over the grid
/// `L^p` sphere, where `a_j` are the sample weights (`signs` overrides them for
/// the Rademacher process and drops the true-norm term).
///
/// Returns `(best objective, normalized coefficients)`.
fn ascend_deviation(
    subspace: &Subspace,
    samples: &SampleSet,
    p: f64,
    beta: f64,
    signs: Option<&[f64]>,
    start: &DVector<f64>,
) -> (f64, DVector<f64>) {
    let eval = &samples.eval;
    let grid = subspace.grid_values();
    let gw = subspace.measure().grid_weights();
    let sample_weights: Vec<f64> = match signs {
        Some(s) => s.to_vec(),
        None => samples.weights.clone(),
    };

    let objective = |c: &DVector<f64>| -> (f64, DVector<f64>, DVector<f64>) {
        let v = eval * c;
        let u = grid * c;
        let empirical: f64 = v
            .iter()
            .zip(&sample_weights)
            .map(|(&x, &w)| w * x.abs().powf(p))
            .sum();
        let truth: f64 = u.iter().zip(gw).map(|(&x, &w)| w * x.abs().powf(p)).sum();
        (empirical - beta * truth, v, u)
    };
    let normalize = |c: &mut DVector<f64>| -> bool {
        let u = grid * &*c;
        let norm = lp_norm_of_values(u.as_slice(), gw, p);
        if norm > 0.0 {
            *c /= norm;
            true
        } else {
            false
        }
    };

    let mut c = start.clone();
    if !normalize(&mut c) {
        return (0.0, start.clone());
    }
    let (mut d, mut v, mut u) = objective(&c);
    let mut obj = d.abs();
    let mut step = 0.25;
    for _ in 0..200 {
        let sign = if d >= 0.0 { 1.0 } else { -1.0 };
        // gradient of the signed deviation, times the outer sign
        let mut grad: DVector<f64> = DVector::zeros(c.len());
        for (j, &x) in v.iter().enumerate() {
            if x != 0.0 {
                let g = p * sample_weights[j] * signed_pow(x, p - 1.0);
                grad.axpy(g, &eval.row(j).transpose(), 1.0);
            }
        }
        if beta != 0.0 {
            for (g, &x) in u.iter().enumerate() {
                if x != 0.0 {
                    let gg = -beta * p * gw[g] * signed_pow(x, p - 1.0);
                    grad.axpy(gg, &grid.row(g).transpose(), 1.0);
                }
            }
        }
        grad *= sign;
        // project onto the tangent space of the L^p sphere
        let mut norm_grad: DVector<f64> = DVector::zeros(c.len());
        for (g, &x) in u.iter().enumerate() {
            if x != 0.0 {
                norm_grad.axpy(
                    gw[g] * signed_pow(x, p - 1.0),
                    &grid.row(g).transpose(),
                    1.0,
                );
            }
        }
        let nn = norm_grad.norm_squared();
        if nn > 0.0 {
            let radial = grad.dot(&norm_grad) / nn;
            grad.axpy(-radial, &norm_grad, 1.0);
        }
        let gnorm = grad.norm();
        if gnorm < 1e-15 {
            break;
        }
        grad /= gnorm;
        let mut improved = false;
        while step >= 1e-14 {
            let mut trial = &c + step * &grad;
            if !normalize(&mut trial) {
                break;
            }
            let (td, tv, tu) = objective(&trial);
            if td.abs() > obj {
                let improvement = (td.abs() - obj) / obj.max(f64::MIN_POSITIVE);
                c = trial;
                d = td;
                v = tv;
                u = tu;
                obj = d.abs();
                step = (step * 2.0).min(0.5);
                improved = improvement >= 1e-10;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (obj, c)
}

/// `V_p <= eps`?  Sets the report's epsilon/pass fields.
///
/// For lower-bound reports a `true` verdict only means the bound did not refute
/// discretization at accuracy `eps` ([`DiscretizationReport::not_refuted_semantics`]).
pub fn check_discretization(report: &mut DiscretizationReport, epsilon: f64) -> Result<bool> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1) (got {epsilon})"
        )));
    }
    let pass = report.value <= epsilon;
    report.epsilon = Some(epsilon);
    report.pass = Some(pass);
    Ok(pass)
}

/// Wilson 95% score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    assert!(trials >= 1 && successes <= trials);
    let n = trials as f64;
    let phat = successes as f64 / n;
    let z2 = WILSON_Z * WILSON_Z;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = WILSON_Z * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SuccessEstimate {
    pub rate: f64,
    pub wilson_lo: f64,
    pub wilson_hi: f64,
    pub trials: usize,
    pub successes: usize,
}

/// Fraction of independent sample sets with `V_p <= eps`, with a 95% Wilson
/// interval. Trial `k` uses the derived seed `split_seed(seed, k)`.
///
/// For `p != 2` each trial reports a lower bound, so the rate is an upper
/// estimate of the true success probability.
pub fn success_probability(
    subspace: &Subspace,
    p: f64,
    m: usize,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<SuccessEstimate> {
    if trials < 1 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1) (got {epsilon})"
        )));
    }
    let outcomes: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let trial_seed = split_seed(seed, k as u64);
            let samples = sample_points(subspace, m, trial_seed);
            let value = if p == 2.0 {
                v2_exact(subspace, &samples).value
            } else {
                vp_lower_bound(subspace, &samples, p, DEFAULT_RESTARTS, trial_seed)
                    .expect("p validated above")
                    .value
            };
            value <= epsilon
        })
        .collect();
    let successes = outcomes.iter().filter(|&&b| b).count();
    let (lo, hi) = wilson_interval(successes, trials);
    Ok(SuccessEstimate {
        rate: successes as f64 / trials as f64,
        wilson_lo: lo,
        wilson_hi: hi,
        trials,
        successes,
    })
}

/// Monte Carlo estimate of both sides of the symmetrization inequality
/// `m E[V_p(B_p)] <= 2 E_X E_eps sup_f |sum_j eps_j |f(X_j)|^p|`.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SymmetrizationCheck {
    /// `m * mean(V_p)` over the trials.
    pub lhs: f64,
    /// `2 * mean(sup of the Rademacher process)` over the trials.
    pub rhs: f64,
    pub lhs_stderr: f64,
    pub rhs_stderr: f64,
    pub trials: usize,
}

impl SymmetrizationCheck {
    /// `lhs <= rhs + slack_sigmas * (stderr_lhs + stderr_rhs)`.
    pub fn holds_within(&self, slack_sigmas: f64) -> bool {
        self.lhs <= self.rhs + slack_sigmas * (self.lhs_stderr + self.rhs_stderr)
    }
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Estimate `lhs = m E[V_p]` and `rhs = 2 E sup_{f in B_p} |sum_j eps_j |f(X_j)|^p|`
/// over `trials` independent draws of points and signs.
///
/// The Rademacher sup is estimated by the same multistart optimizer as
/// [`vp_lower_bound`] (both extreme eigenvectors of `sum_j eps_j e_j e_j^T`
/// plus random starts), so for `p = 2` it is exact up to grid error.
pub fn symmetrization_check(
    subspace: &Subspace,
    p: f64,
    m: usize,
    trials: usize,
    restarts: usize,
    seed: u64,
) -> Result<SymmetrizationCheck> {
    if trials < 1 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    if !p.is_finite() || p <= 1.0 {
        return Err(Error::InvalidArgument(format!(
            "p must lie in (1, inf) (got {p})"
        )));
    }
    let v_values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let s = split_seed(seed, k as u64);
            let samples = sample_points(subspace, m, s);
            if p == 2.0 {
                v2_exact(subspace, &samples).value
            } else {
                vp_lower_bound(subspace, &samples, p, restarts, s)
                    .expect("p validated")
                    .value
            }
        })
        .collect();
    let sup_values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let s = split_seed(seed, (trials + k) as u64);
            let samples = sample_points(subspace, m, s);
            let mut rng = rng_from(split_seed(s, 0x7261_6465));
            let signs: Vec<f64> = (0..m)
                .map(|_| if rng.gen_bool(0.5) { 1.0 } else { -1.0 })
                .collect();
            rademacher_sup(subspace, &samples, &signs, p, restarts, s)
        })
        .collect();
    let (v_mean, v_se) = mean_and_stderr(&v_values);
    let (s_mean, s_se) = mean_and_stderr(&sup_values);
    Ok(SymmetrizationCheck {
        lhs: m as f64 * v_mean,
        rhs: 2.0 * s_mean,
        lhs_stderr: m as f64 * v_se,
        rhs_stderr: 2.0 * s_se,
        trials,
    })
}

use rand::Rng as _;

/// `sup_{||f||_p <= 1} |sum_j eps_j |f(X_j)|^p|` by multistart ascent.
///
/// The objective scales as `t^p` along rays, so the sup over the ball equals
/// the sup over the sphere the optimizer walks on.
pub(crate) fn rademacher_sup(
    subspace: &Subspace,
    samples: &SampleSet,
    signs: &[f64],
    p: f64,
    restarts: usize,
    seed: u64,
) -> f64 {
    let n = subspace.dim();
    // sum_j eps_j e_j e_j^T, extreme eigenvectors as optimizer starts
    let mut signed = samples.eval.clone();
    for (j, &s) in signs.iter().enumerate() {
        signed.row_mut(j).scale_mut(s);
    }
    let process = samples.eval.transpose() * signed;
    let eig = process.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let mut starts: Vec<DVector<f64>> = vec![
        eig.eigenvectors.column(order[0]).into_owned(),
        eig.eigenvectors.column(order[n - 1]).into_owned(),
    ];
    let mut rng = rng_from(split_seed(seed, 0x6265_726e));
    for _ in 0..restarts {
        starts.push(standard_normal_vector(n, &mut rng));
    }
    starts
        .iter()
        .map(|s| ascend_deviation(subspace, samples, p, 0.0, Some(signs), s).0)
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::TAU;
    use crate::subspace::{build_discrete_subspace, build_trig_subspace};

    #[test]
    fn sampling_is_deterministic_and_in_domain() {
        let s = build_trig_subspace(1);
        let a = sample_points(&s, 10, 42);
        let b = sample_points(&s, 10, 42);
        assert_eq!(a.points, b.points);
        assert!(a.points.iter().all(|&x| (0.0..TAU).contains(&x)));
        assert!(a.weights.iter().all(|&w| (w - 0.1).abs() < 1e-15));
        let single = sample_points(&s, 1, 7);
        assert_eq!(single.len(), 1);
    }

    #[test]
    fn equispaced_rule_discretizes_low_degree_trig_exactly() {
        // Five equispaced points discretize degree-2 trig L^2 norms exactly.
        let s = build_trig_subspace(2);
        let points: Vec<f64> = (0..5).map(|j| TAU * j as f64 / 5.0).collect();
        let samples = SampleSet::from_points(&s, points, 0);
        let report = v2_exact(&s, &samples);
        assert!(report.value <= 1e-10, "V2 = {}", report.value);
        // Oracle: the empirical Gram itself.
        let mut gram = DMatrix::zeros(5, 5);
        for j in 0..5 {
            let e = samples.eval.row(j).transpose();
            gram += 0.2 * &e * e.transpose();
        }
        assert!((gram - DMatrix::identity(5, 5)).amax() < 1e-12);
    }

    #[test]
    fn repeated_atom_sample_has_rank_one_gram() {
        let s = build_discrete_subspace(3, 10, 4).unwrap();
        let atom = s.measure().grid()[2];
        let samples = SampleSet::from_points(&s, vec![atom; 6], 0);
        let report = v2_exact(&s, &samples);
        let k: f64 = s.eval_all(atom).norm_squared();
        let expected = (k - 1.0).abs().max(1.0);
        assert!((report.value - expected).abs() < 1e-10);
        assert!(report.value >= 1.0);
    }

    #[test]
    fn identity_empirical_gram_gives_zero() {
        // Sampling every atom of a square design once rebuilds the exact Gram.
        let s = build_discrete_subspace(4, 4, 9).unwrap();
        let samples = SampleSet::from_points(&s, s.measure().grid().to_vec(), 0);
        let report = v2_exact(&s, &samples);
        assert!(report.value < 1e-10);
    }

    #[test]
    fn lower_bound_matches_eigen_at_p2() {
        let s = build_trig_subspace(1);
        let samples = sample_points(&s, 60, 11);
        let exact = v2_exact(&s, &samples);
        let lower = vp_lower_bound(&s, &samples, 2.0, 4, 13).unwrap();
        assert!(lower.value <= exact.value + 1e-9);
        assert!((lower.value - exact.value).abs() < 1e-6);
    }

    #[test]
    fn constant_subspace_discretizes_exactly() {
        let s = build_trig_subspace(0);
        let samples = sample_points(&s, 1, 3);
        for p in [1.5, 2.0, 3.0] {
            let r = if p == 2.0 {
                v2_exact(&s, &samples)
            } else {
                vp_lower_bound(&s, &samples, p, 2, 1).unwrap()
            };
            assert!(r.value < 1e-12, "p={p}: {}", r.value);
        }
    }

    #[test]
    fn invalid_p_is_rejected() {
        let s = build_trig_subspace(0);
        let samples = sample_points(&s, 2, 3);
        assert!(matches!(
            vp_lower_bound(&s, &samples, 1.0, 2, 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn check_verdicts() {
        let s = build_trig_subspace(1);
        let samples = sample_points(&s, 100, 5);
        let mut report = v2_exact(&s, &samples);
        report.value = 0.0;
        assert!(check_discretization(&mut report, 0.5).unwrap());
        report.value = 0.6;
        assert!(!check_discretization(&mut report, 0.5).unwrap());
        assert_eq!(report.epsilon, Some(0.5));
        assert_eq!(report.pass, Some(false));
        assert!(check_discretization(&mut report, 1.0).is_err());
        let mut lower = vp_lower_bound(&s, &samples, 3.0, 2, 5).unwrap();
        lower.value = 0.4;
        assert!(check_discretization(&mut lower, 0.5).unwrap());
        assert!(lower.not_refuted_semantics());
    }

    #[test]
    fn witness_reproduces_reported_value() {
        let s = build_trig_subspace(2);
        let samples = sample_points(&s, 40, 8);
        let report = v2_exact(&s, &samples);
        assert!((report.reverify(&s, &samples) - report.value).abs() < 1e-8);
        let lower = vp_lower_bound(&s, &samples, 2.5, 4, 2).unwrap();
        assert!((lower.reverify(&s, &samples) - lower.value).abs() < 1e-8);
    }

    #[test]
    fn weight_scaling_moves_the_gram() {
        let s = build_trig_subspace(1);
        let mut samples = sample_points(&s, 30, 2);
        let base = gram_deviation(&samples, s.dim()) + DMatrix::identity(3, 3);
        let t = 2.0;
        for w in &mut samples.weights {
            *w *= t;
        }
        let report = v2_exact(&s, &samples);
        let expected = (t * base - DMatrix::identity(3, 3))
            .symmetric_eigen()
            .eigenvalues
            .amax();
        assert!((report.value - expected).abs() < 1e-12);
    }

    #[test]
    fn permutation_invariance() {
        let s = build_trig_subspace(1);
        let samples = sample_points(&s, 25, 6);
        let mut reversed_points = samples.points.clone();
        reversed_points.reverse();
        let permuted = SampleSet::from_points(&s, reversed_points, 6);
        let a = v2_exact(&s, &samples).value;
        let b = v2_exact(&s, &permuted).value;
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn rank_deficiency_forces_failure() {
        // m = N - 1 cannot discretize: rate is exactly zero.
        let s = build_trig_subspace(2);
        let est = success_probability(&s, 2.0, 4, 0.9, 25, 3).unwrap();
        assert_eq!(est.rate, 0.0);
    }

    #[test]
    fn equispaced_injection_always_passes() {
        // The synthetic MZ sample set passes the eps-check on every trial.
        let s = build_trig_subspace(2);
        let points: Vec<f64> = (0..5).map(|j| TAU * j as f64 / 5.0).collect();
        let passes = (0..10)
            .filter(|&k| {
                let samples = SampleSet::from_points(&s, points.clone(), k);
                let mut report = v2_exact(&s, &samples);
                check_discretization(&mut report, 0.5).unwrap()
            })
            .count();
        assert_eq!(passes, 10);
    }

    #[test]
    fn wilson_interval_at_one_trial_is_wide() {
        let (lo, hi) = wilson_interval(1, 1);
        assert!(hi - lo >= 0.5);
        let (lo0, hi0) = wilson_interval(0, 1);
        assert!(hi0 - lo0 >= 0.5);
        assert!(lo0 == 0.0 && hi <= 1.0 && lo >= 0.0);
    }

    #[test]
    fn rademacher_sup_closed_form_at_one_point() {
        // sup over the L^2 ball of |eps_1 f(X_1)^2| is the kernel value at X_1.
        let s = build_trig_subspace(1);
        let samples = sample_points(&s, 1, 9);
        let k = s.eval_all(samples.points[0]).norm_squared();
        let sup = rademacher_sup(&s, &samples, &[1.0], 2.0, 4, 1);
        assert!((sup - k).abs() < 1e-6, "sup {sup} vs kernel {k}");
    }

    #[test]
    fn symmetrization_on_constants_is_degenerate() {
        let s = build_trig_subspace(0);
        let check = symmetrization_check(&s, 2.0, 10, 20, 2, 4).unwrap();
        assert!(check.lhs.abs() < 1e-10);
        assert!(check.rhs >= 0.0);
    }
}
