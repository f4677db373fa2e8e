//! Scaling sweeps: the minimal sample count `m*` per dimension `N` whose
//! success rate clears a Wilson lower bound, plus exponent fits of `m*`
//! against `N (log N)^s`.
//!
//! Sought thresholds grow like `N` times a polylog factor for well-spread
//! subspaces; the sweep only certifies the exponent window and monotonicity,
//! never an absolute constant. Each `(N, m)` probe runs a fixed number of
//! independent trials with seeds derived from the master seed, so a sweep is
//! reproducible bit for bit.

use serde::{Deserialize, Serialize};

use crate::discretize::{success_probability, SuccessEstimate};
use crate::rng::split_seed;
use crate::subspace::{
    build_discrete_subspace, default_grid_size, trig_subspace_with_grid, Subspace,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SubspaceFamily {
    /// Trigonometric subspaces; dimensions must be odd (`N = 2n + 1`).
    Trig,
    /// Random discrete subspaces with `atom_factor * N` atoms.
    Discrete { atom_factor: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepConfig {
    pub family: SubspaceFamily,
    /// Strictly increasing list of dimensions.
    pub dims: Vec<usize>,
    pub p: f64,
    pub epsilon: f64,
    /// Target success rate is `1 - delta` (Wilson 95% lower bound).
    pub delta: f64,
    /// Trials per `(N, m)` probe.
    pub trials: usize,
    /// Search ceiling for `m`; dimensions that reach it are censored.
    pub m_ceiling: usize,
    pub seed: u64,
}

impl SweepConfig {
    pub fn new(
        family: SubspaceFamily,
        dims: Vec<usize>,
        p: f64,
        epsilon: f64,
        delta: f64,
        seed: u64,
    ) -> Self {
        SweepConfig {
            family,
            dims,
            p,
            epsilon,
            delta,
            trials: 200,
            m_ceiling: 1_000_000,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidArgument("epsilon must lie in (0, 1)".into()));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidArgument("delta must lie in (0, 1)".into()));
        }
        if self.dims.is_empty() {
            return Err(Error::InvalidArgument(
                "dimension list must be nonempty".into(),
            ));
        }
        if self.dims.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "dimension list must be strictly increasing".into(),
            ));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("need at least one trial".into()));
        }
        if let SubspaceFamily::Trig = self.family {
            if self.dims.iter().any(|&n| n % 2 == 0) {
                return Err(Error::InvalidArgument(
                    "trig dimensions must be odd (N = 2n + 1)".into(),
                ));
            }
        }
        Ok(())
    }

    fn build_subspace(&self, dim: usize) -> Result<Subspace> {
        match self.family {
            SubspaceFamily::Trig => Ok(trig_subspace_with_grid(
                (dim - 1) / 2,
                default_grid_size(dim),
            )),
            SubspaceFamily::Discrete { atom_factor } => {
                if atom_factor == 0 {
                    return Err(Error::InvalidArgument(
                        "atom factor must be positive".into(),
                    ));
                }
                build_discrete_subspace(dim, atom_factor * dim, split_seed(self.seed, dim as u64))
            }
        }
    }
}

/// One `(N, m)` probe: the success estimate at that sample count.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProbeRecord {
    #[serde(rename = "N")]
    pub dim: usize,
    pub m: usize,
    pub estimate: SuccessEstimate,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DimResult {
    #[serde(rename = "N")]
    pub dim: usize,
    /// Minimal passing `m`; the ceiling value when censored.
    pub m_star: usize,
    pub censored: bool,
    /// The probe at `m_star` (or at the ceiling for censored dimensions).
    pub at_star: SuccessEstimate,
}

/// Fit of `log m* = log C + log N + s log log N` plus a raw power-law exponent.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ScalingFit {
    pub c: f64,
    pub s: f64,
    /// Slope of `log m*` against `log N`.
    pub power_exponent: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: SweepConfig,
    pub per_dim: Vec<DimResult>,
    /// Every probe evaluated during the searches, ordered by (N, m).
    pub records: Vec<ProbeRecord>,
    /// Absent when any dimension is censored (censoring honesty) or fewer than
    /// two dimensions were swept.
    pub fit: Option<ScalingFit>,
}

impl SweepResult {
    fn csv_row(dim: usize, m: usize, e: &SuccessEstimate, censored: bool) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            dim, m, e.trials, e.successes, e.rate, e.wilson_lo, e.wilson_hi, censored
        )
    }

    /// One row per dimension, evaluated at `m*`.
    pub fn summary_csv(&self) -> String {
        let mut out = String::from("N,m,trials,successes,rate,wilson_lo,wilson_hi,censored\n");
        for d in &self.per_dim {
            out.push_str(&Self::csv_row(d.dim, d.m_star, &d.at_star, d.censored));
            out.push('\n');
        }
        out
    }

    /// One row per probed `(N, m)` pair.
    pub fn records_csv(&self) -> String {
        let mut out = String::from("N,m,trials,successes,rate,wilson_lo,wilson_hi,censored\n");
        for r in &self.records {
            out.push_str(&Self::csv_row(r.dim, r.m, &r.estimate, false));
            out.push('\n');
        }
        out
    }
}

/// Exponential-then-binary search, per dimension, for the smallest `m` whose
/// Wilson 95% lower bound on the success rate reaches `1 - delta`.
///
/// The search starts at `m = N`: below the dimension some unit-norm function
/// vanishes at every sample point, so `V_p >= 1 > epsilon` for any `p`.
pub fn sweep_minimal_m(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let target = 1.0 - config.delta;
    let mut per_dim = Vec::with_capacity(config.dims.len());
    let mut records: Vec<ProbeRecord> = Vec::new();

    for &dim in &config.dims {
        let subspace = config.build_subspace(dim)?;
        let dim_seed = split_seed(config.seed, dim as u64);
        let probe = |m: usize, records: &mut Vec<ProbeRecord>| -> Result<SuccessEstimate> {
            let est = success_probability(
                &subspace,
                config.p,
                m,
                config.epsilon,
                config.trials,
                split_seed(dim_seed, m as u64),
            )?;
            records.push(ProbeRecord {
                dim,
                m,
                estimate: est,
            });
            Ok(est)
        };

        // Exponential phase from m = N.
        let mut m = dim;
        let mut lo = dim.saturating_sub(1);
        let hi_est;
        loop {
            let est = probe(m, &mut records)?;
            if est.wilson_lo >= target {
                hi_est = Some((m, est));
                break;
            }
            lo = m;
            if m >= config.m_ceiling {
                hi_est = None;
                break;
            }
            m = (m * 2).min(config.m_ceiling);
        }

        match hi_est {
            None => {
                let last = records.last().expect("probe recorded").estimate;
                per_dim.push(DimResult {
                    dim,
                    m_star: config.m_ceiling,
                    censored: true,
                    at_star: last,
                });
            }
            Some((mut hi, mut est_at_hi)) => {
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    let est = probe(mid, &mut records)?;
                    if est.wilson_lo >= target {
                        hi = mid;
                        est_at_hi = est;
                    } else {
                        lo = mid;
                    }
                }
                per_dim.push(DimResult {
                    dim,
                    m_star: hi,
                    censored: false,
                    at_star: est_at_hi,
                });
            }
        }
    }

    records.sort_by_key(|r| (r.dim, r.m));
    let fit = fit_scaling(&per_dim);
    Ok(SweepResult {
        config: config.clone(),
        per_dim,
        records,
        fit,
    })
}

fn fit_scaling(per_dim: &[DimResult]) -> Option<ScalingFit> {
    if per_dim.iter().any(|d| d.censored) {
        return None;
    }
    let pts: Vec<(f64, f64, f64)> = per_dim
        .iter()
        .filter(|d| d.dim >= 2)
        .map(|d| {
            let n = d.dim as f64;
            (
                n.ln().ln(),
                (d.m_star as f64).ln() - n.ln(),
                (d.m_star as f64).ln(),
            )
        })
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let slope_intercept = |xy: &[(f64, f64)]| -> (f64, f64) {
        let n = xy.len() as f64;
        let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
        let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
        let var = xy.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>();
        let cov = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>();
        let slope = cov / var;
        (slope, my - slope * mx)
    };
    let loglog: Vec<(f64, f64)> = pts.iter().map(|p| (p.0, p.1)).collect();
    let (s, log_c) = slope_intercept(&loglog);
    let power: Vec<(f64, f64)> = per_dim
        .iter()
        .filter(|d| d.dim >= 2)
        .map(|d| ((d.dim as f64).ln(), (d.m_star as f64).ln()))
        .collect();
    let (power_exponent, _) = slope_intercept(&power);
    Some(ScalingFit {
        c: log_c.exp(),
        s,
        power_exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tiny_trig_sweep_finds_finite_thresholds() {
        let config = SweepConfig {
            trials: 40,
            ..SweepConfig::new(SubspaceFamily::Trig, vec![3, 5], 2.0, 0.9, 0.5, 7)
        };
        let result = sweep_minimal_m(&config).unwrap();
        assert_eq!(result.per_dim.len(), 2);
        for d in &result.per_dim {
            assert!(!d.censored);
            assert!(d.m_star >= d.dim, "m* = {} below N = {}", d.m_star, d.dim);
            assert!(d.m_star < config.m_ceiling);
        }
        assert!(result.per_dim[1].m_star >= result.per_dim[0].m_star);
    }

    #[test]
    fn censored_dimensions_suppress_the_fit() {
        let config = SweepConfig {
            trials: 20,
            m_ceiling: 4,
            ..SweepConfig::new(SubspaceFamily::Trig, vec![3, 5], 2.0, 0.1, 0.05, 3)
        };
        let result = sweep_minimal_m(&config).unwrap();
        assert!(result.per_dim.iter().any(|d| d.censored));
        assert!(result.fit.is_none());
        let csv = result.summary_csv();
        assert!(csv.contains("true"));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let bad_eps = SweepConfig::new(SubspaceFamily::Trig, vec![3], 2.0, 1.5, 0.1, 1);
        assert!(sweep_minimal_m(&bad_eps).is_err());
        let bad_dims = SweepConfig::new(SubspaceFamily::Trig, vec![5, 3], 2.0, 0.5, 0.1, 1);
        assert!(sweep_minimal_m(&bad_dims).is_err());
        let even_trig = SweepConfig::new(SubspaceFamily::Trig, vec![4], 2.0, 0.5, 0.1, 1);
        assert!(sweep_minimal_m(&even_trig).is_err());
    }

    #[test]
    fn synthetic_fit_recovers_the_exponent() {
        // m* = 10 N (log N)^1.3 exactly.
        let per_dim: Vec<DimResult> = [5usize, 9, 17, 33, 65]
            .iter()
            .map(|&n| {
                let m = (10.0 * n as f64 * (n as f64).ln().powf(1.3)).round() as usize;
                DimResult {
                    dim: n,
                    m_star: m,
                    censored: false,
                    at_star: SuccessEstimate {
                        rate: 1.0,
                        wilson_lo: 0.95,
                        wilson_hi: 1.0,
                        trials: 10,
                        successes: 10,
                    },
                }
            })
            .collect();
        let fit = fit_scaling(&per_dim).unwrap();
        assert!((fit.s - 1.3).abs() < 0.05, "s = {}", fit.s);
    }

    #[test]
    fn success_rate_is_monotone_in_m_within_noise() {
        let config = SweepConfig::new(SubspaceFamily::Trig, vec![9], 2.0, 0.5, 0.1, 5);
        let s = config.build_subspace(9).unwrap();
        let mut rates = Vec::new();
        let mut m = 9;
        for _ in 0..5 {
            let est = success_probability(&s, 2.0, m, 0.5, 120, split_seed(5, m as u64)).unwrap();
            rates.push((est.wilson_lo, est.wilson_hi));
            m *= 2;
        }
        for w in rates.windows(2) {
            // Nondecreasing up to Wilson noise: the next interval cannot sit
            // strictly below the previous one.
            assert!(w[1].1 >= w[0].0, "rate dropped beyond noise: {w:?}");
        }
    }
}
