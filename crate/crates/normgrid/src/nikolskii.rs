//! Nikolskii-type constants `M` in `||f||_inf <= M N^{1/q} ||f||_q`.
//!
//! The sup norm is the grid sup throughout, so every constant reported here is
//! the constant of the same inequality that the discretization modules test.
//! At `q = 2` the extremal function at a point is the reproducing kernel, so the
//! grid maximum of the Christoffel-type sum `k(x) = sum_i u_i(x)^2` gives the
//! exact constant `M = sqrt(max_x k(x) / N)`. For other `q` a multistart
//! projected ascent certifies a lower bound.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rng::{rng_from, split_seed, standard_normal_vector};
use crate::subspace::{FunctionCoeffs, Subspace};
use crate::{Error, Result};

/// How a reported constant was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NikolskiiMethod {
    /// Exact on the grid (reproducing-kernel maximizer, `q = 2` only).
    ExactGrid,
    /// Multistart ascent; the constant is a certified lower bound.
    Multistart,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NikolskiiEstimate {
    pub q: f64,
    /// The reported constant `M`.
    #[serde(rename = "M")]
    pub constant: f64,
    pub method: NikolskiiMethod,
    /// Grid point where the stored maximizer attains its sup.
    pub x_star: f64,
    /// Coefficients of the stored maximizer.
    pub c_star: FunctionCoeffs,
}

impl NikolskiiEstimate {
    /// Re-evaluate the stored certificate: `||f*||_{inf,grid} / (N^{1/q} ||f*||_q)`.
    pub fn verify(&self, subspace: &Subspace) -> f64 {
        let sup = subspace.sup_norm_grid(&self.c_star);
        let norm = subspace.lp_norm(&self.c_star, self.q);
        sup / (n_power(subspace.dim(), self.q) * norm)
    }

    /// Constant of the induced `(inf, p)` inequality `||f||_inf <= M_p N^{1/p} ||f||_p`
    /// derived from a `q = 2` constant `M`.
    ///
    /// For `p < 2` this is the certified route `||f||_inf <= M^{2/p} N^{1/p} ||f||_p`
    /// (interpolate `||f||_2^2 <= ||f||_inf^{2-p} ||f||_p^p` into the `q = 2` bound).
    /// For `p > 2` it is the constant consistent with the chain
    /// `||f||_inf <= M_p^{p/2} sqrt(N) ||f||_2`, a proxy rather than a bound.
    pub fn induced_inf_p_constant(&self, p: f64) -> f64 {
        debug_assert_eq!(
            self.q, 2.0,
            "induced constants are derived from the q = 2 estimate"
        );
        self.constant.powf(2.0 / p)
    }
}

fn n_power(n: usize, q: f64) -> f64 {
    (n as f64).powf(1.0 / q)
}

/// Exact grid `(inf, 2)` constant via the reproducing kernel.
///
/// `M = sqrt(max_g k(x_g) / N)` with `k(x) = sum_i u_i(x)^2`; the stored
/// maximizer is the normalized kernel function at the argmax grid point.
pub fn nikolskii_q2(subspace: &Subspace) -> NikolskiiEstimate {
    assert!(
        subspace.is_orthonormal(),
        "nikolskii_q2 requires an orthonormal basis"
    );
    let values = subspace.grid_values();
    let n = subspace.dim() as f64;
    let (mut best_g, mut best_k) = (0usize, f64::NEG_INFINITY);
    for g in 0..values.nrows() {
        let k = values.row(g).norm_squared();
        if k > best_k {
            best_k = k;
            best_g = g;
        }
    }
    let scale = best_k.sqrt();
    let c_star = FunctionCoeffs(
        values
            .row(best_g)
            .iter()
            .map(|&u| u / scale)
            .collect::<Vec<_>>(),
    );
    NikolskiiEstimate {
        q: 2.0,
        constant: (best_k / n).sqrt(),
        method: NikolskiiMethod::ExactGrid,
        x_star: subspace.measure().grid()[best_g],
        c_star,
    }
}

/// Certified lower bound on the `(inf, q)` constant by multistart projected ascent.
///
/// Starts: the reproducing direction `u(x_g)` at every grid point plus
/// `restarts` random directions. Each start is refined by ascent on the grid
/// sup with `||f||_q = 1` renormalization after every step.
pub fn nikolskii_general(
    subspace: &Subspace,
    q: f64,
    restarts: usize,
    seed: u64,
) -> Result<NikolskiiEstimate> {
    if q < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "q must be at least 1 (got {q})"
        )));
    }
    let values = subspace.grid_values();
    let n = subspace.dim();
    let weights = subspace.measure().grid_weights().to_vec();

    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(values.nrows() + restarts);
    for g in 0..values.nrows() {
        let row: Vec<f64> = values.row(g).iter().cloned().collect();
        if row.iter().any(|&v| v != 0.0) {
            starts.push(row);
        }
    }
    let mut rng = rng_from(split_seed(seed, 0x6e69_6b6f));
    for _ in 0..restarts {
        starts.push(standard_normal_vector(n, &mut rng).as_slice().to_vec());
    }

    let refined: Vec<(f64, Vec<f64>)> = starts
        .par_iter()
        .map(|start| ascend_sup_ratio(values, &weights, q, start))
        .collect();
    let (best_obj, best_c) = refined
        .into_iter()
        .max_by(|a, b| a.0.partial_cmp(&b.0).expect("objectives are finite"))
        .expect("at least one start");

    // best_obj = max_g |f(x_g)| with ||f||_q = 1.
    let constant = best_obj / n_power(n, q);
    let coeffs = FunctionCoeffs(best_c);
    let fn_values = subspace.grid_function_values(&coeffs);
    let star_g = (0..fn_values.len())
        .max_by(|&a, &b| fn_values[a].abs().partial_cmp(&fn_values[b].abs()).unwrap())
        .unwrap();
    Ok(NikolskiiEstimate {
        q,
        constant,
        method: NikolskiiMethod::Multistart,
        x_star: subspace.measure().grid()[star_g],
        c_star: coeffs,
    })
}

const ASCENT_MAX_ITER: usize = 200;
const ASCENT_REL_TOL: f64 = 1e-10;

/// Maximize `max_g |(Vc)_g|` over `||f||_q = 1` from one start; returns the
/// objective and the final (normalized) coefficients.
///
/// The ascent direction is the gradient of the sup projected onto the tangent
/// space of the `L^q` sphere (the radial component along the norm gradient is
/// removed); step sizes grow on improvement and halve on failure.
fn ascend_sup_ratio(
    values: &nalgebra::DMatrix<f64>,
    weights: &[f64],
    q: f64,
    start: &[f64],
) -> (f64, Vec<f64>) {
    let mut c = nalgebra::DVector::from_column_slice(start);
    let normalize = |c: &mut nalgebra::DVector<f64>| -> Option<nalgebra::DVector<f64>> {
        let v = values * &*c;
        let norm = crate::subspace::lp_norm_of_values(v.as_slice(), weights, q);
        if norm.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return None;
        }
        *c /= norm;
        Some(v / norm)
    };
    let Some(mut v) = normalize(&mut c) else {
        return (0.0, start.to_vec());
    };
    let sup_at = |v: &nalgebra::DVector<f64>| -> (usize, f64) {
        let mut g_star = 0;
        let mut best = -1.0;
        for (g, &x) in v.iter().enumerate() {
            if x.abs() > best {
                best = x.abs();
                g_star = g;
            }
        }
        (g_star, best)
    };
    let (mut g_star, mut obj) = sup_at(&v);
    let mut step = 0.25;
    for _ in 0..ASCENT_MAX_ITER {
        let sign = v[g_star].signum();
        let grad_sup = values.row(g_star).transpose() * sign;
        // gradient of ||f||_q at ||f||_q = 1
        let mut grad_norm = nalgebra::DVector::zeros(c.len());
        for (g, &x) in v.iter().enumerate() {
            if x != 0.0 {
                grad_norm.axpy(
                    weights[g] * x.signum() * x.abs().powf(q - 1.0),
                    &values.row(g).transpose(),
                    1.0,
                );
            }
        }
        let mut direction = grad_sup - obj * grad_norm;
        let dnorm = direction.norm();
        if dnorm < 1e-15 {
            break;
        }
        direction /= dnorm;
        let mut improved = false;
        while step >= 1e-14 {
            let mut trial = &c + step * &direction;
            let Some(tv) = normalize(&mut trial) else {
                break;
            };
            let (tg, tobj) = sup_at(&tv);
            if tobj > obj {
                let improvement = (tobj - obj) / obj.max(f64::MIN_POSITIVE);
                c = trial;
                v = tv;
                g_star = tg;
                obj = tobj;
                step = (step * 2.0).min(0.5);
                improved = improvement >= ASCENT_REL_TOL;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (obj, c.as_slice().to_vec())
}
