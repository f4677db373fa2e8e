//! `normgrid`: a numerical laboratory for sampling discretization of `L^p` norms
//! on finite-dimensional function subspaces.
//!
//! Given an `N`-dimensional subspace `L` of `L^p(mu)` with an evaluable basis and a
//! quadrature-backed reference measure, the central random quantity is
//!
//! ```text
//! V_p(B_p(L)) = sup_{||f||_p <= 1} | (1/m) * sum_j |f(X_j)|^p  -  ||f||_p^p |
//! ```
//!
//! for `m` i.i.d. sample points `X_1..X_m`. Discretization holds with accuracy
//! `eps` exactly when `V_p <= eps`, which gives the familiar two-sided bound
//! `(1-eps)||f||_p^p <= (1/m) sum |f(X_j)|^p <= (1+eps)||f||_p^p` for all `f` in `L`.
//!
//! What the crate provides, module by module:
//!
//! - [`measure`] / [`subspace`]: reference measures (torus, interval, finite atoms)
//!   with probability quadrature grids, trigonometric and random discrete subspaces,
//!   symmetric-square-root orthonormalization, grid `L^p` norms.
//! - [`nikolskii`]: the constant `M` in the inequality `||f||_inf <= M N^{1/q} ||f||_q`
//!   over a subspace — exact at `q = 2` through the reproducing kernel, certified
//!   lower bounds by multistart ascent otherwise.
//! - [`discretize`]: sample sets, exact `V_2` by symmetric eigendecomposition,
//!   certified lower bounds on `V_p` for general `p`, `eps`-checks, Monte Carlo
//!   success probabilities with Wilson intervals, and an empirical check of the
//!   symmetrization inequality `m E[V_p] <= 2 E sup |sum_j eps_j |f(X_j)|^p|`.
//! - [`lewis`]: `l_p` Lewis weights on the quadrature grid by fixed-point iteration,
//!   the induced change of density, and unbiased weighted discretization.
//! - [`entropy`]: empirical entropy numbers `e_k` of `B_p(L)` under the discretized
//!   uniform norm, decay fits `e_k ~ W 2^{-k/theta}`, Dudley-type entropy sums, and
//!   the finite-dimensional decay-propagation check.
//! - [`sweep`]: scaling sweeps that locate, per dimension `N`, the minimal sample
//!   count `m*` whose success rate clears a Wilson lower bound, with exponent fits
//!   of `m*` against `N (log N)^s`.
//!
//! Every randomized operation takes an explicit seed and is reproducible; trials
//! fan out over a rayon pool capped by the `NORMGRID_THREADS` environment variable.
//!
//! The `examples/` directory has one runnable program per capability; the thin
//! `normgrid` binary exposes the same operations as subcommands that write JSON/CSV
//! reports.

#![forbid(unsafe_code)]

use std::sync::OnceLock;

use thiserror::Error;

pub mod cli;
pub mod discretize;
pub mod entropy;
pub mod lewis;
pub mod measure;
pub mod nikolskii;
pub mod rng;
pub mod subspace;
pub mod sweep;

pub use discretize::{
    check_discretization, sample_points, success_probability, symmetrization_check, v2_exact,
    vp_lower_bound, DiscretizationReport, Exactness, SampleSet, SuccessEstimate,
    SymmetrizationCheck,
};
pub use entropy::{
    decay_propagation_check, dudley_sum, entropy_profile, fit_decay, DecayPropagation,
    EntropyProfile,
};
pub use lewis::{
    change_of_density, lewis_weights, lewis_weights_for_design, weighted_discretization,
    ChangeOfDensity, LewisWeightVector,
};
pub use measure::{Domain, ReferenceMeasure};
pub use nikolskii::{nikolskii_general, nikolskii_q2, NikolskiiEstimate, NikolskiiMethod};
pub use subspace::{
    build_discrete_subspace, build_trig_subspace, orthonormalize, FunctionCoeffs, Orthonormalized,
    Subspace,
};
pub use sweep::{sweep_minimal_m, ScalingFit, SubspaceFamily, SweepConfig, SweepResult};

/// Errors shared by all modules.
///
/// Argument errors map to CLI exit code 2, numerical failures to exit code 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("ill-conditioned basis (condition number {cond:.3e})")]
    IllConditionedBasis { cond: f64 },

    #[error("degenerate random subspace after {attempts} attempts")]
    DegenerateRandomSubspace { attempts: usize },

    #[error(
        "lewis fixed point not converged: residual {residual:.3e} after {iterations} iterations"
    )]
    LewisNotConverged { residual: f64, iterations: usize },

    #[error("degenerate design: weighted Gram matrix is singular")]
    DegenerateDesign,

    #[error("profile too flat: fewer than two nonzero entropy estimates")]
    ProfileTooFlat,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for argument errors, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) => 2,
            Error::Io(_) => 1,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

static THREAD_POOL_INIT: OnceLock<usize> = OnceLock::new();

/// Cap rayon's global pool at `NORMGRID_THREADS` threads (when set and positive).
///
/// Safe to call repeatedly; only the first call configures the pool.
pub fn init_parallelism() -> usize {
    *THREAD_POOL_INIT.get_or_init(|| {
        let requested = std::env::var("NORMGRID_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&n| n > 0);
        if let Some(n) = requested {
            // Ignore the error if another component already built the pool.
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        requested.unwrap_or_else(rayon::current_num_threads)
    })
}
