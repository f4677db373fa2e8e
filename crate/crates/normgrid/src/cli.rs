//! Subcommand implementations behind the thin `normgrid` binary.
//!
//! Each subcommand builds a subspace, runs one library operation, writes a
//! JSON/CSV report to `--out`, and prints a one-line summary. Exit codes:
//! 0 on success, 2 on argument errors, 3 on numerical failures.

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::discretize::{
    check_discretization, sample_points, symmetrization_check, v2_exact, vp_lower_bound,
};
use crate::entropy::entropy_profile;
use crate::lewis::{lewis_weights, weighted_discretization};
use crate::nikolskii::{nikolskii_general, nikolskii_q2};
use crate::rng::split_seed;
use crate::subspace::{build_discrete_subspace, build_trig_subspace, Subspace};
use crate::sweep::{sweep_minimal_m, SubspaceFamily, SweepConfig};
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "normgrid",
    version,
    about = "Sampling discretization laboratory for L^p norms on function subspaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    Trig,
    Discrete,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    /// Subspace family.
    #[arg(long, value_enum)]
    pub family: Family,
    /// Trig degree n (dimension N = 2n + 1).
    #[arg(long)]
    pub degree: Option<usize>,
    /// Dimension N of a discrete subspace.
    #[arg(long = "N")]
    pub dim: Option<usize>,
    /// Atom count K of a discrete subspace.
    #[arg(long = "K")]
    pub atoms: Option<usize>,
}

impl FamilyArgs {
    fn build(&self, seed: u64) -> Result<Subspace> {
        match self.family {
            Family::Trig => {
                let degree = self.degree.ok_or_else(|| {
                    Error::InvalidArgument("--degree is required for the trig family".into())
                })?;
                Ok(build_trig_subspace(degree))
            }
            Family::Discrete => {
                let dim = self.dim.ok_or_else(|| {
                    Error::InvalidArgument("--N is required for the discrete family".into())
                })?;
                let atoms = self.atoms.ok_or_else(|| {
                    Error::InvalidArgument("--K is required for the discrete family".into())
                })?;
                build_discrete_subspace(dim, atoms, seed)
            }
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Nikolskii constant M in ||f||_inf <= M N^(1/q) ||f||_q.
    Nikolskii {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        /// Random restarts for q != 2 (the q = 2 constant is exact).
        #[arg(long, default_value_t = 16)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "nikolskii.json")]
        out: PathBuf,
    },
    /// One discretization trial: V_p and the eps verdict.
    Discretize {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Optimizer restarts (p != 2 only).
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        /// Draw from the Lewis density with importance weights instead of mu.
        #[arg(long)]
        weighted: bool,
        #[arg(long, default_value = "discretize.json")]
        out: PathBuf,
        /// Also write the sample set (points, weights, density descriptor).
        #[arg(long)]
        samples_out: Option<PathBuf>,
    },
    /// Lewis weights of the quadrature grid design.
    Lewis {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 500)]
        max_iter: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "lewis.csv")]
        out: PathBuf,
    },
    /// Minimal-m scaling sweep over a list of dimensions.
    Sweep {
        /// Subspace family.
        #[arg(long, value_enum)]
        family: Family,
        /// Atoms per dimension for the discrete family (K = factor * N).
        #[arg(long, default_value_t = 4)]
        atom_factor: usize,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        delta: f64,
        /// Comma-separated dimension list, e.g. 5,9,17.
        #[arg(long = "N", value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1_000_000)]
        m_ceiling: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
        /// Also write every probed (N, m) record.
        #[arg(long)]
        records_out: Option<PathBuf>,
    },
    /// Empirical entropy numbers of B_p(L) on a random point set.
    Entropy {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        k_max: usize,
        #[arg(long, default_value_t = 8192)]
        candidates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "entropy.json")]
        out: PathBuf,
    },
    /// Monte Carlo check of the symmetrization inequality.
    Symmetrize {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "symmetrize.json")]
        out: PathBuf,
    },
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Nikolskii {
            family,
            q,
            restarts,
            seed,
            out,
        } => {
            let subspace = family.build(seed)?;
            let estimate = if q == 2.0 {
                nikolskii_q2(&subspace)
            } else {
                nikolskii_general(&subspace, q, restarts, seed)?
            };
            fs::write(
                &out,
                serde_json::to_string(&estimate).expect("serializable") + "\n",
            )?;
            println!(
                "nikolskii: q={} M={:.12} method={:?} N={} -> {}",
                q,
                estimate.constant,
                estimate.method,
                subspace.dim(),
                out.display()
            );
        }
        Command::Discretize {
            family,
            p,
            m,
            eps,
            seed,
            restarts,
            weighted,
            out,
            samples_out,
        } => {
            let subspace = family.build(seed)?;
            let samples = if weighted {
                weighted_discretization(&subspace, p, m, seed)?
            } else {
                sample_points(&subspace, m, seed)
            };
            let mut report = if p == 2.0 {
                v2_exact(&subspace, &samples)
            } else {
                vp_lower_bound(&subspace, &samples, p, restarts, split_seed(seed, 1))?
            };
            let pass = check_discretization(&mut report, eps)?;
            fs::write(&out, report.to_json_line() + "\n")?;
            if let Some(path) = samples_out {
                fs::write(&path, samples.to_json_value().to_string() + "\n")?;
            }
            let semantics = if report.not_refuted_semantics() && pass {
                " (not refuted)"
            } else {
                ""
            };
            println!(
                "discretize: p={} m={} N={} V={:.6e} pass={}{} -> {}",
                p,
                m,
                subspace.dim(),
                report.value,
                pass,
                semantics,
                out.display()
            );
        }
        Command::Lewis {
            family,
            p,
            tol,
            max_iter,
            seed,
            out,
        } => {
            let subspace = family.build(seed)?;
            let lw = lewis_weights(&subspace, p, tol, max_iter)?;
            let mut csv = String::from("grid_index,point,w,rho\n");
            for (g, &x) in subspace.measure().grid().iter().enumerate() {
                csv.push_str(&format!(
                    "{},{},{},{}\n",
                    g, x, lw.weights[g], lw.density[g]
                ));
            }
            fs::write(&out, csv)?;
            println!(
                "lewis: p={} N={} sum_w={:.9} residual={:.3e} iterations={} -> {}",
                p,
                subspace.dim(),
                lw.weights.iter().sum::<f64>(),
                lw.residual,
                lw.iterations,
                out.display()
            );
        }
        Command::Sweep {
            family,
            atom_factor,
            p,
            eps,
            delta,
            dims,
            trials,
            m_ceiling,
            seed,
            out,
            records_out,
        } => {
            let family = match family {
                Family::Trig => SubspaceFamily::Trig,
                Family::Discrete => SubspaceFamily::Discrete { atom_factor },
            };
            let config = SweepConfig {
                trials,
                m_ceiling,
                ..SweepConfig::new(family, dims, p, eps, delta, seed)
            };
            let result = sweep_minimal_m(&config)?;
            fs::write(&out, result.summary_csv())?;
            if let Some(path) = records_out {
                fs::write(&path, result.records_csv())?;
            }
            for d in &result.per_dim {
                let tag = if d.censored {
                    " (censored at m_max)"
                } else {
                    ""
                };
                println!(
                    "sweep: N={} m*={}{} rate={:.3}",
                    d.dim, d.m_star, tag, d.at_star.rate
                );
            }
            match result.fit {
                Some(fit) => println!(
                    "sweep: fit m* ~ C N (log N)^s with C={:.4} s={:.4} (power exponent {:.4}) -> {}",
                    fit.c,
                    fit.s,
                    fit.power_exponent,
                    out.display()
                ),
                None => println!("sweep: no exponent fit (censored or too few dimensions) -> {}", out.display()),
            }
        }
        Command::Entropy {
            family,
            p,
            m,
            k_max,
            candidates,
            seed,
            out,
        } => {
            let subspace = family.build(seed)?;
            let samples = sample_points(&subspace, m, split_seed(seed, 2));
            let profile = entropy_profile(&subspace, p, &samples, k_max, candidates, seed)?;
            fs::write(&out, profile.to_json_value().to_string() + "\n")?;
            let fit = profile
                .fitted
                .as_ref()
                .map(|f| format!("W={:.6} theta={:.4}", f.w, f.theta))
                .unwrap_or_else(|| "no fit".into());
            println!(
                "entropy: p={} m={} N={} e_hat={:?} {} -> {}",
                p,
                m,
                subspace.dim(),
                profile.covering,
                fit,
                out.display()
            );
        }
        Command::Symmetrize {
            family,
            p,
            m,
            trials,
            restarts,
            seed,
            out,
        } => {
            let subspace = family.build(seed)?;
            let check = symmetrization_check(&subspace, p, m, trials, restarts, seed)?;
            let body = serde_json::json!({
                "p": p,
                "m": m,
                "N": subspace.dim(),
                "lhs": check.lhs,
                "rhs": check.rhs,
                "lhs_stderr": check.lhs_stderr,
                "rhs_stderr": check.rhs_stderr,
                "trials": check.trials,
                "seed": seed,
            });
            fs::write(&out, body.to_string() + "\n")?;
            println!(
                "symmetrize: p={} m={} lhs={:.6} rhs={:.6} holds={} -> {}",
                p,
                m,
                check.lhs,
                check.rhs,
                check.holds_within(3.0),
                out.display()
            );
        }
    }
    Ok(())
}
