//! Minimal-m scaling sweep: how the discretization threshold grows with N.

use normgrid::{sweep_minimal_m, SubspaceFamily, SweepConfig};

fn main() {
    normgrid::init_parallelism();
    let config = SweepConfig {
        trials: 120,
        ..SweepConfig::new(SubspaceFamily::Trig, vec![3, 5, 9, 17], 2.0, 0.5, 0.1, 1)
    };
    let result = sweep_minimal_m(&config).unwrap();
    for d in &result.per_dim {
        println!(
            "N = {:2}: m* = {:4} (rate {:.3}, Wilson lower bound {:.3}){}",
            d.dim,
            d.m_star,
            d.at_star.rate,
            d.at_star.wilson_lo,
            if d.censored { " censored" } else { "" }
        );
    }
    match result.fit {
        Some(fit) => println!(
            "fit: m* ~ C N (log N)^s with C = {:.3}, s = {:.3} (power-law exponent {:.3})",
            fit.c, fit.s, fit.power_exponent
        ),
        None => println!("no fit (censored or too few dimensions)"),
    }
    print!("{}", result.summary_csv());
}
