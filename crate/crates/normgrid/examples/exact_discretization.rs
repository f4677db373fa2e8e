//! Exact V_2 discretization: the Marcinkiewicz-Zygmund rule, random sampling,
//! and Monte Carlo success probabilities.

use normgrid::measure::TAU;
use normgrid::{
    build_trig_subspace, check_discretization, sample_points, success_probability, v2_exact,
    SampleSet,
};

fn main() {
    normgrid::init_parallelism();
    let s = build_trig_subspace(2); // N = 5

    // Five equispaced points discretize degree-2 trig L^2 norms exactly.
    let points: Vec<f64> = (0..5).map(|j| TAU * j as f64 / 5.0).collect();
    let mz = SampleSet::from_points(&s, points, 0);
    let report = v2_exact(&s, &mz);
    println!("equispaced m = 5: V_2 = {:.3e} (eigen-exact)", report.value);

    // Random i.i.d. points need more samples for the same accuracy.
    for m in [5, 20, 80, 320] {
        let samples = sample_points(&s, m, 42);
        let mut report = v2_exact(&s, &samples);
        let pass = check_discretization(&mut report, 0.5).unwrap();
        println!(
            "random m = {m:4}: V_2 = {:.4} pass(eps=0.5) = {pass}",
            report.value
        );
    }

    // Success probability with a Wilson 95% interval.
    for m in [20, 60, 180] {
        let est = success_probability(&s, 2.0, m, 0.5, 200, 7).unwrap();
        println!(
            "m = {m:4}: success rate {:.3} (Wilson 95% [{:.3}, {:.3}])",
            est.rate, est.wilson_lo, est.wilson_hi
        );
    }
}
