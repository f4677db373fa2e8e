//! Empirical entropy numbers of B_p(L) under the discretized uniform norm.

use normgrid::{
    build_trig_subspace, decay_propagation_check, dudley_sum, entropy_profile, sample_points,
};

fn main() {
    normgrid::init_parallelism();
    let s = build_trig_subspace(1); // N = 3
    let samples = sample_points(&s, 50, 13);
    let profile = entropy_profile(&s, 2.0, &samples, 3, 8192, 17).unwrap();

    println!("covering estimates e_hat_k: {:?}", profile.covering);
    println!("packing estimates  p_hat_k: {:?}", profile.packing);
    if let Some(fit) = &profile.fitted {
        println!(
            "decay fit: e_hat_k ~ {:.4} * 2^(-k/{:.4})",
            fit.w, fit.theta
        );
    }
    println!(
        "dudley sum (tau = 2): {:.6}",
        dudley_sum(&profile, 2.0).unwrap()
    );

    let prop = decay_propagation_check(&profile, s.dim());
    for check in &prop.checks {
        println!(
            "propagation k = {}: estimate {:.4} <= bound {:.4} -> {}",
            check.k, check.estimate, check.bound, check.ok
        );
    }
    println!("propagation holds: {}", prop.holds());
}
