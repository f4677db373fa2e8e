//! Monte Carlo check of the symmetrization inequality
//! m E[V_p] <= 2 E sup_f |sum_j eps_j |f(X_j)|^p|.

use normgrid::{build_trig_subspace, symmetrization_check};

fn main() {
    normgrid::init_parallelism();
    let s = build_trig_subspace(1);
    for (p, m) in [(2.0, 50), (2.0, 200), (3.0, 50)] {
        let check = symmetrization_check(&s, p, m, 200, 8, 4).unwrap();
        println!(
            "p = {p}, m = {m}: m E[V_p] = {:.4} (+-{:.4})  vs  2 E[sup] = {:.4} (+-{:.4})  holds = {}",
            check.lhs,
            check.lhs_stderr,
            check.rhs,
            check.rhs_stderr,
            check.holds_within(3.0)
        );
    }
}
