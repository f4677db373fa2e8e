//! Nikolskii constants: exact at q = 2, multistart lower bounds otherwise.

use normgrid::{build_discrete_subspace, build_trig_subspace, nikolskii_general, nikolskii_q2};

fn main() {
    // Trig systems have a flat Christoffel sum, so M = 1 for every degree.
    for degree in [1, 2, 4, 8] {
        let s = build_trig_subspace(degree);
        let est = nikolskii_q2(&s);
        println!(
            "trig degree {degree}: M(q=2) = {:.12} at x* = {:.4}",
            est.constant, est.x_star
        );
    }

    // A random discrete space is not flat; q = 2 is exact, q = 4 is a
    // certified lower bound from the multistart ascent.
    let s = build_discrete_subspace(4, 60, 11).expect("full rank");
    let exact = nikolskii_q2(&s);
    let general = nikolskii_general(&s, 4.0, 16, 3).expect("valid q");
    println!("discrete N=4 K=60:");
    println!("  M(q=2) = {:.8} (exact on the grid)", exact.constant);
    println!("  M(q=4) >= {:.8} ({:?})", general.constant, general.method);
    println!("  certificate replay: {:.8}", general.verify(&s));
    for p in [1.5, 3.0] {
        println!(
            "  induced (inf,{p}) constant: {:.8}",
            exact.induced_inf_p_constant(p)
        );
    }
}
