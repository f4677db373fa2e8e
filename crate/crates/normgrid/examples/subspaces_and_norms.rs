//! Build subspaces, inspect Gram matrices, and take grid L^p norms.

use normgrid::measure::ReferenceMeasure;
use normgrid::subspace::subspace_from_functions;
use normgrid::{build_discrete_subspace, build_trig_subspace, orthonormalize, FunctionCoeffs};

fn main() {
    // Trigonometric subspace of degree 2: N = 5, orthonormal by construction.
    let trig = build_trig_subspace(2);
    println!(
        "trig degree 2: N = {}, grid = {}",
        trig.dim(),
        trig.measure().grid_size()
    );
    println!("Gram deviation from identity: {:.3e}", {
        let g = trig.gram();
        (g - nalgebra::DMatrix::identity(5, 5)).amax()
    });

    let f = FunctionCoeffs(vec![0.0, 1.0, 0.0, 0.0, 0.0]); // sqrt2 cos x
    for p in [1.0, 2.0, 4.0, 8.0] {
        println!("  ||sqrt2 cos x||_{p} = {:.10}", trig.lp_norm(&f, p));
    }

    // Random discrete subspace on 100 atoms.
    let discrete = build_discrete_subspace(3, 100, 7).expect("full rank");
    println!(
        "discrete N = 3, K = 100: orthonormal = {}, trace(Gram) = {:.6}",
        discrete.is_orthonormal(),
        discrete.gram().trace()
    );

    // Orthonormalize a raw monomial basis on [-1, 1].
    let measure = ReferenceMeasure::interval_uniform(-1.0, 1.0, 64);
    let monomials = subspace_from_functions(measure, 3, |i, x| x.powi(i as i32));
    let on = orthonormalize(&monomials).expect("well conditioned");
    println!(
        "monomials {{1, x, x^2}} orthonormalized: Gram deviation {:.3e}",
        (on.subspace.gram() - nalgebra::DMatrix::identity(3, 3)).amax()
    );
}
