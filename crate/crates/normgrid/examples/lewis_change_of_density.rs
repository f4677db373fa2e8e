//! Lewis weights, the induced change of density, and the flattened subspace.

use nalgebra::DMatrix;
use normgrid::measure::ReferenceMeasure;
use normgrid::subspace::{orthonormalize, subspace_from_atom_values};
use normgrid::{change_of_density, lewis_weights, nikolskii_q2, FunctionCoeffs};

fn main() {
    // A 2-dimensional space on 3 atoms with one dominating atom.
    let measure = ReferenceMeasure::atoms_uniform(3);
    let values = DMatrix::from_row_slice(3, 2, &[1.0, 0.1, 1.0, -0.1, 1.0, 8.0]);
    let s = orthonormalize(&subspace_from_atom_values(measure, values).unwrap())
        .unwrap()
        .subspace;

    let p = 1.5;
    let lw = lewis_weights(&s, p, 1e-10, 500).unwrap();
    println!(
        "lewis weights (p = {p}): {:?} (sum = {:.9}, residual = {:.1e}, {} iterations)",
        lw.weights,
        lw.weights.iter().sum::<f64>(),
        lw.residual,
        lw.iterations
    );

    let cod = change_of_density(&s, p).unwrap();
    println!("mu  = {:?}", s.measure().grid_weights());
    println!("nu  = {:?}", cod.nu.grid_weights());
    println!("TV(nu, mu) = {:.4}", cod.tv_distance_to_mu());

    // The transformed space is isometric to the original and nearly flat.
    let f = FunctionCoeffs(vec![0.7, -0.4]);
    println!(
        "isometry: ||f||_p(mu) = {:.10} vs ||f'||_p(nu) = {:.10}",
        s.lp_norm(&f, p),
        cod.transformed.lp_norm(&cod.map_coeffs(&f), p)
    );
    println!(
        "Nikolskii constant of L': {:.8}",
        nikolskii_q2(&cod.transformed).constant
    );
}
