//! Weighted discretization: sample from the Lewis density, reweight, and the
//! empirical p-th power sum becomes an unbiased estimate of the true norm.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use normgrid::measure::ReferenceMeasure;
use normgrid::rng::split_seed;
use normgrid::subspace::{orthonormalize, subspace_from_atom_values};
use normgrid::{change_of_density, v2_exact, FunctionCoeffs};

fn main() {
    // Skewed space: one heavy atom, N = 4 on 200 atoms.
    let mut rng = ChaCha8Rng::seed_from_u64(97);
    let mut values = DMatrix::from_fn(200, 4, |_, _| StandardNormal.sample(&mut rng));
    values.row_mut(0).scale_mut(20.0);
    let measure = ReferenceMeasure::atoms_uniform(200);
    let s = orthonormalize(&subspace_from_atom_values(measure, values).unwrap())
        .unwrap()
        .subspace;

    let p = 1.5;
    let cod = change_of_density(&s, p).unwrap();
    let f = FunctionCoeffs(vec![0.5, -1.0, 0.25, 0.8]);
    let truth = s.lp_norm(&f, p).powf(p);

    // Monte Carlo average of the weighted empirical sums.
    let trials = 2000;
    let m = 300;
    let mut mean = 0.0;
    for t in 0..trials {
        let samples = cod.draw_weighted_samples(m, split_seed(5, t));
        let v = &samples.eval * f.as_dvector();
        let sum: f64 = v
            .iter()
            .zip(&samples.weights)
            .map(|(&x, &l)| l * x.abs().powf(p))
            .sum();
        mean += sum / trials as f64;
    }
    println!("||f||_p^p = {truth:.8}");
    println!("mean weighted empirical sum over {trials} trials: {mean:.8}");

    // The weighted empirical Gram concentrates too (p = 2 route).
    let cod2 = change_of_density(&s, 2.0).unwrap();
    let samples = cod2.draw_weighted_samples(400, 9);
    println!(
        "weighted V_2 at m = 400: {:.4}",
        v2_exact(&s, &samples).value
    );
}
