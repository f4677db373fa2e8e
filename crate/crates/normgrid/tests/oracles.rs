//! Brute-force and Monte Carlo oracles for the optimizer-backed estimates.
//!
//! Each test computes its expected value with an independent method (dense
//! random sweeps, closed forms, dense quadrature) and compares the library's
//! answer against it.

use nalgebra::DVector;
use rand::Rng as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use normgrid::subspace::trig_subspace_with_grid;
use normgrid::*;

fn normal_vec(n: usize, rng: &mut ChaCha8Rng) -> DVector<f64> {
    DVector::from_iterator(n, (0..n).map(|_| StandardNormal.sample(rng)))
}

#[test]
fn dense_quadrature_confirms_the_quartic_norm() {
    // Simpson oracle for the integral of (sqrt2 cos x)^4 over the uniform torus.
    let steps = 200_000;
    let h = 2.0 * std::f64::consts::PI / steps as f64;
    let f = |x: f64| (2f64.sqrt() * x.cos()).powi(4);
    let mut integral = 0.0;
    for i in 0..steps {
        let a = i as f64 * h;
        integral += h / 6.0 * (f(a) + 4.0 * f(a + 0.5 * h) + f(a + h));
    }
    let mean = integral / (2.0 * std::f64::consts::PI);
    assert!((mean - 1.5).abs() < 1e-12, "oracle mean {mean}");

    let s = build_trig_subspace(1);
    let cos = FunctionCoeffs(vec![0.0, 1.0, 0.0]);
    assert!((s.lp_norm(&cos, 4.0) - mean.powf(0.25)).abs() < 1e-8);
}

#[test]
fn monte_carlo_mean_of_cos_vanishes() {
    let s = build_trig_subspace(1);
    let m = 100_000;
    let samples = sample_points(&s, m, 271);
    let mean: f64 = samples.points.iter().map(|&x| x.cos()).sum::<f64>() / m as f64;
    let stderr = (0.5f64 / m as f64).sqrt(); // Var[cos] = 1/2 under the uniform torus
    assert!(mean.abs() <= 3.0 * stderr, "mean {mean}, stderr {stderr}");
}

#[test]
fn nikolskii_q4_matches_a_million_direction_sweep() {
    let s = build_trig_subspace(2);
    let q = 4.0;
    let estimate = nikolskii_general(&s, q, 32, 7).unwrap();

    // Independent oracle: a 10^6-sample random-direction sweep of the same ratio.
    let n = s.dim();
    let values = s.grid_values();
    let weights = s.measure().grid_weights();
    let scale = (n as f64).powf(1.0 / q);
    let mut rng = ChaCha8Rng::seed_from_u64(999);
    let mut best = 0.0f64;
    for _ in 0..1_000_000 {
        let c = normal_vec(n, &mut rng);
        let v = values * &c;
        let mut sup = 0.0f64;
        let mut qsum = 0.0f64;
        for (g, &x) in v.iter().enumerate() {
            let a = x.abs();
            if a > sup {
                sup = a;
            }
            qsum += weights[g] * a.powi(4);
        }
        best = best.max(sup / (scale * qsum.powf(1.0 / q)));
    }
    assert!(
        (estimate.constant - best).abs() <= 1e-4,
        "multistart {} vs sweep {}",
        estimate.constant,
        best
    );
    // The ascent-refined value can only sit above any sampled ratio.
    assert!(estimate.constant >= best - 1e-4);
}

#[test]
fn vp_lower_bound_matches_a_dense_direction_sweep_at_p3() {
    let s = build_trig_subspace(1);
    let p = 3.0;
    let m = 10_000;
    let samples = sample_points(&s, m, 5);
    let report = vp_lower_bound(&s, &samples, p, 16, 77).unwrap();
    assert!(report.value <= 0.2, "V_3 lower bound {}", report.value);

    // Oracle: 10^5 random directions, normalized to the grid L^p sphere.
    let n = s.dim();
    let grid = s.grid_values();
    let gw = s.measure().grid_weights();
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    let mut best = 0.0f64;
    for _ in 0..100_000 {
        let c = normal_vec(n, &mut rng);
        let u = grid * &c;
        let norm: f64 = u
            .iter()
            .zip(gw)
            .map(|(&x, &w)| w * x.abs().powi(3))
            .sum::<f64>()
            .powf(1.0 / p);
        if norm == 0.0 {
            continue;
        }
        let cn = c / norm;
        let v = &samples.eval * &cn;
        let empirical: f64 = v.iter().map(|&x| x.abs().powi(3)).sum::<f64>() / m as f64;
        let un = grid * &cn;
        let truth: f64 = un.iter().zip(gw).map(|(&x, &w)| w * x.abs().powi(3)).sum();
        best = best.max((empirical - truth).abs());
    }
    assert!(
        report.value >= best - 2e-2 && (report.value - best).abs() <= 2e-2,
        "optimizer {} vs sweep {}",
        report.value,
        best
    );
}

#[test]
fn symmetrization_rademacher_sup_equals_kernel_at_one_point() {
    // Closed form at m = 1, p = 2: sup over the ball of |eps |f(X)|^2| is the
    // Christoffel-type kernel sum at the point.
    let s = build_trig_subspace(2);
    let samples = sample_points(&s, 1, 31);
    let x = samples.points[0];
    let kernel: f64 = s.eval_all(x).norm_squared();
    let check = symmetrization_check(&s, 2.0, 1, 60, 4, 11).unwrap();
    // Every trial's sup equals the kernel value at its own sample point, and
    // the kernel is identically N on the torus.
    assert!((kernel - s.dim() as f64).abs() < 1e-9);
    assert!(
        (check.rhs / 2.0 - s.dim() as f64).abs() < 1e-6,
        "rhs/2 = {}",
        check.rhs / 2.0
    );
    let _ = x;
}

#[test]
fn v2_mean_decays_with_the_sample_count() {
    // Law-of-large-numbers trend: quadrupling m roughly halves E[V_2].
    let s = build_trig_subspace(2);
    let trials = 100;
    let mean_at = |m: usize, seed: u64| -> f64 {
        let mut total = 0.0;
        for k in 0..trials {
            let samples = sample_points(&s, m, normgrid::rng::split_seed(seed, k));
            total += v2_exact(&s, &samples).value;
        }
        total / trials as f64
    };
    let coarse = mean_at(200, 1001);
    let fine = mean_at(800, 2002);
    let ratio = coarse / fine;
    assert!(
        (1.2..=3.5).contains(&ratio),
        "mean V2 at m=200 is {coarse}, at m=800 is {fine}, ratio {ratio}"
    );
}

#[test]
fn greedy_covering_is_sandwiched_by_independent_bounds() {
    // On a shared cloud: the packing estimate (halved min pairwise distance of
    // n_k + 1 points) lower-bounds the true cloud covering radius, and any
    // random n_k-center subset upper-bounds it. The greedy estimate must beat
    // every random cover and respect the packing bound.
    let s = build_trig_subspace(1);
    let samples = sample_points(&s, 50, 29);
    let n = s.dim();
    let grid = s.grid_values();
    let gw = s.measure().grid_weights();
    let mut rng = ChaCha8Rng::seed_from_u64(555);
    let cloud: Vec<Vec<f64>> = (0..2048)
        .map(|_| {
            let c = normal_vec(n, &mut rng);
            let u = grid * &c;
            let norm = u
                .iter()
                .zip(gw)
                .map(|(&x, &w)| w * x * x)
                .sum::<f64>()
                .sqrt();
            let cn = c / norm;
            (&samples.eval * cn).as_slice().to_vec()
        })
        .collect();
    let (covering, packing) = normgrid::entropy::covering_packing_from_cloud(&cloud, 3);

    let dist = |a: &[f64], b: &[f64]| -> f64 {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    let zero = vec![0.0; samples.len()];
    for k in 1..=3usize {
        let centers = 1usize << (1usize << k);
        let mut random_best = f64::INFINITY;
        for _ in 0..25 {
            let chosen: Vec<&Vec<f64>> = (0..centers)
                .map(|_| &cloud[rng.gen_range(0..cloud.len())])
                .collect();
            let radius = cloud
                .iter()
                .map(|p| {
                    chosen
                        .iter()
                        .map(|c| dist(p, c))
                        .fold(dist(p, &zero), f64::min)
                })
                .fold(0.0, f64::max);
            random_best = random_best.min(radius);
        }
        // Greedy is a 2-approximation of the optimal radius, hence of any
        // feasible cover; the packing bound sits below every feasible cover.
        assert!(
            covering[k] <= 2.0 * random_best,
            "k = {k}: greedy {} vs best random cover {random_best}",
            covering[k]
        );
        assert!(
            packing[k] <= random_best,
            "k = {k}: packing bound {} exceeds a feasible cover {random_best}",
            packing[k]
        );
    }
}

#[test]
fn nikolskii_constant_monotone_under_grid_refinement_for_skewed_spaces() {
    let coarse = trig_subspace_with_grid(3, 64);
    let fine = trig_subspace_with_grid(3, 128);
    let est_c = nikolskii_q2(&coarse);
    let est_f = nikolskii_q2(&fine);
    assert!(est_f.constant >= est_c.constant - 1e-9);
}
