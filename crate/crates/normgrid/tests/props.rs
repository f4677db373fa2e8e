//! Property tests for the module invariants.

use proptest::prelude::*;

use normgrid::entropy::covering_packing_from_cloud;
use normgrid::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lp_norm_is_homogeneous(
        coeffs in prop::collection::vec(-5.0f64..5.0, 3),
        t in prop_oneof![Just(-2.0f64), Just(0.5), Just(3.0)],
        p in 1.0f64..6.0,
    ) {
        let s = build_trig_subspace(1);
        let c = FunctionCoeffs(coeffs.clone());
        let scaled = FunctionCoeffs(coeffs.iter().map(|x| t * x).collect());
        let lhs = s.lp_norm(&scaled, p);
        let rhs = t.abs() * s.lp_norm(&c, p);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn lp_norm_is_monotone_in_p(
        coeffs in prop::collection::vec(-5.0f64..5.0, 5),
        p1 in 1.0f64..6.0,
        gap in 0.0f64..3.0,
    ) {
        let s = build_trig_subspace(2);
        let c = FunctionCoeffs(coeffs);
        prop_assert!(s.lp_norm(&c, p1) <= s.lp_norm(&c, p1 + gap) + 1e-10);
    }

    #[test]
    fn covering_estimates_are_monotone_and_sandwich_packing(
        cloud in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 4), 20..60),
    ) {
        let (covering, packing) = covering_packing_from_cloud(&cloud, 2);
        for k in 1..covering.len() {
            prop_assert!(covering[k] <= covering[k - 1] + 1e-15);
        }
        for k in 0..covering.len() {
            prop_assert!(packing[k] <= 2.0 * covering[k] + 1e-15);
        }
    }

    #[test]
    fn covering_estimates_are_scale_equivariant(
        cloud in prop::collection::vec(prop::collection::vec(-3.0f64..3.0, 3), 10..40),
        t in 0.01f64..100.0,
    ) {
        let (base, _) = covering_packing_from_cloud(&cloud, 2);
        let scaled_cloud: Vec<Vec<f64>> =
            cloud.iter().map(|v| v.iter().map(|x| t * x).collect()).collect();
        let (scaled, _) = covering_packing_from_cloud(&scaled_cloud, 2);
        for (a, b) in base.iter().zip(&scaled) {
            prop_assert!((t * a - b).abs() <= 1e-12 * (t * a).max(1.0));
        }
    }

    #[test]
    fn decay_fit_recovers_exact_profiles(w in 0.1f64..50.0, theta in 0.5f64..8.0) {
        let covering: Vec<f64> =
            (0..5).map(|k| w * (-(k as f64) / theta).exp2()).collect();
        let profile = EntropyProfile {
            k_max: 4,
            packing: covering.iter().map(|e| e / 2.0).collect(),
            covering,
            fitted: None,
            m: 0,
            seed: 0,
            candidate_count: 0,
        };
        let (w_hat, theta_hat) = fit_decay(&profile).unwrap();
        prop_assert!((w_hat - w).abs() <= 1e-9 * w.max(1.0));
        prop_assert!((theta_hat - theta).abs() <= 1e-9 * theta.max(1.0));
    }

    #[test]
    fn wilson_interval_is_ordered_and_contained(successes in 0usize..50, extra in 0usize..50) {
        let trials = successes + extra + 1;
        let (lo, hi) = discretize::wilson_interval(successes.min(trials), trials);
        prop_assert!((0.0..=1.0).contains(&lo));
        prop_assert!((0.0..=1.0).contains(&hi));
        prop_assert!(lo <= hi);
        let rate = successes.min(trials) as f64 / trials as f64;
        prop_assert!(lo <= rate + 1e-12 && rate <= hi + 1e-12);
    }

    #[test]
    fn v2_certificate_reproduces_the_value(m in 4usize..40, seed in 0u64..500) {
        let s = build_trig_subspace(1);
        let samples = sample_points(&s, m, seed);
        let report = v2_exact(&s, &samples);
        prop_assert!((report.reverify(&s, &samples) - report.value).abs() < 1e-8);
    }
}
