use lnpc_core::indices::{
    beta_weight, build_index_set, c_weight, check_downward_closed, surrogate_constants, AdmissibleWeights, MultiIndex,
    WeightModel,
};
use proptest::prelude::*;

fn model() -> impl Strategy<Value = (f64, f64, f64, f64, u32)> {
    (0.8f64..2.5, 0.05f64..0.9, 0.2f64..2.0, 0.5f64..4.0, 0u32..3).prop_map(|(theta, dp, c0, xi, extra)| {
        let p = (1.0 / theta + dp).min(1.95);
        let m = (2.0 / p).ceil() as u32 + extra;
        (c0, theta, p, xi, m)
    })
}

fn multi_index() -> impl Strategy<Value = MultiIndex> {
    proptest::collection::vec(0u32..6, 1..6).prop_map(|v| MultiIndex::from_dense(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn built_sets_are_downward_closed((c0, theta, p, xi, m) in model(), n in 1usize..300) {
        let rho = AdmissibleWeights::from_model(WeightModel::power_law(c0, theta, p, xi, m).unwrap());
        let sw = surrogate_constants(m, &rho, 40).unwrap();
        let set = build_index_set(n, &sw, 64).unwrap();
        prop_assert_eq!(set.len(), n);
        prop_assert!(check_downward_closed(&set));
        prop_assert!(set.weights().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn surrogate_bounds_beta((c0, theta, p, xi, m) in model(), nu in multi_index()) {
        let rho = AdmissibleWeights::from_model(WeightModel::power_law(c0, theta, p, xi, m).unwrap());
        let sw = surrogate_constants(m, &rho, 40).unwrap();
        let c = sw.c(&nu).unwrap();
        let beta = beta_weight(&nu, m, &rho).unwrap();
        prop_assert!(sw.ln_c_beta() + c.ln() <= beta.ln() + 1e-9);
    }

    #[test]
    fn beta_is_multiplicative(m in 1u32..6, a in multi_index(), b in multi_index()) {
        let rho = AdmissibleWeights::explicit(vec![0.1, 0.2, 0.3, 0.5, 0.6, 0.7, 0.8, 0.9, 1.1, 1.4]).unwrap();
        // shift b past the support of a
        let shifted = MultiIndex::from_pairs(b.iter().map(|(j, e)| (j + 5, e))).unwrap();
        let joined = MultiIndex::from_pairs(a.iter().chain(shifted.iter())).unwrap();
        let lhs = beta_weight(&joined, m, &rho).unwrap();
        let rhs = beta_weight(&a, m, &rho).unwrap() * beta_weight(&shifted, m, &rho).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn c_is_monotone(m in 1u32..6, k in 0.01f64..10.0, nu in multi_index(), j in 1usize..6) {
        let rho = AdmissibleWeights::explicit(vec![0.1, 0.2, 0.3, 0.4, 0.8, 1.5]).unwrap();
        let base = c_weight(&nu, m, k, &rho).unwrap();
        let up = c_weight(&nu.incremented(j), m, k, &rho).unwrap();
        prop_assert!(up >= base);
    }
}
