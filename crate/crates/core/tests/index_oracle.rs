mod common;

use lnpc_core::indices::{build_index_set, surrogate_constants, AdmissibleWeights, SurrogateWeights, WeightModel};

fn check(sw: &SurrogateWeights, dims: usize, max_norm: u32, n: usize) {
    let (oracle, next_min) = common::brute_force(sw, dims, max_norm, n);
    assert!(next_min >= oracle[n - 1].1, "oracle window too small");
    let set = build_index_set(n, sw, dims).unwrap();
    for (i, (got, (want, c))) in set.members().iter().zip(&oracle).enumerate() {
        assert_eq!(got, want, "position {i}");
        assert!((set.weights()[i] - c).abs() <= 1e-12 * c);
    }
}

#[test]
fn power_law_matches_brute_force() {
    let rho = AdmissibleWeights::from_model(WeightModel::power_law(0.5, 2.0, 0.6, 1.0, 4).unwrap());
    let sw = surrogate_constants(4, &rho, 40).unwrap();
    check(&sw, 4, 10, 120);
}

#[test]
fn anisotropic_surrogate_matches_brute_force() {
    let rho = AdmissibleWeights::explicit(vec![0.5, 0.9, 1.2, 2.0]).unwrap();
    let sw = SurrogateWeights::from_parts(1.0, 2, rho, 4).unwrap();
    check(&sw, 4, 12, 150);
}

#[test]
fn isotropic_ties_follow_enumeration_order() {
    let rho = AdmissibleWeights::explicit(vec![0.1; 3]).unwrap();
    let sw = SurrogateWeights::from_parts(1.0, 1, rho, 3).unwrap();
    check(&sw, 3, 9, 60);
}
