use anisobound_core::pairing::{
    brute_force_isotropic_max, isotropic_subgroup, random_alternating_pairing, AlternatingPairing,
};
use num_integer::Integer;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pairing(seed: u64, max_order: u64) -> AlternatingPairing {
    random_alternating_pairing(&mut ChaCha8Rng::seed_from_u64(seed), max_order)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn random_pairings_are_valid(seed in any::<u64>()) {
        prop_assert!(pairing(seed, 256).validate().valid);
    }

    #[test]
    fn constructed_subgroup_is_isotropic_and_large(seed in any::<u64>()) {
        let p = pairing(seed, 256);
        let lam = isotropic_subgroup(&p).unwrap();
        prop_assert!(p.is_isotropic(&lam.generators));
        prop_assert_eq!(p.group().subgroup_order(&lam.generators), lam.order.clone());
        let sq = &lam.order * &lam.order;
        prop_assert!(sq.is_multiple_of(&p.group().order()));
    }

    #[test]
    fn constructed_subgroup_matches_exhaustive_maximum(seed in any::<u64>()) {
        let p = pairing(seed, 128);
        let lam = isotropic_subgroup(&p).unwrap();
        let best = brute_force_isotropic_max(&p, 4096).unwrap();
        prop_assert!(p.is_isotropic(&best.generators));
        prop_assert_eq!(p.group().subgroup_order(&best.generators), best.order.clone());
        prop_assert_eq!(lam.order, best.order);
    }
}
