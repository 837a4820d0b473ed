use anisobound_core::bounds::upsilon_m;
use anisobound_core::torus::{norm_quotient_torus_of, FiniteGroup, TorusModel};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

/// Every group of order 2..=8 up to isomorphism, except the trivial one.
fn small_groups() -> Vec<FiniteGroup> {
    let c = FiniteGroup::cyclic;
    vec![
        c(2),
        c(3),
        c(4),
        FiniteGroup::direct_product(&c(2), &c(2)),
        c(5),
        c(6),
        FiniteGroup::symmetric3(),
        c(7),
        c(8),
        FiniteGroup::direct_product(&c(2), &c(4)),
        FiniteGroup::direct_product(&FiniteGroup::direct_product(&c(2), &c(2)), &c(2)),
        FiniteGroup::dihedral(4),
        FiniteGroup::quaternion(),
    ]
}

#[test]
fn norm_quotient_tori_are_anisotropic() {
    for g in small_groups() {
        let t = norm_quotient_torus_of(&g).unwrap();
        assert_eq!(t.rank(), g.order() - 1);
        assert!(t.is_anisotropic().unwrap(), "{}", g.label());
        let h1 = t.h1().unwrap();
        assert!(BigInt::from(t.theta_order()).is_multiple_of(&h1.exponent()), "{}: {}", g.label(), h1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn torsion_exponent_divides_theta(idx in 0usize..13, d in 2u64..=50) {
        let g = &small_groups()[idx];
        let t = norm_quotient_torus_of(g).unwrap();
        let r = t.torsion_points(d, None).unwrap();
        prop_assert!(r.divisibility_check);
        let theta = BigInt::from(t.theta_order());
        prop_assert!(theta.is_multiple_of(&r.group.exponent()));
        // the group order also divides |G|
        prop_assert!(BigInt::from(g.order()).is_multiple_of(&r.group.order().unwrap()));
        if t.rank() <= 3 {
            let bound = num_traits::pow(upsilon_m(t.rank() as u64), t.rank());
            prop_assert!(bound.is_multiple_of(&r.group.order().unwrap()));
        }
    }

    #[test]
    fn averaging_kills_invariant_cosets(idx in 0usize..4, d in 2u64..=12) {
        let tori = [
            TorusModel::nonsplit_rank_one(),
            norm_quotient_torus_of(&FiniteGroup::cyclic(2)).unwrap(),
            norm_quotient_torus_of(&FiniteGroup::cyclic(3)).unwrap(),
            norm_quotient_torus_of(&FiniteGroup::cyclic(4)).unwrap(),
        ];
        let t = &tori[idx];
        for v in t.invariant_elements_of_order(d, 1_000_000).unwrap() {
            let c = t.averaging_certificate(d, &v).unwrap();
            prop_assert!(c.is_valid());
            prop_assert!((t.theta_order() as u64).is_multiple_of(d));
        }
    }
}
