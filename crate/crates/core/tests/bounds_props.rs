use anisobound_core::bounds::{
    bound_calculator, burnside_divisibility_check, minkowski_values, upsilon_m, BoundKind, BoundQuery,
    FiniteMatrixGroup,
};
use anisobound_core::{Field, FieldDescriptor, FieldMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn primes_upto(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| (2..p).all(|q| p % q != 0)).collect()
}

proptest! {
    #[test]
    fn torus_bound_is_upsilon_power(n in 1u64..=16) {
        let q = BoundQuery { n: Some(n), ..Default::default() };
        let b = bound_calculator(BoundKind::Torus, &q).unwrap();
        prop_assert_eq!(b.divisor_bound, num_traits::pow(minkowski_values(n).unwrap().upsilon_m, n as usize));
    }

    #[test]
    fn small_primes_divide_upsilon(n in 1u64..=40) {
        let um = upsilon_m(n);
        for p in primes_upto(n + 1) {
            prop_assert!(um.is_multiple_of(&BigInt::from(p)), "p = {} n = {}", p, n);
        }
        prop_assert!(upsilon_m(n + 1).is_multiple_of(&um));
    }

    #[test]
    fn severi_brauer_and_quadrics(n in 1u64..=20) {
        let q = BoundQuery { n: Some(n), ..Default::default() };
        prop_assert_eq!(bound_calculator(BoundKind::SeveriBrauer, &q).unwrap().divisor_bound, BigInt::from(n * n));
        let odd = bound_calculator(BoundKind::QuadricOdd, &q);
        prop_assert_eq!(odd.is_ok(), n >= 3 && n % 2 == 1);
        let even = bound_calculator(BoundKind::QuadricEven, &q);
        prop_assert_eq!(even.is_ok(), n >= 4 && n % 2 == 0);
    }
}

fn random_matrix(f: &anisobound_core::FieldRef, entries: &[i64]) -> FieldMatrix {
    FieldMatrix::from_i64(f, &[&entries[0..2], &entries[2..4]])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Subgroups of GL_2(F_p) from two random generators: whenever x^d = 1
    /// holds on the p'-elements, |Γ|′ divides d².
    #[test]
    fn burnside_conclusion_never_fails(
        p in prop::sample::select(vec![3u64, 5, 7]),
        a in proptest::collection::vec(0i64..7, 4),
        b in proptest::collection::vec(0i64..7, 4),
        d in 1u64..=48,
    ) {
        let f = Field::new(&FieldDescriptor::PrimeField(p)).unwrap();
        let gens: Vec<FieldMatrix> =
            [random_matrix(&f, &a), random_matrix(&f, &b)].into_iter().filter(|m| !m.det().is_zero()).collect();
        prop_assume!(!gens.is_empty());
        let g = FiniteMatrixGroup::generate(&gens, "random", 100_000).unwrap();
        let r = burnside_divisibility_check(&g, d).unwrap();
        if r.hypothesis_holds() {
            prop_assert!(r.divides, "{:?}", r);
        }
        // with d the exponent of the p'-part the hypothesis always holds
        let e = g
            .elements()
            .iter()
            .map(|x| g.element_order(x))
            .filter(|o| o % p != 0)
            .fold(1u64, |acc, o| acc.lcm(&o));
        let r = burnside_divisibility_check(&g, e).unwrap();
        prop_assert!(r.hypothesis_holds() && r.divides);
    }
}
