use anisobound_core::{Field, FieldDescriptor, FieldElement, FieldRef};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fields() -> Vec<FieldRef> {
    [
        FieldDescriptor::Rationals,
        FieldDescriptor::Cyclotomic(5),
        FieldDescriptor::PrimeField(7),
        FieldDescriptor::FiniteField { p: 2, m: 2 },
        FieldDescriptor::function_field(FieldDescriptor::Rationals, &["x", "y"]),
        FieldDescriptor::function_field(FieldDescriptor::PrimeField(3), &["t"]),
        FieldDescriptor::function_field(FieldDescriptor::FiniteField { p: 2, m: 2 }, &["s"]),
    ]
    .iter()
    .map(|d| Field::new(d).unwrap())
    .collect()
}

/// A polynomial in the field's generators (root of unity or variables).
fn random_poly(f: &FieldRef, rng: &mut ChaCha8Rng) -> FieldElement {
    let gens: Vec<FieldElement> = match f.descriptor() {
        FieldDescriptor::Cyclotomic(n) => vec![f.root_of_unity(*n).unwrap()],
        FieldDescriptor::FiniteField { .. } => f.elements(16).unwrap(),
        _ => (0..f.nvars()).map(|i| f.var(i)).collect(),
    };
    let mut acc = f.zero();
    for _ in 0..rng.gen_range(0..4) {
        let mut m = f.from_i64(rng.gen_range(-4..=4));
        for _ in 0..rng.gen_range(0..3) {
            if !gens.is_empty() {
                m = &m * &gens[rng.gen_range(0..gens.len())];
            }
        }
        acc = &acc + &m;
    }
    acc
}

fn random_element(f: &FieldRef, rng: &mut ChaCha8Rng) -> FieldElement {
    let num = random_poly(f, rng);
    let den = random_poly(f, rng);
    if den.is_zero() {
        num
    } else {
        num.try_div(&den).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for f in fields() {
            let (a, b, c) = (random_element(&f, &mut rng), random_element(&f, &mut rng), random_element(&f, &mut rng));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
            prop_assert_eq!(&a + &f.zero(), a.clone());
            if !a.is_zero() {
                prop_assert!((&a * &a.inv().unwrap()).is_one());
                prop_assert_eq!(b.try_div(&a).unwrap().try_mul(&a).unwrap(), b.clone());
            } else {
                prop_assert!(a.inv().is_err());
            }
        }
    }

    /// Equal fractions have identical stored numerator and denominator.
    #[test]
    fn canonical_form(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for f in fields() {
            let a = random_element(&f, &mut rng);
            let c = random_poly(&f, &mut rng);
            if c.is_zero() {
                continue;
            }
            let scaled = (&a * &c).try_div(&c).unwrap();
            prop_assert_eq!(scaled.numerator(), a.numerator());
            prop_assert_eq!(scaled.denominator(), a.denominator());
            let r = f.ring();
            let g = r.gcd(a.numerator(), a.denominator());
            prop_assert!(g.is_constant(), "gcd {:?}", g);
        }
    }

    #[test]
    fn frobenius_is_additive(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for f in fields().into_iter().filter(|f| f.characteristic() > 0) {
            let p = f.characteristic() as i64;
            let (a, b) = (random_element(&f, &mut rng), random_element(&f, &mut rng));
            let lhs = (&a + &b).pow(p).unwrap();
            let rhs = &a.pow(p).unwrap() + &b.pow(p).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
