use anisobound_core::quadform::{
    arf_invariant_class, arf_normal_form, arf_target, diagonalize, pfister_build, pfister_refute_point,
    random_pfister_candidate, subset_coefficient, QuadraticForm, ARF_FIELD_CAP,
};
use anisobound_core::{Field, FieldDescriptor, FieldMatrix, FieldRef};
use proptest::prelude::*;
use rand::SeedableRng;

fn form(f: &FieldRef, dim: usize, entries: &[i64]) -> QuadraticForm {
    let rows: Vec<Vec<_>> =
        (0..dim).map(|i| (0..dim).map(|j| if j >= i { f.from_i64(entries[i * dim + j]) } else { f.zero() }).collect()).collect();
    QuadraticForm::new(f, rows).unwrap()
}

fn square(f: &FieldRef, dim: usize, entries: &[i64]) -> FieldMatrix {
    let rows: Vec<Vec<_>> = (0..dim).map(|i| (0..dim).map(|j| f.from_i64(entries[i * dim + j])).collect()).collect();
    FieldMatrix::from_rows(f, rows).unwrap()
}

fn field(d: FieldDescriptor) -> FieldRef {
    Field::new(&d).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gram_matrix_shape(dim in 1usize..=6, e in proptest::collection::vec(-5i64..=5, 36), p in prop::sample::select(vec![0u64, 2, 3])) {
        let f = if p == 0 { Field::rationals() } else { field(FieldDescriptor::PrimeField(p)) };
        let q = form(&f, dim, &e);
        let g = q.gram();
        prop_assert_eq!(g.transpose(), g.clone());
        if p == 2 {
            prop_assert!((0..dim).all(|i| g[(i, i)].is_zero()));
        }
        // B(x, x) = 2 q(x)
        let x: Vec<_> = (0..dim).map(|i| f.from_i64(e[i] - e[35 - i])).collect();
        prop_assert_eq!(q.bilinear(&x, &x), &q.eval(&x) + &q.eval(&x));
    }

    #[test]
    fn diagonalization(dim in 1usize..=8, e in proptest::collection::vec(-4i64..=4, 64), p in prop::sample::select(vec![0u64, 7])) {
        let f = if p == 0 { Field::rationals() } else { field(FieldDescriptor::PrimeField(p)) };
        let q = form(&f, dim, &e);
        if let Ok(d) = diagonalize(&q) {
            prop_assert!(!d.change.det().is_zero());
            prop_assert_eq!(q.transform(&d.change).unwrap(), QuadraticForm::diagonal(&f, &d.diagonal).unwrap());
            prop_assert_eq!(q.is_nondegenerate(), d.diagonal.iter().all(|c| !c.is_zero()));
        }
    }

    #[test]
    fn arf_normal_form_is_an_equivalence(
        half in 1usize..=3,
        e in proptest::collection::vec(0i64..4, 36),
        c in proptest::collection::vec(0i64..4, 36),
        four in any::<bool>(),
    ) {
        let dim = 2 * half;
        let f = field(if four { FieldDescriptor::FiniteField { p: 2, m: 2 } } else { FieldDescriptor::PrimeField(2) });
        // spread the integer entries over all field elements
        let elems = f.elements(4).unwrap();
        let rows: Vec<Vec<_>> = (0..dim)
            .map(|i| (0..dim).map(|j| if j >= i { elems[e[i * dim + j] as usize % elems.len()].clone() } else { f.zero() }).collect())
            .collect();
        let q = QuadraticForm::new(&f, rows).unwrap();
        prop_assume!(q.is_nondegenerate());
        let nf = arf_normal_form(&q).unwrap();
        prop_assert!(!nf.change.det().is_zero());
        prop_assert_eq!(q.transform(&nf.change).unwrap(), arf_target(&f, dim, &nf.a).unwrap());
        let m = square(&f, dim, &c);
        if !m.det().is_zero() {
            let moved = arf_normal_form(&q.transform(&m).unwrap()).unwrap();
            prop_assert!(arf_invariant_class(&nf.a, &moved.a, ARF_FIELD_CAP).unwrap());
        }
    }

    #[test]
    fn pfister_points_are_refuted(k in 1usize..=4, seed in any::<u64>()) {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let pf = pfister_build(k).unwrap();
        let x = random_pfister_candidate(&mut rng, k, 3).unwrap();
        let r = pfister_refute_point(k, &x).unwrap();
        prop_assert!(!r.value.is_zero());
        prop_assert_eq!(r.value, pf.form.eval(&x));
        prop_assert_eq!(r.trace.len(), k);
        let full = subset_coefficient(&pf.field, (1 << k) - 1);
        prop_assert_eq!(pf.form.transform(&pf.tau.matrix).unwrap(), pf.form.scale(&full));
    }
}
