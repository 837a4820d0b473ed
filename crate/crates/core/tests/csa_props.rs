use anisobound_core::csa::{reduced_norm, AlgebraElement, AlgebraSpec, SpecRef};
use anisobound_core::{FieldElement, FieldMatrix};
use proptest::prelude::*;

/// Sparse element with small integer coefficients, optionally times a or b.
fn element(spec: &SpecRef, terms: &[(usize, usize, i64, u8)]) -> AlgebraElement {
    let f = spec.field();
    let n = spec.degree();
    let list: Vec<((usize, usize), FieldElement)> = terms
        .iter()
        .map(|&(i, j, c, w)| {
            let mut c = f.from_i64(c);
            if f.nvars() > 0 && w % 3 > 0 {
                c = &c * &f.var((w % 3 - 1) as usize % f.nvars());
            }
            ((i % n, j % n), c)
        })
        .collect();
    AlgebraElement::from_terms(spec, &list).unwrap()
}

fn terms() -> impl Strategy<Value = Vec<(usize, usize, i64, u8)>> {
    proptest::collection::vec((0usize..5, 0usize..5, -3i64..=3, any::<u8>()), 1..4)
}

/// Left multiplication by x on the basis u^i v^j, as an n² × n² matrix.
fn left_matrix(x: &AlgebraElement) -> FieldMatrix {
    let spec = x.spec();
    let n = spec.degree();
    let mut m = FieldMatrix::zero(spec.field(), n * n, n * n);
    for s in 0..n * n {
        let y = x.try_mul(&AlgebraElement::monomial(spec, s / n, s % n)).unwrap();
        for t in 0..n * n {
            m[(t, s)] = y.coeff(t / n, t % n).clone();
        }
    }
    m
}

fn specs() -> Vec<SpecRef> {
    vec![
        AlgebraSpec::generic_symbol(2).unwrap(),
        AlgebraSpec::generic_symbol(3).unwrap(),
        AlgebraSpec::weyl(2).unwrap(),
        AlgebraSpec::weyl(3).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn multiplication_is_associative(idx in 0usize..4, a in terms(), b in terms(), c in terms()) {
        let spec = &specs()[idx];
        let (x, y, z) = (element(spec, &a), element(spec, &b), element(spec, &c));
        let lhs = x.try_mul(&y).unwrap().try_mul(&z).unwrap();
        let rhs = x.try_mul(&y.try_mul(&z).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let dist = x.try_mul(&y.try_add(&z).unwrap()).unwrap();
        prop_assert_eq!(dist, x.try_mul(&y).unwrap().try_add(&x.try_mul(&z).unwrap()).unwrap());
    }

    #[test]
    fn reduced_norm_is_multiplicative(idx in 0usize..2, a in terms(), b in terms()) {
        let spec = &specs()[idx];
        let (x, y) = (element(spec, &a), element(spec, &b));
        let nx = reduced_norm(&x).unwrap();
        let ny = reduced_norm(&y).unwrap();
        prop_assert_eq!(reduced_norm(&x.try_mul(&y).unwrap()).unwrap(), &nx * &ny);
        // Nrd(x)^n is the determinant of left multiplication
        let n = spec.degree() as i64;
        prop_assert_eq!(nx.pow(n).unwrap(), left_matrix(&x).det());
    }
}

#[test]
fn quaternion_norm_formula() {
    let spec = AlgebraSpec::generic_symbol(2).unwrap();
    let f = spec.field();
    let (a, b) = (f.var(0), f.var(1));
    let x = element(&spec, &[(0, 0, 2, 0), (1, 0, 3, 0), (0, 1, -1, 0), (1, 1, 5, 0)]);
    // 4 - 9a - b + 25ab
    let want = &(&(&f.from_i64(4) - &(&f.from_i64(9) * &a)) - &b) + &(&f.from_i64(25) * &(&a * &b));
    assert_eq!(reduced_norm(&x).unwrap(), want);
}
