//! Univariate polynomials over a field, minimal polynomials of elements
//! given by a relation, and the separability test gcd(f, f') = 1.

use super::field::{FieldElement, FieldRef};
use super::base::prime_factors;
use crate::error::{Error, Result};

/// Dense univariate polynomial, coefficients low to high, no trailing zeros.
#[derive(Clone, Debug)]
pub struct UPoly {
    pub field: FieldRef,
    pub coeffs: Vec<FieldElement>,
}

impl PartialEq for UPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.coeffs == other.coeffs
    }
}

impl UPoly {
    pub fn new(field: &FieldRef, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        UPoly { field: field.clone(), coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn monic(&self) -> UPoly {
        match self.leading() {
            None => self.clone(),
            Some(lc) => {
                let inv = lc.inv().unwrap();
                UPoly::new(&self.field, self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn derivative(&self) -> UPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * &self.field.from_i64(i as i64))
            .collect();
        UPoly::new(&self.field, coeffs)
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::new(&self.field, vec![]);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UPoly::new(&self.field, out)
    }

    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let mut r = self.coeffs.clone();
        let dd = d.coeffs.len() - 1;
        let inv = d.leading().unwrap().inv().unwrap();
        if r.len() <= dd {
            return (UPoly::new(&self.field, vec![]), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for i in (dd..r.len()).rev() {
            if r[i].is_zero() {
                continue;
            }
            let f = &r[i] * &inv;
            for (j, c) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = &r[i - dd + j] - &(&f * c);
            }
            q[i - dd] = f;
        }
        r.truncate(dd);
        (UPoly::new(&self.field, q), UPoly::new(&self.field, r))
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs.iter().rev().fold(self.field.zero(), |acc, c| &(&acc * x) + c)
    }
}

/// A polynomial relation satisfied by an algebraic element: the element is a
/// root of Σ coeffs[i] t^i.
#[derive(Clone, Debug)]
pub struct Relation {
    pub coeffs: Vec<FieldElement>,
}

impl Relation {
    /// The relation t^n = c.
    pub fn binomial(n: u32, c: &FieldElement) -> Self {
        let f = c.field();
        let mut coeffs = vec![f.zero(); n as usize + 1];
        coeffs[0] = c.neg();
        coeffs[n as usize] = f.one();
        Relation { coeffs }
    }

    /// The element c of the base field itself.
    pub fn constant(c: &FieldElement) -> Self {
        Relation { coeffs: vec![c.neg(), c.field().one()] }
    }
}

#[derive(Clone, Debug)]
pub struct MinimalPolynomial {
    pub poly: UPoly,
    pub separable: bool,
}

/// Minimal polynomial of an element described by `rel`.
///
/// Supported: linear relations, and binomials t^n - c whose irreducibility
/// is settled by Capelli's criterion (c is not a q-th power for primes
/// q | n, and c is not in -4K^4 when 4 | n). Anything else is `NotAlgebraic`:
/// a relation that is reducible does not pin down a single root.
pub fn minimal_polynomial(field: &FieldRef, rel: &Relation) -> Result<MinimalPolynomial> {
    let f = UPoly::new(field, rel.coeffs.clone());
    if f.degree() < 1 {
        return Err(Error::NotAlgebraic("relation must have positive degree".into()));
    }
    if rel.coeffs.iter().any(|c| !c.field().same_as(field)) {
        return Err(Error::NotAlgebraic("relation coefficients lie in a different field".into()));
    }
    let f = f.monic();
    let n = f.degree() as u32;
    if n == 1 {
        return Ok(MinimalPolynomial { poly: f, separable: true });
    }
    let is_binomial = f.coeffs[1..n as usize].iter().all(FieldElement::is_zero);
    if !is_binomial {
        return Err(Error::NotAlgebraic("only linear and binomial relations t^n - c are supported".into()));
    }
    let c = f.coeffs[0].neg();
    if c.is_zero() {
        return Err(Error::NotAlgebraic("t^n = 0 is reducible".into()));
    }
    for q in prime_factors(n as u64) {
        if c.nth_root(q as u32).is_some() {
            return Err(Error::NotAlgebraic(format!("t^{n} - ({c}) is reducible: the constant is a {q}-th power")));
        }
        if !root_test_is_exact(&c) {
            return Err(Error::NotAlgebraic(format!("cannot decide whether {c} is a {q}-th power")));
        }
    }
    if n.is_multiple_of(4) {
        let m = &c / &field.from_i64(-4);
        if field.characteristic() != 2 && m.nth_root(4).is_some() {
            return Err(Error::NotAlgebraic(format!("t^{n} - ({c}) is reducible by the -4 exception")));
        }
    }
    let separable = f.gcd(&f.derivative()).degree() == 0;
    Ok(MinimalPolynomial { poly: f, separable })
}

/// The power test is exact unless some coefficient is a non-rational
/// cyclotomic constant.
fn root_test_is_exact(c: &FieldElement) -> bool {
    let base = c.field().base();
    c.numerator()
        .terms()
        .chain(c.denominator().terms())
        .all(|(_, k)| base.as_rational(k).is_some() || base.characteristic() != 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{Field, FieldDescriptor};

    #[test]
    fn sqrt_x_char_two_inseparable() {
        let f = Field::new(&FieldDescriptor::function_field(FieldDescriptor::PrimeField(2), &["x"])).unwrap();
        let m = minimal_polynomial(&f, &Relation::binomial(2, &f.var(0))).unwrap();
        assert_eq!(m.poly.degree(), 2);
        assert!(!m.separable);
    }

    #[test]
    fn sqrt_x_char_zero_separable() {
        let f = Field::new(&FieldDescriptor::function_field(FieldDescriptor::Rationals, &["x"])).unwrap();
        let m = minimal_polynomial(&f, &Relation::binomial(2, &f.var(0))).unwrap();
        assert!(m.separable);
        assert_eq!(m.poly.coeffs[0], f.var(0).neg());
    }

    #[test]
    fn constants_and_reducible_relations() {
        let q = Field::rationals();
        let m = minimal_polynomial(&q, &Relation::constant(&q.from_i64(5))).unwrap();
        assert_eq!(m.poly.degree(), 1);
        assert!(m.separable);
        assert!(matches!(minimal_polynomial(&q, &Relation::binomial(2, &q.from_i64(4))), Err(Error::NotAlgebraic(_))));
        // t^4 + 4 = (t^2 + 2t + 2)(t^2 - 2t + 2)
        assert!(matches!(minimal_polynomial(&q, &Relation::binomial(4, &q.from_i64(-4))), Err(Error::NotAlgebraic(_))));
        let cubic = Relation { coeffs: vec![q.from_i64(1), q.from_i64(1), q.zero(), q.one()] };
        assert!(matches!(minimal_polynomial(&q, &cubic), Err(Error::NotAlgebraic(_))));
    }

    #[test]
    fn gcd_of_univariate() {
        let q = Field::rationals();
        let p = |v: &[i64]| UPoly::new(&q, v.iter().map(|&c| q.from_i64(c)).collect());
        // (t-1)(t-2) and (t-1)(t+3)
        let g = p(&[2, -3, 1]).gcd(&p(&[-3, 2, 1]));
        assert_eq!(g, p(&[-1, 1]));
    }
}
