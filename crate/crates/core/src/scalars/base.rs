//! Constant fields: Q, Q(ζ_N), F_p and F_{p^m}.
//!
//! Elements are plain data ([`Coeff`]); all arithmetic goes through a
//! [`BaseField`] value which carries the modulus.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Primitive irreducible polynomials used as moduli for F_{p^m}, m > 1.
/// Coefficients low to high, monic. These are the Conway polynomials for
/// the listed (p, m); tests check irreducibility and primitivity.
pub const FINITE_FIELD_MODULI: &[(u64, u32, &[u64])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 2, &[3, 6, 1]),
    (11, 2, &[2, 7, 1]),
    (13, 2, &[2, 12, 1]),
];

/// A constant-field element in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Rat(BigRational),
    /// Coefficients of a polynomial in ζ_N of degree < φ(N), low to high.
    Cyc(Vec<BigRational>),
    /// Coefficients over F_p of a polynomial of degree < m, low to high.
    Ff(Vec<u64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseField {
    Rationals,
    Cyclotomic { n: u64, modulus: Vec<BigRational> },
    Finite { p: u64, m: u32, modulus: Vec<u64> },
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mod_pow(mut b: u64, mut e: u128, p: u64) -> u64 {
    let mut r = 1u64 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn smallest_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, ((p - 1) / q) as u128, p) != 1))
        .expect("every prime field has a primitive root")
}

/// Integer coefficients of the N-th cyclotomic polynomial, low to high.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num: Vec<BigInt> = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_polynomial(d);
            num = exact_monic_div(&num, &phi_d);
        }
    }
    num
}

fn exact_monic_div(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = r[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[i + j] -= &c * bj;
        }
        q[i] = c;
    }
    debug_assert!(r.iter().all(|x| x.is_zero()));
    q
}

fn trim_rat(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

/// Dense polynomial division over Q: returns (quotient, remainder).
fn rat_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r = a.to_vec();
    trim_rat(&mut r);
    let mut b = b.to_vec();
    trim_rat(&mut b);
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![BigRational::zero(); r.len() - db];
    let lb = b[db].clone();
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lb;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            let t = &c * bj;
            r[i + j] -= t;
        }
        q[i] = c;
    }
    trim_rat(&mut r);
    trim_rat(&mut q);
    (q, r)
}

fn rat_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn rat_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out: Vec<BigRational> = (0..n)
        .map(|i| {
            a.get(i).cloned().unwrap_or_else(BigRational::zero)
                - b.get(i).cloned().unwrap_or_else(BigRational::zero)
        })
        .collect();
    trim_rat(&mut out);
    out
}

impl BaseField {
    pub fn rationals() -> Self {
        BaseField::Rationals
    }

    pub fn cyclotomic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDescriptor("cyclotomic order must be >= 1".into()));
        }
        let modulus = cyclotomic_polynomial(n)
            .into_iter()
            .map(BigRational::from_integer)
            .collect();
        Ok(BaseField::Cyclotomic { n, modulus })
    }

    pub fn finite(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidDescriptor(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidDescriptor("extension degree must be >= 1".into()));
        }
        if m == 1 {
            let g = smallest_primitive_root(p);
            return Ok(BaseField::Finite { p, m, modulus: vec![(p - g) % p, 1] });
        }
        let modulus = FINITE_FIELD_MODULI
            .iter()
            .find(|(pp, mm, _)| *pp == p && *mm == m)
            .map(|(_, _, c)| c.to_vec())
            .ok_or_else(|| {
                Error::UnsupportedField(format!("no tabulated modulus for F_{{{p}^{m}}}"))
            })?;
        Ok(BaseField::Finite { p, m, modulus })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            BaseField::Rationals | BaseField::Cyclotomic { .. } => 0,
            BaseField::Finite { p, .. } => *p,
        }
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u128> {
        match self {
            BaseField::Finite { p, m, .. } => (*p as u128).checked_pow(*m),
            _ => None,
        }
    }

    fn cyc_degree(&self) -> usize {
        match self {
            BaseField::Cyclotomic { modulus, .. } => modulus.len() - 1,
            _ => 0,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            BaseField::Rationals => Coeff::Rat(BigRational::zero()),
            BaseField::Cyclotomic { .. } => Coeff::Cyc(vec![BigRational::zero(); self.cyc_degree()]),
            BaseField::Finite { m, .. } => Coeff::Ff(vec![0; *m as usize]),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Coeff {
        match self {
            BaseField::Rationals => Coeff::Rat(BigRational::from_integer(v.clone())),
            BaseField::Cyclotomic { .. } => {
                let mut c = vec![BigRational::zero(); self.cyc_degree()];
                c[0] = BigRational::from_integer(v.clone());
                Coeff::Cyc(c)
            }
            BaseField::Finite { p, m, .. } => {
                let r = v.mod_floor(&BigInt::from(*p)).to_u64().unwrap();
                let mut c = vec![0; *m as usize];
                c[0] = r;
                Coeff::Ff(c)
            }
        }
    }

    pub fn from_rational(&self, v: &BigRational) -> Result<Coeff> {
        match self {
            BaseField::Rationals => Ok(Coeff::Rat(v.clone())),
            BaseField::Cyclotomic { .. } => {
                let mut c = vec![BigRational::zero(); self.cyc_degree()];
                c[0] = v.clone();
                Ok(Coeff::Cyc(c))
            }
            BaseField::Finite { .. } => {
                let n = self.from_bigint(v.numer());
                let d = self.from_bigint(v.denom());
                let di = self.inv(&d).ok_or(Error::DivisionByZero)?;
                Ok(self.mul(&n, &di))
            }
        }
    }

    /// Builds an element of F_{p^m} from its coordinate vector (low to high).
    pub fn from_ff_coords(&self, coords: &[u64]) -> Result<Coeff> {
        match self {
            BaseField::Finite { p, m, .. } => {
                if coords.len() > *m as usize {
                    return Err(Error::InvalidParameter(format!(
                        "{} coordinates for a degree-{m} field",
                        coords.len()
                    )));
                }
                let mut c = vec![0; *m as usize];
                for (i, x) in coords.iter().enumerate() {
                    c[i] = x % p;
                }
                Ok(Coeff::Ff(c))
            }
            _ => Err(Error::UnsupportedField("not a finite field".into())),
        }
    }

    /// Builds an element of Q(ζ_N) from a polynomial in ζ_N, reducing mod Φ_N.
    pub fn from_cyc_coords(&self, coords: &[BigRational]) -> Result<Coeff> {
        match self {
            BaseField::Cyclotomic { modulus, .. } => {
                let (_, mut r) = rat_divrem(coords, modulus);
                r.resize(self.cyc_degree(), BigRational::zero());
                Ok(Coeff::Cyc(r))
            }
            BaseField::Rationals if coords.len() <= 1 => {
                Ok(Coeff::Rat(coords.first().cloned().unwrap_or_else(BigRational::zero)))
            }
            _ => Err(Error::UnsupportedField("not a cyclotomic field".into())),
        }
    }

    pub fn is_zero(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Rat(r) => r.is_zero(),
            Coeff::Cyc(v) => v.iter().all(|x| x.is_zero()),
            Coeff::Ff(v) => v.iter().all(|&x| x == 0),
        }
    }

    pub fn is_one(&self, a: &Coeff) -> bool {
        *a == self.one()
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (_, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x + y),
            (_, Coeff::Cyc(x), Coeff::Cyc(y)) => Coeff::Cyc(x.iter().zip(y).map(|(s, t)| s + t).collect()),
            (BaseField::Finite { p, .. }, Coeff::Ff(x), Coeff::Ff(y)) => {
                Coeff::Ff(x.iter().zip(y).map(|(s, t)| (s + t) % p).collect())
            }
            _ => panic!("coefficient kinds do not match the base field"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (_, Coeff::Rat(x)) => Coeff::Rat(-x),
            (_, Coeff::Cyc(x)) => Coeff::Cyc(x.iter().map(|s| -s).collect()),
            (BaseField::Finite { p, .. }, Coeff::Ff(x)) => {
                Coeff::Ff(x.iter().map(|&s| (p - s) % p).collect())
            }
            _ => panic!("coefficient kinds do not match the base field"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (_, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(x * y),
            (BaseField::Cyclotomic { modulus, .. }, Coeff::Cyc(x), Coeff::Cyc(y)) => {
                let prod = rat_mul(x, y);
                let (_, mut r) = rat_divrem(&prod, modulus);
                r.resize(modulus.len() - 1, BigRational::zero());
                Coeff::Cyc(r)
            }
            (BaseField::Finite { p, m, modulus }, Coeff::Ff(x), Coeff::Ff(y)) => {
                let m = *m as usize;
                if m == 1 {
                    return Coeff::Ff(vec![((x[0] as u128 * y[0] as u128) % *p as u128) as u64]);
                }
                let p128 = *p as u128;
                let mut prod = vec![0u128; 2 * m - 1];
                for (i, &s) in x.iter().enumerate() {
                    if s == 0 {
                        continue;
                    }
                    for (j, &t) in y.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + s as u128 * t as u128) % p128;
                    }
                }
                for i in (m..prod.len()).rev() {
                    let c = prod[i];
                    if c == 0 {
                        continue;
                    }
                    // x^i = x^{i-m} * (x^m) and x^m = -(modulus lower terms)
                    for (j, &mj) in modulus.iter().take(m).enumerate() {
                        let sub = (c * mj as u128) % p128;
                        prod[i - m + j] = (prod[i - m + j] + p128 - sub) % p128;
                    }
                    prod[i] = 0;
                }
                Coeff::Ff(prod[..m].iter().map(|&v| v as u64).collect())
            }
            _ => panic!("coefficient kinds do not match the base field"),
        }
    }

    pub fn pow(&self, a: &Coeff, mut e: u128) -> Coeff {
        let mut result = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        result
    }

    pub fn inv(&self, a: &Coeff) -> Option<Coeff> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (_, Coeff::Rat(x)) => Some(Coeff::Rat(x.recip())),
            (BaseField::Cyclotomic { modulus, .. }, Coeff::Cyc(x)) => {
                // extended Euclid: s*x + t*Φ = g (a nonzero constant)
                let mut r0 = modulus.clone();
                let mut r1 = x.clone();
                trim_rat(&mut r1);
                let mut s0: Vec<BigRational> = vec![];
                let mut s1: Vec<BigRational> = vec![BigRational::one()];
                while r1.len() > 1 {
                    let (q, r) = rat_divrem(&r0, &r1);
                    let s2 = rat_sub(&s0, &rat_mul(&q, &s1));
                    r0 = r1;
                    r1 = r;
                    s0 = s1;
                    s1 = s2;
                }
                let g = r1[0].clone();
                let mut inv: Vec<BigRational> = s1.iter().map(|c| c / &g).collect();
                let (_, r) = rat_divrem(&inv, modulus);
                inv = r;
                inv.resize(modulus.len() - 1, BigRational::zero());
                Some(Coeff::Cyc(inv))
            }
            (BaseField::Finite { .. }, Coeff::Ff(_)) => {
                let q = self.order().expect("finite");
                Some(self.pow(a, q - 2))
            }
            _ => panic!("coefficient kinds do not match the base field"),
        }
    }

    /// Inverse Frobenius (p-th root) on a perfect finite field.
    pub fn frobenius_root(&self, a: &Coeff) -> Option<Coeff> {
        match self {
            BaseField::Finite { p, m, .. } => Some(self.pow(a, (*p as u128).pow(*m - 1))),
            _ => None,
        }
    }

    /// The rational value of a constant if it lies in Q.
    pub fn as_rational(&self, a: &Coeff) -> Option<BigRational> {
        match a {
            Coeff::Rat(r) => Some(r.clone()),
            Coeff::Cyc(v) => {
                if v.iter().skip(1).all(|x| x.is_zero()) {
                    Some(v[0].clone())
                } else {
                    None
                }
            }
            Coeff::Ff(_) => None,
        }
    }

    /// The generator ζ_N of a cyclotomic field (-1 for Q), or the polynomial
    /// generator of F_{p^m}, which is primitive since the moduli are.
    pub fn generator(&self) -> Coeff {
        match self {
            BaseField::Rationals => self.from_i64(-1),
            BaseField::Cyclotomic { n, modulus } => {
                if modulus.len() == 2 {
                    // Φ_1 = x - 1, Φ_2 = x + 1
                    return self.from_i64(if *n == 1 { 1 } else { -1 });
                }
                let mut c = vec![BigRational::zero(); modulus.len() - 1];
                c[1] = BigRational::one();
                Coeff::Cyc(c)
            }
            BaseField::Finite { p, m, modulus } => {
                if *m == 1 {
                    return Coeff::Ff(vec![(p - modulus[0]) % p]);
                }
                let mut c = vec![0; *m as usize];
                c[1] = 1;
                Coeff::Ff(c)
            }
        }
    }

    /// Order of the full group of roots of unity of the constant field:
    /// 2 for Q, lcm(2, N) for Q(ζ_N), q - 1 for F_q.
    pub fn roots_of_unity_order(&self) -> u64 {
        match self {
            BaseField::Rationals => 2,
            BaseField::Cyclotomic { n, .. } => {
                if n % 2 == 0 {
                    *n
                } else {
                    2 * n
                }
            }
            BaseField::Finite { .. } => (self.order().unwrap() - 1) as u64,
        }
    }

    /// A primitive d-th root of unity, or `RootOfUnityMissing`.
    ///
    /// In Q(ζ_N) with d | N this is exactly ζ_N^{N/d}.
    pub fn primitive_root_of_unity(&self, d: u64, field_name: &str) -> Result<Coeff> {
        let missing = || Error::RootOfUnityMissing { order: d, field: field_name.to_string() };
        if d == 0 || !self.roots_of_unity_order().is_multiple_of(d) {
            return Err(missing());
        }
        match self {
            BaseField::Rationals => Ok(if d == 1 { self.one() } else { self.from_i64(-1) }),
            BaseField::Cyclotomic { n, .. } => {
                let z = self.generator();
                if n % d == 0 {
                    Ok(self.pow(&z, (n / d) as u128))
                } else {
                    let e = d / 2;
                    Ok(self.neg(&self.pow(&z, (n / e) as u128)))
                }
            }
            BaseField::Finite { .. } => {
                let q1 = self.roots_of_unity_order();
                Ok(self.pow(&self.generator(), (q1 / d) as u128))
            }
        }
    }

    /// Discrete logarithm of a root of unity as a reduced fraction k/M of
    /// Q/Z, for the embedding sending ζ_N to 1/N, -1 to 1/2, and the
    /// primitive element of F_q to 1/(q-1). `None` if `a` is not a root of
    /// unity of the constant field.
    pub fn root_of_unity_log(&self, a: &Coeff) -> Option<(u64, u64)> {
        let reduce = |k: u64, m: u64| {
            let g = k.gcd(&m);
            (k / g, m / g)
        };
        match self {
            BaseField::Rationals => {
                if self.is_one(a) {
                    Some((0, 1))
                } else if *a == self.from_i64(-1) {
                    Some((1, 2))
                } else {
                    None
                }
            }
            BaseField::Cyclotomic { n, .. } => {
                let z = self.generator();
                let neg_a = self.neg(a);
                let mut cur = self.one();
                for j in 0..*n {
                    if cur == *a {
                        return Some(reduce(j, *n));
                    }
                    if cur == neg_a {
                        let m = 2 * n;
                        return Some(reduce((2 * j + n) % m, m));
                    }
                    cur = self.mul(&cur, &z);
                }
                None
            }
            BaseField::Finite { .. } => {
                let order = self.roots_of_unity_order();
                let g = self.generator();
                let mut cur = self.one();
                for k in 0..order {
                    if cur == *a {
                        return Some(reduce(k, order));
                    }
                    cur = self.mul(&cur, &g);
                }
                None
            }
        }
    }

    /// Enumerates a finite field in the order of its base-p coordinate index.
    pub fn element_at(&self, mut index: u128) -> Coeff {
        match self {
            BaseField::Finite { p, m, .. } => {
                let mut c = vec![0; *m as usize];
                for slot in c.iter_mut() {
                    *slot = (index % *p as u128) as u64;
                    index /= *p as u128;
                }
                Coeff::Ff(c)
            }
            _ => panic!("element_at on an infinite field"),
        }
    }

    pub fn index_of(&self, a: &Coeff) -> Option<u128> {
        match (self, a) {
            (BaseField::Finite { p, .. }, Coeff::Ff(c)) => {
                Some(c.iter().rev().fold(0u128, |acc, &d| acc * *p as u128 + d as u128))
            }
            _ => None,
        }
    }

    /// Deterministic total order used when picking "smallest" elements.
    pub fn cmp_coeff(&self, a: &Coeff, b: &Coeff) -> std::cmp::Ordering {
        match (a, b) {
            (Coeff::Ff(_), Coeff::Ff(_)) => self.index_of(a).cmp(&self.index_of(b)),
            (Coeff::Rat(x), Coeff::Rat(y)) => x.cmp(y),
            (Coeff::Cyc(x), Coeff::Cyc(y)) => x.cmp(y),
            _ => std::cmp::Ordering::Equal,
        }
    }

    /// q-th root of a constant if it exists and is computable.
    ///
    /// Exact for Q (via integer roots), F_q (via enumeration or Frobenius),
    /// and for rational elements of Q(ζ_N); `None` means "not a q-th power"
    /// for those cases. Non-rational cyclotomic constants return `None`.
    pub fn nth_root(&self, a: &Coeff, q: u32) -> Option<Coeff> {
        if self.is_zero(a) {
            return Some(a.clone());
        }
        match self {
            BaseField::Finite { p, .. } => {
                if q as u64 == *p {
                    return self.frobenius_root(a);
                }
                let size = self.order().unwrap();
                (0..size).map(|i| self.element_at(i)).find(|c| self.pow(c, q as u128) == *a)
            }
            _ => {
                let r = self.as_rational(a)?;
                let sign_neg = r.is_negative();
                if sign_neg && q.is_multiple_of(2) {
                    return None;
                }
                let n = integer_nth_root(&r.numer().abs(), q)?;
                let d = integer_nth_root(r.denom(), q)?;
                let mut root = BigRational::new(n, d);
                if sign_neg {
                    root = -root;
                }
                self.from_rational(&root).ok()
            }
        }
    }

    pub fn describe(&self, a: &Coeff) -> String {
        match a {
            Coeff::Rat(r) => r.to_string(),
            Coeff::Cyc(v) => poly_string(v.iter().map(|c| c.to_string()).collect(), "z", |c| c == "0"),
            Coeff::Ff(v) => {
                if v.len() == 1 {
                    v[0].to_string()
                } else {
                    poly_string(v.iter().map(|c| c.to_string()).collect(), "t", |c| c == "0")
                }
            }
        }
    }
}

fn poly_string(coeffs: Vec<String>, var: &str, is_zero: impl Fn(&str) -> bool) -> String {
    let mut parts = Vec::new();
    for (i, c) in coeffs.iter().enumerate() {
        if is_zero(c) {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        if mono.is_empty() {
            parts.push(c.clone());
        } else if c == "1" {
            parts.push(mono);
        } else {
            parts.push(format!("{c}*{mono}"));
        }
    }
    if parts.is_empty() {
        "0".into()
    } else if parts.len() == 1 {
        parts.remove(0)
    } else {
        format!("({})", parts.join(" + "))
    }
}

/// Exact q-th root of a non-negative integer.
pub(crate) fn integer_nth_root(n: &BigInt, q: u32) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.nth_root(q);
    if num_traits::pow(r.clone(), q as usize) == *n {
        Some(r)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_irreducible(p: u64, modulus: &[u64]) -> bool {
        // no monic factor of degree 1..=deg/2, by trial division over F_p
        let deg = modulus.len() - 1;
        for d in 1..=deg / 2 {
            let count = p.pow(d as u32);
            for idx in 0..count {
                let mut f = vec![0u64; d + 1];
                let mut t = idx;
                for slot in f.iter_mut().take(d) {
                    *slot = t % p;
                    t /= p;
                }
                f[d] = 1;
                let mut r = modulus.to_vec();
                for i in (0..=deg - d).rev() {
                    let c = r[i + d];
                    if c == 0 {
                        continue;
                    }
                    for j in 0..=d {
                        r[i + j] = (r[i + j] + p * p - c * f[j] % p) % p;
                    }
                }
                if r.iter().all(|&x| x == 0) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn tabulated_moduli_are_irreducible_and_primitive() {
        for (p, m, modulus) in FINITE_FIELD_MODULI {
            assert!(naive_irreducible(*p, modulus), "F_{p}^{m} modulus reducible");
            let f = BaseField::finite(*p, *m).unwrap();
            let q = f.order().unwrap();
            let g = f.generator();
            for r in prime_factors((q - 1) as u64) {
                assert!(!f.is_one(&f.pow(&g, (q - 1) / r as u128)), "F_{p}^{m} generator not primitive");
            }
            assert!(f.is_one(&f.pow(&g, q - 1)));
        }
    }

    #[test]
    fn cyclotomic_polynomials() {
        let c = |n| cyclotomic_polynomial(n).iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>();
        assert_eq!(c(1), vec![-1, 1]);
        assert_eq!(c(2), vec![1, 1]);
        assert_eq!(c(4), vec![1, 0, 1]);
        assert_eq!(c(6), vec![1, -1, 1]);
        assert_eq!(c(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn zeta4_squared_is_minus_one() {
        let f = BaseField::cyclotomic(4).unwrap();
        let z = f.generator();
        assert_eq!(f.mul(&z, &z), f.from_i64(-1));
    }

    #[test]
    fn cyclotomic_inverse() {
        let f = BaseField::cyclotomic(5).unwrap();
        let z = f.generator();
        let x = f.add(&f.one(), &z);
        let xi = f.inv(&x).unwrap();
        assert!(f.is_one(&f.mul(&x, &xi)));
    }

    #[test]
    fn roots_of_unity_logs() {
        let f = BaseField::cyclotomic(3).unwrap();
        let z = f.generator();
        assert_eq!(f.root_of_unity_log(&z), Some((1, 3)));
        assert_eq!(f.root_of_unity_log(&f.mul(&z, &z)), Some((2, 3)));
        assert!(f.primitive_root_of_unity(4, "Q(z3)").is_err());
        let q = BaseField::rationals();
        assert_eq!(q.root_of_unity_log(&q.from_i64(-1)), Some((1, 2)));
        assert_eq!(q.root_of_unity_log(&q.from_i64(2)), None);
    }

    #[test]
    fn prime_field_primitive_roots_match_conway_degree_one() {
        // Conway polynomials: F_2: x+1, F_3: x+1, F_5: x+3, F_7: x+4
        for (p, c0) in [(2u64, 1u64), (3, 1), (5, 3), (7, 4)] {
            match BaseField::finite(p, 1).unwrap() {
                BaseField::Finite { modulus, .. } => assert_eq!(modulus, vec![c0, 1]),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn nth_roots() {
        let q = BaseField::rationals();
        let c = q.from_rational(&BigRational::new(8.into(), 27.into())).unwrap();
        assert_eq!(q.nth_root(&c, 3), Some(q.from_rational(&BigRational::new(2.into(), 3.into())).unwrap()));
        assert_eq!(q.nth_root(&q.from_i64(2), 2), None);
        assert_eq!(q.nth_root(&q.from_i64(-8), 3), Some(q.from_i64(-2)));
        let f4 = BaseField::finite(2, 2).unwrap();
        let g = f4.generator();
        let r = f4.nth_root(&g, 2).unwrap();
        assert_eq!(f4.mul(&r, &r), g);
    }
}
