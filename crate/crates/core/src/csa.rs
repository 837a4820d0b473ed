//! Symbol algebras (a,b)_n and the char-p algebra with v^p = x, u^p = y,
//! vu - uv = 1. Elements are stored in the normal form Σ c_ij u^i v^j.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::pairing::ProjectiveUnit;
use crate::scalars::{
    minimal_polynomial, Field, FieldDescriptor, FieldElement, FieldMatrix, FieldRef, Relation, UPoly,
};

/// Largest prime accepted by [`weyl_split_verification`].
pub const MAX_SPLIT_PRIME: u64 = 7;

#[derive(Clone, Debug)]
pub enum AlgebraKind {
    /// u^n = a, v^n = b, vu = ζ uv.
    Symbol { zeta: FieldElement, a: FieldElement, b: FieldElement },
    /// v^p = x, u^p = y, vu - uv = 1.
    Weyl { x: FieldElement, y: FieldElement },
}

#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    field: FieldRef,
    degree: usize,
    kind: AlgebraKind,
}

pub type SpecRef = Arc<AlgebraSpec>;

impl PartialEq for AlgebraSpec {
    fn eq(&self, other: &Self) -> bool {
        if !self.field.same_as(&other.field) || self.degree != other.degree {
            return false;
        }
        match (&self.kind, &other.kind) {
            (AlgebraKind::Symbol { zeta, a, b }, AlgebraKind::Symbol { zeta: z2, a: a2, b: b2 }) => {
                zeta == z2 && a == a2 && b == b2
            }
            (AlgebraKind::Weyl { x, y }, AlgebraKind::Weyl { x: x2, y: y2 }) => x == x2 && y == y2,
            _ => false,
        }
    }
}

impl AlgebraSpec {
    /// The symbol algebra (a,b)_n over `field`, which must contain ζ_n.
    pub fn symbol(field: &FieldRef, n: usize, a: FieldElement, b: FieldElement) -> Result<SpecRef> {
        if n < 2 {
            return Err(Error::InvalidParameter("symbol algebra degree must be at least 2".into()));
        }
        if a.is_zero() || b.is_zero() {
            return Err(Error::InvalidParameter("symbol parameters must be nonzero".into()));
        }
        if !a.field().same_as(field) || !b.field().same_as(field) {
            return Err(Error::DescriptorMismatch { left: field.descriptor().to_string(), right: "parameter field".into() });
        }
        let zeta = field.root_of_unity(n as u64)?;
        Ok(Arc::new(AlgebraSpec { field: field.clone(), degree: n, kind: AlgebraKind::Symbol { zeta, a, b } }))
    }

    /// (a,b)_n over Q(ζ_n)(a, b) with a, b independent variables.
    pub fn generic_symbol(n: usize) -> Result<SpecRef> {
        let field = Field::new(&FieldDescriptor::function_field(FieldDescriptor::Cyclotomic(n as u64), &["a", "b"]))?;
        let (a, b) = (field.var(0), field.var(1));
        Self::symbol(&field, n, a, b)
    }

    /// The algebra over F_p(x, y) with v^p = x, u^p = y, vu - uv = 1.
    pub fn weyl(p: u64) -> Result<SpecRef> {
        let field = Field::new(&FieldDescriptor::function_field(FieldDescriptor::PrimeField(p), &["x", "y"]))?;
        let (x, y) = (field.var(0), field.var(1));
        Ok(Arc::new(AlgebraSpec { field, degree: p as usize, kind: AlgebraKind::Weyl { x, y } }))
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    pub fn is_symbol(&self) -> bool {
        matches!(self.kind, AlgebraKind::Symbol { .. })
    }

    pub fn to_json(&self) -> Value {
        match &self.kind {
            AlgebraKind::Symbol { a, b, .. } => json!({
                "kind": "symbol",
                "field": self.field.descriptor().to_json(),
                "n": self.degree,
                "a": a.to_json(),
                "b": b.to_json(),
            }),
            AlgebraKind::Weyl { .. } => json!({"kind": "weyl", "p": self.degree}),
        }
    }

    /// {"kind": "symbol", "n": 3} builds the generic algebra; "field", "a"
    /// and "b" override it. {"kind": "weyl", "p": 3}.
    pub fn from_json(v: &Value, path: &str) -> Result<SpecRef> {
        let obj = crate::json::object(v, path)?;
        let kind = match crate::json::field(obj, "kind", path)? {
            Value::String(s) => s.as_str(),
            _ => return Err(Error::schema(format!("{path}.kind"), "expected a string")),
        };
        match kind {
            "weyl" => {
                let p = crate::json::uint(crate::json::field(obj, "p", path)?, &format!("{path}.p"))?;
                if !crate::scalars::base::is_prime(p) {
                    return Err(Error::schema(format!("{path}.p"), format!("{p} is not prime")));
                }
                Self::weyl(p)
            }
            "symbol" => {
                let n = crate::json::usize_field(obj, "n", path)?;
                if !(2..=64).contains(&n) {
                    return Err(Error::schema(format!("{path}.n"), "degree must be between 2 and 64"));
                }
                if !obj.contains_key("field") {
                    return Self::generic_symbol(n);
                }
                let desc = FieldDescriptor::from_json(&obj["field"], &format!("{path}.field"))?;
                let field = Field::new(&desc)?;
                let a = field.element_from_json(crate::json::field(obj, "a", path)?, &format!("{path}.a"))?;
                let b = field.element_from_json(crate::json::field(obj, "b", path)?, &format!("{path}.b"))?;
                Self::symbol(&field, n, a, b)
            }
            other => Err(Error::schema(format!("{path}.kind"), format!("unknown algebra kind `{other}`"))),
        }
    }

    /// Products u^i v^j · u^k v^l in normal form, as (coefficient, i', j').
    fn monomial_product(&self, i: usize, j: usize, k: usize, l: usize) -> Vec<(FieldElement, usize, usize)> {
        let n = self.degree;
        match &self.kind {
            AlgebraKind::Symbol { zeta, a, b } => {
                let mut c = zeta.pow(((j * k) % n) as i64).expect("root of unity");
                let (mut e, mut f) = (i + k, j + l);
                if e >= n {
                    e -= n;
                    c = &c * a;
                }
                if f >= n {
                    f -= n;
                    c = &c * b;
                }
                vec![(c, e, f)]
            }
            AlgebraKind::Weyl { x, y } => {
                // v^j u^k = Σ_t t! C(j,t) C(k,t) u^{k-t} v^{j-t}
                let mut out = Vec::new();
                for t in 0..=j.min(k) {
                    let w = factorial(t) * binomial(j, t) * binomial(k, t);
                    let mut c = self.field.from_bigint(&w);
                    if c.is_zero() {
                        continue;
                    }
                    let (mut e, mut f) = (i + k - t, j - t + l);
                    if e >= n {
                        e -= n;
                        c = &c * y;
                    }
                    if f >= n {
                        f -= n;
                        c = &c * x;
                    }
                    out.push((c, e, f));
                }
                out
            }
        }
    }
}

fn factorial(t: usize) -> BigInt {
    (1..=t).map(BigInt::from).product()
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

#[derive(Clone, Debug)]
pub struct AlgebraElement {
    spec: SpecRef,
    coeffs: Vec<FieldElement>,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        *self.spec == *other.spec && self.coeffs == other.coeffs
    }
}

impl AlgebraElement {
    pub fn zero(spec: &SpecRef) -> Self {
        let n = spec.degree;
        AlgebraElement { spec: spec.clone(), coeffs: vec![spec.field.zero(); n * n] }
    }

    pub fn scalar(spec: &SpecRef, c: &FieldElement) -> Self {
        let mut z = Self::zero(spec);
        z.coeffs[0] = c.clone();
        z
    }

    pub fn one(spec: &SpecRef) -> Self {
        Self::scalar(spec, &spec.field.one())
    }

    /// u^i v^j with exponents reduced into the box.
    pub fn monomial(spec: &SpecRef, i: usize, j: usize) -> Self {
        let u = Self::u(spec).pow(i as u64);
        let v = Self::v(spec).pow(j as u64);
        u.mul(&v)
    }

    pub fn u(spec: &SpecRef) -> Self {
        let mut z = Self::zero(spec);
        z.coeffs[spec.degree] = spec.field.one();
        z
    }

    pub fn v(spec: &SpecRef) -> Self {
        let mut z = Self::zero(spec);
        z.coeffs[1] = spec.field.one();
        z
    }

    /// Σ c_k v^k for coefficients in the base field.
    pub fn poly_in_v(spec: &SpecRef, coeffs: &[FieldElement]) -> Self {
        let v = Self::v(spec);
        let mut acc = Self::zero(spec);
        for c in coeffs.iter().rev() {
            acc = acc.mul(&v).add(&Self::scalar(spec, c));
        }
        acc
    }

    pub fn from_terms(spec: &SpecRef, terms: &[((usize, usize), FieldElement)]) -> Result<Self> {
        let n = spec.degree;
        let mut z = Self::zero(spec);
        for ((i, j), c) in terms {
            if *i >= n || *j >= n {
                return Err(Error::InvalidParameter(format!("exponent ({i},{j}) outside the normal-form box")));
            }
            z.coeffs[i * n + j] = z.coeffs[i * n + j].try_add(c)?;
        }
        Ok(z)
    }

    pub fn spec(&self) -> &SpecRef {
        &self.spec
    }

    pub fn coeff(&self, i: usize, j: usize) -> &FieldElement {
        &self.coeffs[i * self.spec.degree + j]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElement::is_zero)
    }

    pub fn as_scalar(&self) -> Option<FieldElement> {
        self.coeffs[1..].iter().all(FieldElement::is_zero).then(|| self.coeffs[0].clone())
    }

    fn check_spec(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.spec, &other.spec) || *self.spec == *other.spec {
            Ok(())
        } else {
            Err(Error::SpecMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_spec(other)?;
        Ok(self.add(other))
    }

    fn add(&self, other: &Self) -> Self {
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        AlgebraElement { spec: self.spec.clone(), coeffs }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_spec(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(AlgebraElement { spec: self.spec.clone(), coeffs })
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        AlgebraElement { spec: self.spec.clone(), coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_spec(other)?;
        Ok(self.mul(other))
    }

    fn mul(&self, other: &Self) -> Self {
        let n = self.spec.degree;
        let mut out = vec![self.spec.field.zero(); n * n];
        for (s, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (c, e, f) in self.spec.monomial_product(s / n, s % n, t / n, t % n) {
                    out[e * n + f] = &out[e * n + f] + &(&ab * &c);
                }
            }
        }
        AlgebraElement { spec: self.spec.clone(), coeffs: out }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.spec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Matrix of left multiplication in the basis u^i v^j.
    fn left_matrix(&self) -> FieldMatrix {
        let n = self.spec.degree;
        let mut rows = vec![vec![self.spec.field.zero(); n * n]; n * n];
        for col in 0..n * n {
            let img = self.mul(&Self::monomial(&self.spec, col / n, col % n));
            for (row, c) in img.coeffs.into_iter().enumerate() {
                rows[row][col] = c;
            }
        }
        FieldMatrix::from_rows(&self.spec.field, rows).expect("square")
    }

    /// Two-sided inverse, or `NotInvertible`.
    pub fn inverse(&self) -> Result<Self> {
        // x^k = c gives x^{-1} = c^{-1} x^{k-1}; this covers monomials
        let mut p = self.clone();
        for k in 1..=self.spec.degree as u64 {
            if let Some(c) = p.as_scalar() {
                if c.is_zero() {
                    return Err(Error::NotInvertible);
                }
                return Ok(self.pow(k - 1).scale(&c.inv()?));
            }
            p = p.mul(self);
        }
        let inv = self.left_matrix().inverse().map_err(|_| Error::NotInvertible)?;
        let coeffs = inv.column(0);
        Ok(AlgebraElement { spec: self.spec.clone(), coeffs })
    }

    /// Divides by the first nonzero coefficient.
    pub fn projective_normalize(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(c) => self.scale(&c.inv().expect("nonzero")),
        }
    }

    pub fn to_json(&self) -> Value {
        let n = self.spec.degree;
        let mut m = Map::new();
        for (s, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                m.insert(format!("{},{}", s / n, s % n), c.to_json());
            }
        }
        Value::Object(m)
    }

    pub fn from_json(spec: &SpecRef, v: &Value, path: &str) -> Result<Self> {
        let obj = crate::json::object(v, path)?;
        let mut terms = Vec::new();
        for (k, c) in obj {
            let p = format!("{path}.{k}");
            let (i, j) = k
                .split_once(',')
                .and_then(|(i, j)| Some((i.trim().parse::<usize>().ok()?, j.trim().parse::<usize>().ok()?)))
                .ok_or_else(|| Error::schema(&p, "keys must be \"i,j\" exponent pairs"))?;
            if i >= spec.degree || j >= spec.degree {
                return Err(Error::schema(&p, "exponent outside the normal-form box"));
            }
            terms.push(((i, j), spec.field.element_from_json(c, &p)?));
        }
        Self::from_terms(spec, &terms)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.spec.degree;
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| {
                let mono = [("u", s / n), ("v", s % n)]
                    .iter()
                    .filter(|(_, e)| *e > 0)
                    .map(|(x, e)| if *e == 1 { x.to_string() } else { format!("{x}^{e}") })
                    .collect::<Vec<_>>()
                    .join("*");
                match (mono.is_empty(), c.is_one()) {
                    (true, _) => format!("{c}"),
                    (false, true) => mono,
                    (false, false) => format!("({c})*{mono}"),
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl ProjectiveUnit for AlgebraElement {
    fn unit_mul(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)
    }

    fn unit_inverse(&self) -> Result<Self> {
        self.inverse()
    }

    fn as_scalar(&self) -> Option<FieldElement> {
        AlgebraElement::as_scalar(self)
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

/// Elements of K[t]/(t^n - a), which is K(u) inside the symbol algebra.
#[derive(Clone)]
struct CyclicPoly<'a> {
    a: &'a FieldElement,
    c: Vec<FieldElement>,
}

impl<'a> CyclicPoly<'a> {
    fn mul(&self, other: &Self) -> Self {
        let n = self.c.len();
        let field = self.a.field();
        let mut out = vec![field.zero(); n];
        for (i, x) in self.c.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.c.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let mut p = x * y;
                if i + j >= n {
                    p = &p * self.a;
                }
                let k = (i + j) % n;
                out[k] = &out[k] + &p;
            }
        }
        CyclicPoly { a: self.a, c: out }
    }

    fn add(&self, other: &Self) -> Self {
        CyclicPoly { a: self.a, c: self.c.iter().zip(&other.c).map(|(x, y)| x + y).collect() }
    }

    fn neg(&self) -> Self {
        CyclicPoly { a: self.a, c: self.c.iter().map(FieldElement::neg).collect() }
    }
}

/// Reduced norm: the determinant of left multiplication on A viewed as a
/// right K(u)-vector space with basis 1, v, …, v^{n-1}.
pub fn reduced_norm(x: &AlgebraElement) -> Result<FieldElement> {
    let spec = &x.spec;
    let AlgebraKind::Symbol { zeta, a, b } = &spec.kind else {
        return Err(Error::SpecMismatch);
    };
    let n = spec.degree;
    let field = &spec.field;
    let zero = CyclicPoly { a, c: vec![field.zero(); n] };
    // x v^j = Σ_m v^m M[m][j] with u^k v^m = ζ^{-km} v^m u^k
    let mut m = vec![vec![zero.clone(); n]; n];
    for k in 0..n {
        for l in 0..n {
            let c = x.coeff(k, l);
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                let (mut e, mut coef) = (l + j, c.clone());
                if e >= n {
                    e -= n;
                    coef = &coef * b;
                }
                let twist = zeta.pow(-((k * e % n) as i64))?;
                coef = &coef * &twist;
                m[e][j].c[k] = &m[e][j].c[k] + &coef;
            }
        }
    }
    let det = subset_determinant(&m, &zero);
    if det.c[1..].iter().any(|c| !c.is_zero()) {
        return Err(Error::InvalidParameter("reduced norm left K(u); the algebra data is inconsistent".into()));
    }
    Ok(det.c[0].clone())
}

/// Division-free determinant by dynamic programming over column subsets.
fn subset_determinant<'a>(m: &[Vec<CyclicPoly<'a>>], zero: &CyclicPoly<'a>) -> CyclicPoly<'a> {
    let n = m.len();
    let mut one = zero.clone();
    one.c[0] = zero.a.field().one();
    let mut dp: Vec<Option<CyclicPoly<'a>>> = vec![None; 1 << n];
    dp[0] = Some(one);
    for mask in 0usize..(1 << n) {
        let Some(cur) = dp[mask].clone() else { continue };
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for c in 0..n {
            if mask & (1 << c) != 0 || m[row][c].c.iter().all(FieldElement::is_zero) {
                continue;
            }
            let above = (mask >> (c + 1)).count_ones();
            let mut term = cur.mul(&m[row][c]);
            if above % 2 == 1 {
                term = term.neg();
            }
            let next = mask | (1 << c);
            dp[next] = Some(match dp[next].take() {
                None => term,
                Some(t) => t.add(&term),
            });
        }
    }
    dp[(1 << n) - 1].clone().unwrap_or_else(|| zero.clone())
}

/// Class of Norm(x) in K*/(K*)^n. `nth_power` is `None` when the test
/// cannot decide (some constants of a cyclotomic field are n-th powers only
/// over the cyclotomic field itself).
#[derive(Clone, Debug)]
pub struct NormResidueClass {
    pub n: usize,
    pub norm: FieldElement,
    /// Norm(x) with its denominator cleared by an n-th power.
    pub representative: FieldElement,
    pub nth_power: Option<bool>,
}

impl NormResidueClass {
    pub fn is_trivial(&self) -> Option<bool> {
        self.nth_power
    }

    /// Whether the two classes agree; `None` when undecided.
    pub fn same_class(&self, other: &NormResidueClass) -> Result<Option<bool>> {
        let ratio = self.norm.try_div(&other.norm)?;
        Ok(nth_power_test(&ratio, self.n))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "norm": self.norm.to_string(),
            "representative": self.representative.to_string(),
            "nth_power": self.nth_power,
        })
    }
}

fn nth_power_test(c: &FieldElement, n: usize) -> Option<bool> {
    if c.nth_root(n as u32).is_some() {
        return Some(true);
    }
    // degree obstruction: an n-th power has every partial degree divisible by n
    let vars = c.field().nvars();
    let degrees_ok =
        (0..vars).all(|i| c.numerator().degree_in(i).is_multiple_of(n as u32) && c.denominator().degree_in(i).is_multiple_of(n as u32));
    if !degrees_ok {
        return Some(false);
    }
    // the root test only finds rational constants, which is complete unless
    // the constant field is a proper cyclotomic extension
    let exact = match c.field().descriptor() {
        FieldDescriptor::FunctionField { base, .. } => !matches!(**base, FieldDescriptor::Cyclotomic(m) if m > 2),
        FieldDescriptor::Cyclotomic(m) => *m <= 2,
        _ => true,
    };
    exact.then_some(false)
}

pub fn norm_residue_class(x: &AlgebraElement) -> Result<NormResidueClass> {
    let norm = reduced_norm(x)?;
    if norm.is_zero() {
        return Err(Error::NotInvertible);
    }
    let n = x.spec.degree;
    let field = x.spec.field.clone();
    let den = field.from_poly(norm.denominator().clone());
    let representative = &norm * &den.pow(n as i64)?;
    let nth_power = nth_power_test(&norm, n);
    Ok(NormResidueClass { n, norm, representative, nth_power })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveOrder {
    pub is_torsion: bool,
    pub order: Option<u64>,
    /// Whether the order divides the degree of the algebra.
    pub divides_degree: Option<bool>,
}

impl ProjectiveOrder {
    pub fn to_json(&self) -> Value {
        json!({"is_torsion": self.is_torsion, "order": self.order, "divides_degree": self.divides_degree})
    }
}

/// Smallest k ≤ bound (default n²) with x^k a scalar.
pub fn finite_order_in_projective_units(x: &AlgebraElement, bound: Option<u64>) -> Result<ProjectiveOrder> {
    if x.is_zero() {
        return Err(Error::NotInvertible);
    }
    if x.spec.is_symbol() && reduced_norm(x)?.is_zero() {
        return Err(Error::NotInvertible);
    }
    let n = x.spec.degree as u64;
    let bound = bound.unwrap_or(n * n);
    let mut p = x.clone();
    for k in 1..=bound {
        if p.as_scalar().is_some() {
            return Ok(ProjectiveOrder { is_torsion: true, order: Some(k), divides_degree: Some(n.is_multiple_of(k)) });
        }
        p = p.mul(x);
    }
    Ok(ProjectiveOrder { is_torsion: false, order: None, divides_degree: None })
}

/// Projective closure of `gens` in A*/K*, elements normalized so that the
/// first nonzero coefficient is 1.
pub fn projective_closure(gens: &[AlgebraElement], cap: usize) -> Result<Vec<AlgebraElement>> {
    let Some(first) = gens.first() else {
        return Err(Error::InvalidParameter("no generators".into()));
    };
    let one = AlgebraElement::one(&first.spec);
    let mut seen: Vec<AlgebraElement> = vec![one.clone()];
    let mut queue = vec![one];
    let norm_gens: Vec<AlgebraElement> = gens.iter().map(AlgebraElement::projective_normalize).collect();
    while let Some(g) = queue.pop() {
        for h in &norm_gens {
            let p = g.try_mul(h)?.projective_normalize();
            if !seen.contains(&p) {
                if seen.len() >= cap {
                    return Err(Error::ClosureCapExceeded { cap });
                }
                seen.push(p.clone());
                queue.push(p);
            }
        }
    }
    Ok(seen)
}

#[derive(Clone, Debug)]
pub struct HeisenbergReport {
    pub n: usize,
    pub order: usize,
    pub abelian: bool,
    pub exponent: u64,
    pub pairing_value: crate::pairing::QZ,
    pub pairing_perfect: bool,
    pub classes_distinct: Option<bool>,
}

impl HeisenbergReport {
    pub fn passes(&self) -> bool {
        self.order == self.n * self.n
            && self.abelian
            && self.exponent == self.n as u64
            && self.pairing_value == crate::pairing::QZ::from_frac(1, self.n as i64)
            && self.pairing_perfect
    }
}

/// Structure of ⟨[u], [v]⟩ ⊂ A*/K* for a symbol algebra: order, abelian-ness,
/// exponent, and the commutator pairing on the generators (v, u).
pub fn heisenberg_subgroup(spec: &SpecRef) -> Result<HeisenbergReport> {
    let n = spec.degree;
    let (u, v) = (AlgebraElement::u(spec), AlgebraElement::v(spec));
    let elems = projective_closure(&[u.clone(), v.clone()], 10 * n * n)?;
    let mut abelian = true;
    let mut exponent = 1u64;
    for g in &elems {
        let o = finite_order_in_projective_units(g, None)?
            .order
            .ok_or_else(|| Error::InvalidParameter("closure element of infinite order".into()))?;
        exponent = num_integer::lcm(exponent, o);
        for h in &elems {
            if g.mul(h).projective_normalize() != h.mul(g).projective_normalize() {
                abelian = false;
            }
        }
    }
    let pairing = crate::pairing::commutator_pairing(&[v.clone(), u.clone()], &[n as u64, n as u64])?;
    let pairing_value = pairing.gram()[0][1].clone();
    let pairing_perfect = pairing_value.denominator() == &BigInt::from(n);
    let cu = norm_residue_class(&u)?;
    let cv = norm_residue_class(&v)?;
    let classes_distinct = cu.same_class(&cv)?.map(|same| !same);
    Ok(HeisenbergReport {
        n,
        order: elems.len(),
        abelian,
        exponent,
        pairing_value,
        pairing_perfect,
        classes_distinct,
    })
}

/// Matrices of u' = z· and v' = d/dz on F[z]/(z^p), with the relations and
/// independence checks that make A ⊗ k̄ ≅ Mat_p.
#[derive(Clone, Debug)]
pub struct WeylSplitCertificate {
    pub p: u64,
    /// F_p(X, Y) with x = X^p, y = Y^p.
    pub field: FieldRef,
    pub u_prime: FieldMatrix,
    pub v_prime: FieldMatrix,
    pub u: FieldMatrix,
    pub v: FieldMatrix,
    pub u_prime_nilpotent: bool,
    pub v_prime_nilpotent: bool,
    pub commutator_is_identity: bool,
    pub u_p_is_y: bool,
    pub v_p_is_x: bool,
    pub monomial_rank: usize,
}

impl WeylSplitCertificate {
    pub fn passes(&self) -> bool {
        let pp = (self.p * self.p) as usize;
        self.u_prime_nilpotent
            && self.v_prime_nilpotent
            && self.commutator_is_identity
            && self.u_p_is_y
            && self.v_p_is_x
            && self.monomial_rank == pp
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "field": self.field.descriptor().to_string(),
            "u_prime": self.u_prime.to_json(),
            "v_prime": self.v_prime.to_json(),
            "u_prime_nilpotent": self.u_prime_nilpotent,
            "v_prime_nilpotent": self.v_prime_nilpotent,
            "commutator_is_identity": self.commutator_is_identity,
            "u_p_is_y": self.u_p_is_y,
            "v_p_is_x": self.v_p_is_x,
            "monomial_rank": self.monomial_rank,
            "passes": self.passes(),
        })
    }
}

pub fn weyl_split_verification(p: u64) -> Result<WeylSplitCertificate> {
    if !crate::scalars::base::is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    if p > MAX_SPLIT_PRIME {
        return Err(Error::PrimeTooLarge(p));
    }
    let field = Field::new(&FieldDescriptor::function_field(FieldDescriptor::PrimeField(p), &["X", "Y"]))?;
    let n = p as usize;
    let mut shift = vec![vec![field.zero(); n]; n];
    let mut deriv = vec![vec![field.zero(); n]; n];
    for i in 0..n {
        if i + 1 < n {
            // z · z^i = z^{i+1}; d/dz z^{i+1} = (i+1) z^i
            shift[i + 1][i] = field.one();
            deriv[i][i + 1] = field.from_i64(i as i64 + 1);
        }
    }
    let u_prime = FieldMatrix::from_rows(&field, shift)?;
    let v_prime = FieldMatrix::from_rows(&field, deriv)?;
    let (big_x, big_y) = (field.var(0), field.var(1));
    let u = u_prime.add(&FieldMatrix::scalar(&field, n, &big_y));
    let v = v_prime.add(&FieldMatrix::scalar(&field, n, &big_x));
    let zero = FieldMatrix::zero(&field, n, n);
    let ident = FieldMatrix::identity(&field, n);
    let comm = v_prime.try_mul(&u_prime)?.sub(&u_prime.try_mul(&v_prime)?);
    let full_comm = v.try_mul(&u)?.sub(&u.try_mul(&v)?);
    let x = big_x.pow(p as i64)?;
    let y = big_y.pow(p as i64)?;
    let mut flat = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let m = u_prime.pow(i as u64).try_mul(&v_prime.pow(j as u64))?;
            flat.push(m.entries().to_vec());
        }
    }
    let monomial_rank = FieldMatrix::from_rows(&field, flat)?.rank();
    Ok(WeylSplitCertificate {
        p,
        u_prime_nilpotent: u_prime.pow(p) == zero,
        v_prime_nilpotent: v_prime.pow(p) == zero,
        commutator_is_identity: comm == ident && full_comm == ident,
        u_p_is_y: u.pow(p) == FieldMatrix::scalar(&field, n, &y),
        v_p_is_x: v.pow(p) == FieldMatrix::scalar(&field, n, &x),
        monomial_rank,
        field,
        u_prime,
        v_prime,
        u,
        v,
    })
}

/// Dense polynomial over F_p, coefficients low to high.
type FpPoly = Vec<u64>;

fn fp_trim(mut f: FpPoly) -> FpPoly {
    while f.last() == Some(&0) {
        f.pop();
    }
    f
}

fn fp_mul(f: &[u64], g: &[u64], p: u64) -> FpPoly {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + a * b) % p;
        }
    }
    fp_trim(out)
}

#[derive(Clone, Debug)]
pub struct TorsionSubgroupReport {
    pub p: u64,
    pub generators: Vec<AlgebraElement>,
    /// f_i(v)^p for every generator, each a scalar of F_p(x).
    pub pth_powers: Vec<Option<FieldElement>>,
    pub commute: bool,
    pub rank: u32,
    pub order: BigInt,
}

impl TorsionSubgroupReport {
    pub fn orders_divide_p(&self) -> bool {
        self.pth_powers.iter().all(Option::is_some)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "generators": self.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "pth_powers": self.pth_powers.iter().map(|c| c.as_ref().map(|c| c.to_string())).collect::<Vec<_>>(),
            "orders_divide_p": self.orders_divide_p(),
            "commute": self.commute,
            "rank": self.rank,
            "order": self.order.to_string(),
        })
    }
}

/// The subgroup of A*/K* generated by the classes [f_i(v)], f_i ∈ F_p[v].
/// A relation Π f_i^{e_i} ∈ K* holds iff the product is a polynomial in
/// v^p, which is checked for every exponent vector in [0, p)^m.
pub fn inseparable_torsion_subgroup(p: u64, generators: &[FpPoly], cap: u64) -> Result<TorsionSubgroupReport> {
    let spec = AlgebraSpec::weyl(p)?;
    let field = spec.field.clone();
    let polys: Vec<FpPoly> = generators.iter().map(|f| fp_trim(f.iter().map(|c| c % p).collect())).collect();
    if polys.iter().any(Vec::is_empty) {
        return Err(Error::ZeroPolynomial);
    }
    let m = polys.len() as u32;
    let total = (p as u128).checked_pow(m).filter(|&t| t <= cap as u128).ok_or(Error::GroupTooLarge {
        order: (p as u128).saturating_pow(m),
        cap: cap as u128,
    })?;
    let elems: Vec<AlgebraElement> = polys
        .iter()
        .map(|f| {
            let cs: Vec<FieldElement> = f.iter().map(|&c| field.from_i64(c as i64)).collect();
            AlgebraElement::poly_in_v(&spec, &cs)
        })
        .collect();
    let pth_powers = elems.iter().map(|e| e.pow(p).as_scalar()).collect();
    let mut commute = true;
    for a in &elems {
        for b in &elems {
            if a.mul(b) != b.mul(a) {
                commute = false;
            }
        }
    }
    // powers f_i^e for e < p
    let powers: Vec<Vec<FpPoly>> = polys
        .iter()
        .map(|f| {
            let mut out = vec![vec![1u64]];
            for e in 1..p {
                out.push(fp_mul(&out[e as usize - 1], f, p));
            }
            out
        })
        .collect();
    let mut kernel = 0u128;
    for idx in 0..total {
        let mut rest = idx;
        let mut prod = vec![1u64];
        for pw in &powers {
            let e = (rest % p as u128) as usize;
            rest /= p as u128;
            prod = fp_mul(&prod, &pw[e], p);
        }
        if prod.iter().enumerate().all(|(k, &c)| c == 0 || (k as u64).is_multiple_of(p)) {
            kernel += 1;
        }
    }
    let mut rank = m;
    let mut k = kernel;
    while k > 1 {
        k /= p as u128;
        rank -= 1;
    }
    Ok(TorsionSubgroupReport {
        p,
        generators: elems,
        pth_powers,
        commute,
        rank,
        order: num_traits::pow(BigInt::from(p), rank as usize),
    })
}

/// The first `m` monic irreducible polynomials over F_p, by degree and then
/// by coefficient order.
pub fn monic_irreducibles(p: u64, m: usize) -> Vec<FpPoly> {
    let mut found: Vec<FpPoly> = Vec::new();
    let mut deg = 1u32;
    while found.len() < m {
        let count = p.pow(deg);
        for idx in 0..count {
            let mut f: FpPoly = (0..deg).map(|i| (idx / p.pow(i)) % p).collect();
            f.push(1);
            if is_irreducible(&f, p) {
                found.push(f);
                if found.len() == m {
                    break;
                }
            }
        }
        deg += 1;
    }
    found
}

fn fp_rem(f: &[u64], g: &[u64], p: u64) -> FpPoly {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    let inv = mod_inv(g[dg], p);
    while r.len() > dg && !r.is_empty() {
        let lead = r[r.len() - 1] * inv % p;
        let shift = r.len() - 1 - dg;
        for (i, c) in g.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - lead * c % p) % p;
        }
        r = fp_trim(r);
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    (1..p).find(|x| a * x % p == 1).expect("unit")
}

/// Trial division by every monic polynomial of degree ≤ deg/2.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = f.len() as u32 - 1;
    for dg in 1..=d / 2 {
        for idx in 0..p.pow(dg) {
            let mut g: FpPoly = (0..dg).map(|i| (idx / p.pow(i)) % p).collect();
            g.push(1);
            if fp_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct SeparabilityReport {
    pub separable: bool,
    pub minimal_polynomial: UPoly,
    /// For an inseparable root of t^n - c with p | n: w = v^{n/p} satisfies
    /// w^p = c ∈ K and w ∉ K, so [w] has order p in L*/K*.
    pub witness: Option<InseparableWitness>,
}

#[derive(Clone, Debug)]
pub struct InseparableWitness {
    pub p: u64,
    pub exponent: u64,
    pub pth_power: FieldElement,
}

impl SeparabilityReport {
    pub fn to_json(&self) -> Value {
        json!({
            "separable": self.separable,
            "minimal_polynomial": self.minimal_polynomial.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            "witness": self.witness.as_ref().map(|w| json!({
                "p": w.p,
                "element": format!("v^{}", w.exponent),
                "pth_power": w.pth_power.to_string(),
            })),
        })
    }
}

pub fn separability_check(field: &FieldRef, rel: &Relation) -> Result<SeparabilityReport> {
    let mp = minimal_polynomial(field, rel)?;
    let p = field.characteristic();
    let n = mp.poly.degree() as u64;
    let witness = if !mp.separable && p != 0 && n.is_multiple_of(p) {
        Some(InseparableWitness { p, exponent: n / p, pth_power: mp.poly.coeffs[0].neg() })
    } else {
        None
    };
    Ok(SeparabilityReport { separable: mp.separable, minimal_polynomial: mp.poly, witness })
}

/// JSON for the polynomial list of [`inseparable_torsion_subgroup`]:
/// each entry is a coefficient list, low degree first.
pub fn polys_from_json(v: &Value, path: &str) -> Result<Vec<FpPoly>> {
    let arr = crate::json::array(v, path)?;
    arr.iter()
        .enumerate()
        .map(|(i, f)| {
            let fp = format!("{path}[{i}]");
            crate::json::array(f, &fp)?
                .iter()
                .enumerate()
                .map(|(j, c)| crate::json::uint(c, &format!("{fp}[{j}]")))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbol_relations() {
        let spec = AlgebraSpec::generic_symbol(3).unwrap();
        let (u, v) = (AlgebraElement::u(&spec), AlgebraElement::v(&spec));
        let AlgebraKind::Symbol { zeta, a, b } = spec.kind().clone() else { unreachable!() };
        assert_eq!(v.mul(&u), u.mul(&v).scale(&zeta));
        assert_eq!(u.pow(3), AlgebraElement::scalar(&spec, &a));
        assert_eq!(v.pow(3), AlgebraElement::scalar(&spec, &b));
    }

    #[test]
    fn weyl_relations() {
        let spec = AlgebraSpec::weyl(3).unwrap();
        let (u, v) = (AlgebraElement::u(&spec), AlgebraElement::v(&spec));
        assert_eq!(v.mul(&u).sub(&u.mul(&v)).unwrap(), AlgebraElement::one(&spec));
        let AlgebraKind::Weyl { x, y } = spec.kind().clone() else { unreachable!() };
        assert_eq!(v.pow(3), AlgebraElement::scalar(&spec, &x));
        assert_eq!(u.pow(3), AlgebraElement::scalar(&spec, &y));
    }

    #[test]
    fn quaternion_norms() {
        let spec = AlgebraSpec::generic_symbol(2).unwrap();
        let f = spec.field().clone();
        let (a, b) = (f.var(0), f.var(1));
        let u = AlgebraElement::u(&spec);
        let v = AlgebraElement::v(&spec);
        assert_eq!(reduced_norm(&u).unwrap(), a.neg());
        assert_eq!(reduced_norm(&v).unwrap(), b.neg());
        let c = f.from_i64(7);
        assert_eq!(reduced_norm(&AlgebraElement::scalar(&spec, &c)).unwrap(), f.from_i64(49));
        let uv = u.mul(&v);
        assert_eq!(uv.pow(2), AlgebraElement::scalar(&spec, &(&a * &b).neg()));
        assert_eq!(finite_order_in_projective_units(&uv, None).unwrap().order, Some(2));
    }

    #[test]
    fn orders_and_classes() {
        let spec = AlgebraSpec::generic_symbol(3).unwrap();
        let u = AlgebraElement::u(&spec);
        let o = finite_order_in_projective_units(&u, None).unwrap();
        assert_eq!(o.order, Some(3));
        let one = AlgebraElement::one(&spec);
        assert_eq!(finite_order_in_projective_units(&one, None).unwrap().order, Some(1));
        let cu = norm_residue_class(&u).unwrap();
        assert_eq!(cu.is_trivial(), Some(false));
        let cv = norm_residue_class(&AlgebraElement::v(&spec)).unwrap();
        assert_eq!(cu.same_class(&cv).unwrap(), Some(false));
        let c = norm_residue_class(&AlgebraElement::scalar(&spec, &spec.field().var(0))).unwrap();
        assert_eq!(c.is_trivial(), Some(true));
    }

    #[test]
    fn inverse_round_trip() {
        let spec = AlgebraSpec::generic_symbol(2).unwrap();
        let f = spec.field().clone();
        let x = AlgebraElement::from_terms(&spec, &[((0, 0), f.one()), ((1, 1), f.from_i64(2))]).unwrap();
        let y = x.inverse().unwrap();
        assert_eq!(x.mul(&y), AlgebraElement::one(&spec));
        assert_eq!(y.mul(&x), AlgebraElement::one(&spec));
    }

    #[test]
    fn split_certificates() {
        for p in [2, 3, 5] {
            let c = weyl_split_verification(p).unwrap();
            assert!(c.passes(), "p = {p}");
        }
        let c = weyl_split_verification(2).unwrap();
        for i in 0..2 {
            for j in i..2 {
                assert!(c.u_prime.row(i)[j].is_zero());
            }
        }
        assert!(matches!(weyl_split_verification(11), Err(Error::PrimeTooLarge(_))));
    }

    #[test]
    fn torsion_examples() {
        let r = inseparable_torsion_subgroup(2, &[vec![0, 1], vec![1, 1]], 1 << 20).unwrap();
        assert_eq!(r.order, BigInt::from(4));
        assert!(r.orders_divide_p() && r.commute);
        let r = inseparable_torsion_subgroup(5, &[vec![0, 1]], 1 << 20).unwrap();
        assert_eq!(r.order, BigInt::from(5));
        // v^2 is the square of v, so only two of the three classes are independent
        let r = inseparable_torsion_subgroup(3, &[vec![0, 1], vec![0, 0, 1], vec![1, 1]], 1 << 20).unwrap();
        assert_eq!(r.rank, 2);
        assert!(matches!(inseparable_torsion_subgroup(3, &[vec![3]], 1 << 20), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn irreducible_lists() {
        assert_eq!(monic_irreducibles(2, 4), vec![vec![0, 1], vec![1, 1], vec![1, 1, 1], vec![1, 1, 0, 1]]);
        assert_eq!(monic_irreducibles(3, 3), vec![vec![0, 1], vec![1, 1], vec![2, 1]]);
    }

    #[test]
    fn separability() {
        let f = Field::new(&FieldDescriptor::function_field(FieldDescriptor::PrimeField(3), &["x", "y"])).unwrap();
        let r = separability_check(&f, &Relation::binomial(3, &f.var(0))).unwrap();
        assert!(!r.separable);
        assert_eq!(r.witness.unwrap().pth_power, f.var(0));
        let g = Field::new(&FieldDescriptor::function_field(FieldDescriptor::Cyclotomic(4), &["x", "y"])).unwrap();
        assert!(separability_check(&g, &Relation::binomial(2, &g.var(0))).unwrap().separable);
        let bad = Relation { coeffs: vec![g.var(0), g.var(1), g.zero(), g.one()] };
        assert!(matches!(separability_check(&g, &bad), Err(Error::NotAlgebraic(_))));
    }

    #[test]
    fn heisenberg_structure() {
        for n in [2, 3, 5] {
            let r = heisenberg_subgroup(&AlgebraSpec::generic_symbol(n).unwrap()).unwrap();
            assert!(r.passes(), "{r:?}");
            assert_eq!(r.classes_distinct, Some(true));
        }
    }
}
