//! Field descriptors and canonical field elements.
//!
//! Every element is a reduced fraction num/den of polynomials over a constant
//! field; for fields without variables the denominator is always 1. The
//! denominator is monic in lex order and coprime to the numerator, so two
//! elements are equal exactly when their stored data are equal.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use super::base::{BaseField, Coeff};
use super::mpoly::{MPoly, Monomial, PolyRing};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rationals,
    Cyclotomic(u64),
    PrimeField(u64),
    FiniteField { p: u64, m: u32 },
    FunctionField { base: Box<FieldDescriptor>, variables: Vec<String> },
}

impl FieldDescriptor {
    pub fn function_field(base: FieldDescriptor, variables: &[&str]) -> Self {
        FieldDescriptor::FunctionField {
            base: Box::new(base),
            variables: variables.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldDescriptor::Rationals | FieldDescriptor::Cyclotomic(_) => 0,
            FieldDescriptor::PrimeField(p) | FieldDescriptor::FiniteField { p, .. } => *p,
            FieldDescriptor::FunctionField { base, .. } => base.characteristic(),
        }
    }

    /// Collapses nested function fields into a single one over a constant field.
    pub fn flatten(&self) -> Result<FieldDescriptor> {
        match self {
            FieldDescriptor::FunctionField { base, variables } => {
                let inner = base.flatten()?;
                let (const_base, mut vars) = match inner {
                    FieldDescriptor::FunctionField { base, variables } => (*base, variables),
                    other => (other, Vec::new()),
                };
                vars.extend(variables.iter().cloned());
                if vars.is_empty() {
                    return Err(Error::InvalidDescriptor("function field needs at least one variable".into()));
                }
                for (i, v) in vars.iter().enumerate() {
                    if v.is_empty() {
                        return Err(Error::InvalidDescriptor("empty variable name".into()));
                    }
                    if vars[..i].contains(v) {
                        return Err(Error::InvalidDescriptor(format!("duplicate variable `{v}`")));
                    }
                }
                Ok(FieldDescriptor::FunctionField { base: Box::new(const_base), variables: vars })
            }
            other => Ok(other.clone()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            FieldDescriptor::Rationals => json!({"kind": "rationals"}),
            FieldDescriptor::Cyclotomic(n) => json!({"kind": "cyclotomic", "n": n}),
            FieldDescriptor::PrimeField(p) => json!({"kind": "prime_field", "p": p}),
            FieldDescriptor::FiniteField { p, m } => json!({"kind": "finite_field", "p": p, "m": m}),
            FieldDescriptor::FunctionField { base, variables } => {
                json!({"kind": "function_field", "base": base.to_json(), "variables": variables})
            }
        }
    }

    pub fn from_json(v: &Value, path: &str) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::schema(path, "expected an object"))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::schema(format!("{path}.kind"), "expected a string"))?;
        let uint = |key: &str| -> Result<u64> {
            obj.get(key)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::schema(format!("{path}.{key}"), "expected a non-negative integer"))
        };
        Ok(match kind {
            "rationals" => FieldDescriptor::Rationals,
            "cyclotomic" => FieldDescriptor::Cyclotomic(uint("n")?),
            "prime_field" => FieldDescriptor::PrimeField(uint("p")?),
            "finite_field" => FieldDescriptor::FiniteField {
                p: uint("p")?,
                m: u32::try_from(uint("m")?).map_err(|_| Error::schema(format!("{path}.m"), "too large"))?,
            },
            "function_field" => {
                let base = FieldDescriptor::from_json(
                    obj.get("base").ok_or_else(|| Error::schema(format!("{path}.base"), "missing"))?,
                    &format!("{path}.base"),
                )?;
                let vars = obj
                    .get("variables")
                    .and_then(Value::as_array)
                    .ok_or_else(|| Error::schema(format!("{path}.variables"), "expected an array"))?;
                let variables = vars
                    .iter()
                    .enumerate()
                    .map(|(i, x)| {
                        x.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| Error::schema(format!("{path}.variables[{i}]"), "expected a string"))
                    })
                    .collect::<Result<Vec<_>>>()?;
                FieldDescriptor::FunctionField { base: Box::new(base), variables }
            }
            other => return Err(Error::schema(format!("{path}.kind"), format!("unknown field kind `{other}`"))),
        })
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rationals => write!(f, "Q"),
            FieldDescriptor::Cyclotomic(n) => write!(f, "Q(zeta_{n})"),
            FieldDescriptor::PrimeField(p) => write!(f, "F_{p}"),
            FieldDescriptor::FiniteField { p, m } => write!(f, "F_{p}^{m}"),
            FieldDescriptor::FunctionField { base, variables } => write!(f, "{base}({})", variables.join(",")),
        }
    }
}

/// A concrete field: descriptor plus the arithmetic context.
#[derive(Debug)]
pub struct Field {
    desc: FieldDescriptor,
    ring: PolyRing,
    vars: Vec<String>,
}

pub type FieldRef = Arc<Field>;

impl Field {
    pub fn new(desc: &FieldDescriptor) -> Result<FieldRef> {
        let desc = desc.flatten()?;
        let (base, vars) = match &desc {
            FieldDescriptor::FunctionField { base, variables } => (constant_field(base)?, variables.clone()),
            other => (constant_field(other)?, Vec::new()),
        };
        let ring = PolyRing::new(base, vars.len());
        Ok(Arc::new(Field { desc, ring, vars }))
    }

    pub fn rationals() -> FieldRef {
        Field::new(&FieldDescriptor::Rationals).unwrap()
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.desc
    }

    pub fn base(&self) -> &BaseField {
        &self.ring.base
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn characteristic(&self) -> u64 {
        self.ring.base.characteristic()
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<u128> {
        if self.vars.is_empty() {
            self.ring.base.order()
        } else {
            None
        }
    }

    pub fn zero(self: &Arc<Self>) -> FieldElement {
        FieldElement { field: self.clone(), num: self.ring.zero(), den: self.ring.one() }
    }

    pub fn one(self: &Arc<Self>) -> FieldElement {
        self.constant(self.ring.base.one())
    }

    pub fn from_i64(self: &Arc<Self>, v: i64) -> FieldElement {
        self.constant(self.ring.base.from_i64(v))
    }

    pub fn from_bigint(self: &Arc<Self>, v: &BigInt) -> FieldElement {
        self.constant(self.ring.base.from_bigint(v))
    }

    pub fn from_rational(self: &Arc<Self>, v: &BigRational) -> Result<FieldElement> {
        Ok(self.constant(self.ring.base.from_rational(v)?))
    }

    pub fn constant(self: &Arc<Self>, c: Coeff) -> FieldElement {
        FieldElement { field: self.clone(), num: self.ring.constant(c), den: self.ring.one() }
    }

    /// The i-th variable of a function field.
    pub fn var(self: &Arc<Self>, i: usize) -> FieldElement {
        assert!(i < self.vars.len(), "variable index out of range");
        FieldElement { field: self.clone(), num: self.ring.var(i), den: self.ring.one() }
    }

    pub fn var_named(self: &Arc<Self>, name: &str) -> Result<FieldElement> {
        let i = self
            .vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::InvalidParameter(format!("no variable `{name}` in {}", self.desc)))?;
        Ok(self.var(i))
    }

    pub fn from_poly(self: &Arc<Self>, num: MPoly) -> FieldElement {
        FieldElement { field: self.clone(), num, den: self.ring.one() }
    }

    /// num/den in canonical form.
    pub fn fraction(self: &Arc<Self>, num: MPoly, den: MPoly) -> Result<FieldElement> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.normalize(num, den))
    }

    fn normalize(self: &Arc<Self>, num: MPoly, den: MPoly) -> FieldElement {
        let r = &self.ring;
        if num.is_zero() {
            return self.zero();
        }
        if den.is_constant() {
            let inv = r.base.inv(den.constant_term().unwrap()).expect("nonzero denominator");
            return FieldElement { field: self.clone(), num: r.scale(&num, &inv), den: r.one() };
        }
        let g = r.gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (r.div_exact(&num, &g).unwrap(), r.div_exact(&den, &g).unwrap())
        };
        let lc = den.leading().unwrap().1.clone();
        let inv = r.base.inv(&lc).unwrap();
        FieldElement { field: self.clone(), num: r.scale(&num, &inv), den: r.scale(&den, &inv) }
    }

    /// A primitive d-th root of unity in the constant field.
    pub fn root_of_unity(self: &Arc<Self>, d: u64) -> Result<FieldElement> {
        let c = self.ring.base.primitive_root_of_unity(d, &self.desc.to_string())?;
        Ok(self.constant(c))
    }

    /// Q/Z discrete log of a root of unity (see [`BaseField::root_of_unity_log`]).
    pub fn root_of_unity_log(&self, a: &FieldElement) -> Option<(u64, u64)> {
        let c = a.as_constant()?;
        self.ring.base.root_of_unity_log(&c)
    }

    /// All elements of a finite field, in coordinate-index order.
    pub fn elements(self: &Arc<Self>, cap: u128) -> Result<Vec<FieldElement>> {
        let size = self
            .order()
            .ok_or_else(|| Error::UnsupportedField(format!("{} is not finite", self.desc)))?;
        if size > cap {
            return Err(Error::FieldTooLarge { size, cap });
        }
        Ok((0..size).map(|i| self.constant(self.ring.base.element_at(i))).collect())
    }

    pub fn same_as(&self, other: &Field) -> bool {
        std::ptr::eq(self, other) || self.desc == other.desc
    }

    pub fn element_from_json(self: &Arc<Self>, v: &Value, path: &str) -> Result<FieldElement> {
        if self.vars.is_empty() {
            return Ok(self.constant(self.coeff_from_json(v, path)?));
        }
        if let Some(obj) = v.as_object() {
            let num = self.poly_from_json(
                obj.get("num").ok_or_else(|| Error::schema(format!("{path}.num"), "missing"))?,
                &format!("{path}.num"),
            )?;
            let den = match obj.get("den") {
                Some(d) => self.poly_from_json(d, &format!("{path}.den"))?,
                None => self.ring.one(),
            };
            if den.is_zero() {
                return Err(Error::schema(format!("{path}.den"), "zero denominator"));
            }
            return Ok(self.normalize(num, den));
        }
        // a bare constant
        Ok(self.constant(self.coeff_from_json(v, path)?))
    }

    fn poly_from_json(&self, v: &Value, path: &str) -> Result<MPoly> {
        let obj = v.as_object().ok_or_else(|| Error::schema(path, "expected a coefficient map"))?;
        let mut terms = Vec::new();
        for (k, c) in obj {
            let exps: Vec<u32> = if k.trim().is_empty() {
                vec![]
            } else {
                k.split(',')
                    .map(|s| s.trim().parse::<u32>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| Error::schema(format!("{path}[{k}]"), "bad exponent vector"))?
            };
            if exps.len() != self.vars.len() {
                return Err(Error::schema(
                    format!("{path}[{k}]"),
                    format!("expected {} exponents", self.vars.len()),
                ));
            }
            terms.push((exps as Monomial, self.coeff_from_json(c, &format!("{path}[{k}]"))?));
        }
        Ok(self.ring.from_terms(terms))
    }

    fn coeff_from_json(&self, v: &Value, path: &str) -> Result<Coeff> {
        let base = &self.ring.base;
        let rat = |x: &Value, p: &str| -> Result<BigRational> {
            match x {
                Value::String(s) => parse_rational(s).ok_or_else(|| Error::schema(p, format!("bad number `{s}`"))),
                Value::Number(n) => n
                    .as_i64()
                    .map(|i| BigRational::from_integer(i.into()))
                    .ok_or_else(|| Error::schema(p, "expected an integer")),
                _ => Err(Error::schema(p, "expected a number string")),
            }
        };
        match v {
            Value::Array(items) => {
                let coords = items
                    .iter()
                    .enumerate()
                    .map(|(i, x)| rat(x, &format!("{path}[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                match base {
                    BaseField::Finite { p, .. } => {
                        let ints = coords
                            .iter()
                            .enumerate()
                            .map(|(i, r)| {
                                if !r.is_integer() {
                                    return Err(Error::schema(format!("{path}[{i}]"), "expected an integer"));
                                }
                                Ok(r.numer().mod_floor(&BigInt::from(*p)).to_u64().unwrap())
                            })
                            .collect::<Result<Vec<_>>>()?;
                        base.from_ff_coords(&ints).map_err(|e| Error::schema(path, e.to_string()))
                    }
                    _ => base.from_cyc_coords(&coords).map_err(|e| Error::schema(path, e.to_string())),
                }
            }
            _ => base.from_rational(&rat(v, path)?).map_err(|e| Error::schema(path, e.to_string())),
        }
    }

    pub(crate) fn coeff_to_json(&self, c: &Coeff) -> Value {
        match c {
            Coeff::Rat(r) => Value::String(r.to_string()),
            Coeff::Cyc(v) => Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect()),
            Coeff::Ff(v) if v.len() == 1 => Value::String(v[0].to_string()),
            Coeff::Ff(v) => Value::Array(v.iter().map(|x| Value::String(x.to_string())).collect()),
        }
    }

    fn poly_to_json(&self, p: &MPoly) -> Value {
        let mut map = serde_json::Map::new();
        for (m, c) in p.terms() {
            let key = m.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
            map.insert(key, self.coeff_to_json(c));
        }
        Value::Object(map)
    }
}

fn constant_field(desc: &FieldDescriptor) -> Result<BaseField> {
    match desc {
        FieldDescriptor::Rationals => Ok(BaseField::rationals()),
        FieldDescriptor::Cyclotomic(n) => BaseField::cyclotomic(*n),
        FieldDescriptor::PrimeField(p) => BaseField::finite(*p, 1),
        FieldDescriptor::FiniteField { p, m } => BaseField::finite(*p, *m),
        FieldDescriptor::FunctionField { .. } => {
            Err(Error::InvalidDescriptor("function field base must be a constant field after flattening".into()))
        }
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d == BigInt::from(0) {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        s.parse::<BigInt>().ok().map(BigRational::from_integer)
    }
}

#[derive(Clone)]
pub struct FieldElement {
    field: FieldRef,
    num: MPoly,
    den: MPoly,
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.num == other.num && self.den == other.den
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FieldElement {
    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn numerator(&self) -> &MPoly {
        &self.num
    }

    pub fn denominator(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_constant() && self.num.is_constant() && self.field.base().is_one(self.num.constant_term().unwrap())
    }

    /// The constant-field value, if the element has no variables.
    pub fn as_constant(&self) -> Option<Coeff> {
        if self.is_zero() {
            return Some(self.field.base().zero());
        }
        if !self.num.is_constant() || !self.den.is_constant() {
            return None;
        }
        self.num.constant_term().cloned()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        self.field.base().as_rational(&self.as_constant()?)
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.field.same_as(&other.field) {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch {
                left: self.field.desc.to_string(),
                right: other.field.desc.to_string(),
            })
        }
    }

    fn ring(&self) -> &PolyRing {
        &self.field.ring
    }

    pub fn try_add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        let r = self.ring();
        if self.den == other.den {
            let num = r.add(&self.num, &other.num);
            if self.den.is_constant() {
                return Ok(self.field.from_poly(num));
            }
            return Ok(self.field.normalize(num, self.den.clone()));
        }
        let num = r.add(&r.mul(&self.num, &other.den), &r.mul(&other.num, &self.den));
        Ok(self.field.normalize(num, r.mul(&self.den, &other.den)))
    }

    pub fn try_sub(&self, other: &FieldElement) -> Result<FieldElement> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &FieldElement) -> Result<FieldElement> {
        self.check(other)?;
        let r = self.ring();
        if self.den.is_constant() && other.den.is_constant() {
            return Ok(self.field.from_poly(r.mul(&self.num, &other.num)));
        }
        Ok(self.field.normalize(r.mul(&self.num, &other.num), r.mul(&self.den, &other.den)))
    }

    pub fn try_div(&self, other: &FieldElement) -> Result<FieldElement> {
        self.try_mul(&other.inv()?)
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement { field: self.field.clone(), num: self.ring().neg(&self.num), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.field.normalize(self.den.clone(), self.num.clone()))
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        let r = self.ring();
        if self.num.is_constant() && self.den.is_constant() {
            let c = base.as_constant().unwrap();
            return Ok(self.field.constant(r.base.pow(&c, k as u128)));
        }
        // num and den stay coprime under powers
        Ok(FieldElement { field: self.field.clone(), num: r.pow(&base.num, k), den: r.pow(&base.den, k) })
    }

    /// Applies the Frobenius x -> x^p coefficientwise inverse when possible:
    /// returns the p-th root if this element is a p-th power.
    pub fn nth_root(&self, q: u32) -> Option<FieldElement> {
        let r = self.ring();
        let n = r.nth_root(&self.num, q)?;
        let d = r.nth_root(&self.den, q)?;
        Some(self.field.normalize(n, d))
    }

    pub fn to_json(&self) -> Value {
        if self.field.vars.is_empty() {
            return self.field.coeff_to_json(&self.as_constant().unwrap());
        }
        json!({"num": self.field.poly_to_json(&self.num), "den": self.field.poly_to_json(&self.den)})
    }
}

fn poly_display(field: &Field, p: &MPoly) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let base = field.base();
    let mut parts = Vec::new();
    for (m, c) in p.terms().rev() {
        let mono: Vec<String> = m
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { field.vars[i].clone() } else { format!("{}^{e}", field.vars[i]) })
            .collect();
        let cs = base.describe(c);
        if mono.is_empty() {
            parts.push(cs);
        } else if base.is_one(c) {
            parts.push(mono.join("*"));
        } else {
            parts.push(format!("{cs}*{}", mono.join("*")));
        }
    }
    parts.join(" + ")
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = poly_display(&self.field, &self.num);
        if self.den.is_constant() {
            write!(f, "{n}")
        } else {
            write!(f, "({n})/({})", poly_display(&self.field, &self.den))
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $call:ident) => {
        impl std::ops::$tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: &FieldElement) -> FieldElement {
                self.$call(rhs).expect(concat!("field ", stringify!($m)))
            }
        }
        impl std::ops::$tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $m(self, rhs: FieldElement) -> FieldElement {
                self.$call(&rhs).expect(concat!("field ", stringify!($m)))
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);
binop!(Div, div, try_div);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(self)
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::neg(&self)
    }
}

/// The image {c^2 - c} of the Artin–Schreier map on F_{2^m}, sorted by
/// coordinate index. `cap` bounds the field size.
pub fn artin_schreier_image(desc: &FieldDescriptor, cap: u128) -> Result<Vec<FieldElement>> {
    let field = Field::new(desc)?;
    if field.characteristic() != 2 || field.nvars() > 0 {
        return Err(Error::WrongCharacteristic(format!("{desc} is not a finite field of characteristic 2")));
    }
    let mut image: Vec<FieldElement> = field
        .elements(cap)?
        .into_iter()
        .map(|c| &(&c * &c) - &c)
        .collect();
    let base = field.base().clone();
    image.sort_by(|a, b| base.cmp_coeff(&a.as_constant().unwrap(), &b.as_constant().unwrap()));
    image.dedup();
    Ok(image)
}

pub const DEFAULT_ENUMERATION_CAP: u128 = 16;
