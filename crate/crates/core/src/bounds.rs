//! Explicit bounds: the Minkowski constants Υ_A, Υ_M, torsion primes of
//! Dynkin types, the Burnside-type divisibility |Γ|′ | d^n, and the divisor
//! bounds for tori, linear algebraic groups, Severi–Brauer varieties and
//! quadrics.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalars::base::is_prime;
use crate::scalars::{Field, FieldDescriptor, FieldMatrix, FieldRef};

/// Enumeration cap for [`FiniteMatrixGroup::generate`].
pub const GROUP_ENUMERATION_CAP: usize = 100_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinkowskiValues {
    pub n: u64,
    /// Maximal order of a finite subgroup of GL_n(Z); known here for n ≤ 3.
    pub upsilon_a: Option<BigInt>,
    /// Least common multiple of the orders of finite subgroups of GL_n(Z).
    pub upsilon_m: BigInt,
}

impl MinkowskiValues {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "upsilon_a": self.upsilon_a.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "unknown".into()),
            "upsilon_a_status": if self.upsilon_a.is_some() { "table" } else { "table exhausted" },
            "upsilon_m": self.upsilon_m.to_string(),
        })
    }
}

/// Υ_M(n) = Π_p p^{Σ_j ⌊n / (p^j (p-1))⌋}.
pub fn upsilon_m(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for p in (2..=n + 1).filter(|&p| is_prime(p)) {
        let mut e = 0u64;
        let mut denom = p - 1;
        while denom <= n {
            e += n / denom;
            denom *= p;
        }
        acc *= num_traits::pow(BigInt::from(p), e as usize);
    }
    acc
}

pub fn minkowski_values(n: u64) -> Result<MinkowskiValues> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let upsilon_a = match n {
        1 => Some(2),
        2 => Some(12),
        3 => Some(48),
        _ => None,
    }
    .map(BigInt::from);
    Ok(MinkowskiValues { n, upsilon_a, upsilon_m: upsilon_m(n) })
}

/// Dynkin letter and rank, such as ('E', 8).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct DynkinType {
    pub letter: char,
    pub rank: u32,
}

impl DynkinType {
    pub fn new(letter: char, rank: u32) -> Result<Self> {
        let letter = letter.to_ascii_uppercase();
        let ok = match letter {
            'A' => rank >= 1,
            'B' => rank >= 2,
            'C' => rank >= 3,
            'D' => rank >= 4,
            'E' => (6..=8).contains(&rank),
            'F' => rank == 4,
            'G' => rank == 2,
            _ => false,
        };
        if !ok {
            return Err(Error::UnknownType(format!("{letter}{rank}")));
        }
        Ok(DynkinType { letter, rank })
    }

    /// Parses "A4", "E_8", "g2".
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        let mut chars = t.chars();
        let letter = chars.next().ok_or_else(|| Error::UnknownType(s.into()))?;
        let rest: String = chars.collect();
        let rank: u32 = rest.trim_start_matches('_').parse().map_err(|_| Error::UnknownType(s.into()))?;
        Self::new(letter, rank)
    }

    pub fn torsion_primes(&self) -> &'static [u64] {
        match self.letter {
            'A' | 'C' => &[],
            'B' | 'D' | 'G' => &[2],
            'F' => &[2, 3],
            'E' if self.rank == 8 => &[2, 3, 5],
            _ => &[2, 3],
        }
    }
}

impl fmt::Display for DynkinType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.letter, self.rank)
    }
}

/// Union of the torsion primes of the factors.
pub fn torsion_primes(types: &[DynkinType]) -> BTreeSet<u64> {
    types.iter().flat_map(|t| t.torsion_primes().iter().copied()).collect()
}

/// A finite group of invertible matrices, listed element by element with the
/// identity first.
#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    field: FieldRef,
    elements: Vec<FieldMatrix>,
    label: String,
}

impl FiniteMatrixGroup {
    /// Closure of the generators under multiplication.
    pub fn generate(gens: &[FieldMatrix], label: &str, cap: usize) -> Result<Self> {
        let first = gens.first().ok_or_else(|| Error::InvalidParameter("no generators".into()))?;
        let field = first.field().clone();
        let n = first.rows();
        if gens.iter().any(|g| g.rows() != n || g.cols() != n) {
            return Err(Error::DimensionMismatch("generators must be square of one size".into()));
        }
        let mut elements = vec![FieldMatrix::identity(&field, n)];
        let mut seen: HashMap<FieldMatrix, usize> = HashMap::new();
        seen.insert(elements[0].clone(), 0);
        let mut i = 0;
        while i < elements.len() {
            for g in gens {
                let p = elements[i].try_mul(g)?;
                if !seen.contains_key(&p) {
                    if elements.len() >= cap {
                        return Err(Error::GroupTooLarge { order: elements.len() as u128 + 1, cap: cap as u128 });
                    }
                    seen.insert(p.clone(), elements.len());
                    elements.push(p);
                }
            }
            i += 1;
        }
        Ok(FiniteMatrixGroup { field, elements, label: label.into() })
    }

    /// An explicit element list; checked for identity and closure.
    pub fn from_elements(elements: Vec<FieldMatrix>, label: &str) -> Result<Self> {
        let first = elements.first().ok_or_else(|| Error::InvalidParameter("empty group".into()))?;
        let field = first.field().clone();
        let n = first.rows();
        let set: std::collections::HashSet<&FieldMatrix> = elements.iter().collect();
        if set.len() != elements.len() {
            return Err(Error::InvalidParameter("repeated group elements".into()));
        }
        let id = FieldMatrix::identity(&field, n);
        if !set.contains(&id) {
            return Err(Error::InvalidParameter("identity missing".into()));
        }
        for a in &elements {
            for b in &elements {
                if !set.contains(&a.try_mul(b)?) {
                    return Err(Error::InvalidParameter("element list is not closed under multiplication".into()));
                }
            }
        }
        let mut elements = elements;
        let pos = elements.iter().position(|e| *e == id).unwrap();
        elements.swap(0, pos);
        Ok(FiniteMatrixGroup { field, elements, label: label.into() })
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn elements(&self) -> &[FieldMatrix] {
        &self.elements
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn element_order(&self, g: &FieldMatrix) -> u64 {
        let mut p = g.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.try_mul(g).expect("square");
            k += 1;
        }
        k
    }
}

/// The largest divisor of `n` coprime to p (all of n when p = 0).
pub fn prime_to_part(n: &BigInt, p: u64) -> BigInt {
    if p == 0 {
        return n.clone();
    }
    let p = BigInt::from(p);
    let mut m = n.clone();
    while !m.is_zero() && m.is_multiple_of(&p) {
        m /= &p;
    }
    m
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BurnsideReport {
    pub label: String,
    pub order: BigInt,
    pub characteristic: u64,
    /// |Γ|′.
    pub order_prime_part: BigInt,
    pub d: u64,
    pub n: usize,
    /// Elements of order prime to the characteristic with g^d ≠ 1.
    pub hypothesis_failures: usize,
    pub divides: bool,
}

impl BurnsideReport {
    pub fn hypothesis_holds(&self) -> bool {
        self.hypothesis_failures == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "label": self.label,
            "order": self.order.to_string(),
            "characteristic": self.characteristic,
            "order_prime_part": self.order_prime_part.to_string(),
            "d": self.d,
            "n": self.n,
            "d_pow_n": num_traits::pow(BigInt::from(self.d), self.n).to_string(),
            "hypothesis_holds": self.hypothesis_holds(),
            "hypothesis_failures": self.hypothesis_failures,
            "divides": self.divides,
        })
    }
}

/// If g^d = 1 for every g of order prime to char K, then |Γ|′ divides d^n.
/// Hypothesis failures are reported, not raised.
pub fn burnside_divisibility_check(g: &FiniteMatrixGroup, d: u64) -> Result<BurnsideReport> {
    if d == 0 {
        return Err(Error::InvalidParameter("d must be positive".into()));
    }
    let p = g.field.characteristic();
    let mut failures = 0;
    for e in &g.elements {
        let o = g.element_order(e);
        if p != 0 && o.is_multiple_of(p) {
            continue;
        }
        if !d.is_multiple_of(o) {
            failures += 1;
        }
    }
    let order = BigInt::from(g.order());
    let prime_part = prime_to_part(&order, p);
    let n = g.degree();
    let dn = num_traits::pow(BigInt::from(d), n);
    Ok(BurnsideReport {
        label: g.label.clone(),
        divides: dn.is_multiple_of(&prime_part),
        order,
        characteristic: p,
        order_prime_part: prime_part,
        d,
        n,
        hypothesis_failures: failures,
    })
}

/// S_3 in GL_2(Q) with d = 6, SL_2(F_3) with d = 4, and ⟨ζ_5⟩ ⊂ GL_1(Q(ζ_5))
/// with d = 5.
pub fn burnside_examples() -> Result<Vec<(FiniteMatrixGroup, u64)>> {
    let q = Field::rationals();
    let s3 = FiniteMatrixGroup::generate(
        &[FieldMatrix::from_i64(&q, &[&[0, -1], &[1, -1]]), FieldMatrix::from_i64(&q, &[&[0, 1], &[1, 0]])],
        "S3 in GL2(Q)",
        GROUP_ENUMERATION_CAP,
    )?;
    let f3 = Field::new(&FieldDescriptor::PrimeField(3))?;
    let sl2 = FiniteMatrixGroup::generate(
        &[FieldMatrix::from_i64(&f3, &[&[1, 1], &[0, 1]]), FieldMatrix::from_i64(&f3, &[&[1, 0], &[1, 1]])],
        "SL2(F3)",
        GROUP_ENUMERATION_CAP,
    )?;
    let c5 = Field::new(&FieldDescriptor::Cyclotomic(5))?;
    let z = c5.root_of_unity(5)?;
    let cyc = FiniteMatrixGroup::generate(&[FieldMatrix::diagonal(&c5, &[z])], "<zeta_5> in GL1", GROUP_ENUMERATION_CAP)?;
    Ok(vec![(s3, 6), (sl2, 4), (cyc, 5)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Torus,
    ReductivePerfect,
    GeneralLag,
    SemisimpleCharP,
    SeveriBrauer,
    QuadricOdd,
    QuadricEven,
}

impl BoundKind {
    pub const ALL: [BoundKind; 7] = [
        BoundKind::Torus,
        BoundKind::ReductivePerfect,
        BoundKind::GeneralLag,
        BoundKind::SemisimpleCharP,
        BoundKind::SeveriBrauer,
        BoundKind::QuadricOdd,
        BoundKind::QuadricEven,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoundKind::Torus => "torus",
            BoundKind::ReductivePerfect => "reductive_perfect",
            BoundKind::GeneralLag => "general_lag",
            BoundKind::SemisimpleCharP => "semisimple_char_p",
            BoundKind::SeveriBrauer => "severi_brauer",
            BoundKind::QuadricOdd => "quadric_odd",
            BoundKind::QuadricEven => "quadric_even",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown bound kind `{s}`")))
    }
}

/// Parameters: n is the rank (or matrix size), r the number of components,
/// big_n the faithful representation dimension N, p the characteristic and
/// pi1_order |π_1(G)|.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundQuery {
    pub n: Option<u64>,
    pub r: Option<u64>,
    pub big_n: Option<u64>,
    pub p: Option<u64>,
    pub pi1_order: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub divisor_bound: BigInt,
    pub exponent_bound: Option<BigInt>,
    pub meaning: String,
}

impl BoundReport {
    pub fn to_json(&self) -> Value {
        json!({
            "kind": self.kind.name(),
            "divisor_bound": self.divisor_bound.to_string(),
            "exponent_bound": self.exponent_bound.as_ref().map(|e| e.to_string()),
            "meaning": self.meaning,
        })
    }
}

fn need(v: Option<u64>, name: &str) -> Result<u64> {
    match v {
        None => Err(Error::MissingParameter(name.into())),
        Some(0) => Err(Error::InvalidParameter(format!("{name} must be positive"))),
        Some(x) => Ok(x),
    }
}

/// (l, m) with order = l·p^m and p ∤ l.
pub fn pi1_order_split(order: u64, p: u64) -> Result<(u64, u32)> {
    if order == 0 {
        return Err(Error::InvalidParameter("order must be at least 1".into()));
    }
    if !is_prime(p) {
        return Err(Error::InvalidParameter(format!("{p} is not prime")));
    }
    let (mut l, mut m) = (order, 0);
    while l % p == 0 {
        l /= p;
        m += 1;
    }
    Ok((l, m))
}

pub fn bound_calculator(kind: BoundKind, q: &BoundQuery) -> Result<BoundReport> {
    let pow = |b: &BigInt, e: u64| num_traits::pow(b.clone(), e as usize);
    let lag = |q: &BoundQuery| -> Result<(u64, u64, u64, BigInt)> {
        let n = need(q.n, "n")?;
        let r = need(q.r, "r")?;
        let big_n = need(q.big_n, "N")?;
        let bound = BigInt::from(r) * pow(&upsilon_m(n), big_n);
        Ok((n, r, big_n, bound))
    };
    let report = match kind {
        BoundKind::Torus => {
            let n = need(q.n, "n")?;
            let um = upsilon_m(n);
            BoundReport {
                kind,
                divisor_bound: pow(&um, n),
                exponent_bound: None,
                meaning: format!("|Γ| divides Υ_M({n})^{n} = {um}^{n}"),
            }
        }
        BoundKind::ReductivePerfect => {
            let (n, r, big_n, bound) = lag(q)?;
            BoundReport {
                kind,
                divisor_bound: bound,
                exponent_bound: None,
                meaning: format!("|Γ| divides r·Υ_M(n)^N = {r}·Υ_M({n})^{big_n} for reductive G over a perfect field"),
            }
        }
        BoundKind::GeneralLag => {
            let (n, r, big_n, bound) = lag(q)?;
            BoundReport {
                kind,
                divisor_bound: bound,
                exponent_bound: None,
                meaning: format!(
                    "|Γ|′ (the part of |Γ| prime to char K) divides r·Υ_M(n)^N = {r}·Υ_M({n})^{big_n}"
                ),
            }
        }
        BoundKind::SemisimpleCharP => {
            let (n, r, big_n, bound) = lag(q)?;
            let p = need(q.p, "p")?;
            let pi1 = need(q.pi1_order, "pi1_order")?;
            let (l, m) = pi1_order_split(pi1, p)?;
            BoundReport {
                kind,
                divisor_bound: bound,
                exponent_bound: Some(num_traits::pow(BigInt::from(p), m as usize)),
                meaning: format!(
                    "Γ = Γ1 ⋊ Γ2 with |Γ1| prime to {p} dividing {r}·Υ_M({n})^{big_n}, and Γ2 an abelian {p}-group of exponent at most {p}^{m} (|π1| = {l}·{p}^{m}); requires {p} not a torsion prime"
                ),
            }
        }
        BoundKind::SeveriBrauer => {
            let n = need(q.n, "n")?;
            BoundReport {
                kind,
                divisor_bound: BigInt::from(n) * BigInt::from(n),
                exponent_bound: Some(BigInt::from(n)),
                meaning: format!("for a division algebra of degree {n}: every finite Γ is abelian, |Γ| divides {n}^2 and g^{n} = 1"),
            }
        }
        BoundKind::QuadricOdd => {
            let n = need(q.n, "n")?;
            if n < 3 || n % 2 == 0 {
                return Err(Error::InvalidParameter("quadric_odd needs odd n ≥ 3".into()));
            }
            BoundReport {
                kind,
                divisor_bound: num_traits::pow(BigInt::from(2), (n - 1) as usize),
                exponent_bound: Some(BigInt::from(2)),
                meaning: format!("Γ ≅ (Z/2)^m with m ≤ {}, so |Γ| divides 2^{}", n - 1, n - 1),
            }
        }
        BoundKind::QuadricEven => {
            let n = need(q.n, "n")?;
            if n < 4 || n % 2 == 1 {
                return Err(Error::InvalidParameter("quadric_even needs even n ≥ 4".into()));
            }
            BoundReport {
                kind,
                divisor_bound: num_traits::pow(BigInt::from(8), (n - 1) as usize),
                exponent_bound: Some(BigInt::from(4)),
                meaning: format!("elements have order 1, 2 or 4 and |Γ| divides 8^{}", n - 1),
            }
        }
    };
    Ok(report)
}
