//! Finite abelian groups with alternating Q/Z-valued pairings.
//!
//! [`isotropic_subgroup`] follows the inductive construction: pick g of
//! maximal order in an ℓ-primary part, pass to g^⊥ = ⟨g⟩ × Γ'', recurse on
//! Γ'' and return ⟨g⟩ × Λ''. The result always satisfies |Γ| | |Λ|².
//! [`brute_force_isotropic_max`] is an exhaustive oracle for small groups.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{hermite_normal_form, integer_kernel, smith_normal_form, solve_integer, IntMatrix};
use crate::scalars::{FieldElement, FieldMatrix, FieldRef};

/// Exhaustive checks are used up to this many elements.
pub const EXHAUSTIVE_LIMIT: u64 = 4096;

/// A value of Q/Z, kept as a reduced fraction in [0, 1).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QZ(BigRational);

impl QZ {
    pub fn new(r: BigRational) -> Self {
        let f = &r - r.floor();
        QZ(f)
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        QZ::new(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        QZ(BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn add(&self, other: &QZ) -> QZ {
        QZ::new(&self.0 + &other.0)
    }

    pub fn neg(&self) -> QZ {
        QZ::new(-&self.0)
    }

    pub fn scale(&self, k: &BigInt) -> QZ {
        QZ::new(&self.0 * BigRational::from_integer(k.clone()))
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn parse(s: &str) -> Option<QZ> {
        crate::scalars::parse_rational(s).map(QZ::new)
    }
}

impl fmt::Display for QZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for QZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// ⊕ Z/d_i with d_1 | d_2 | … and every d_i ≥ 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    factors: Vec<BigInt>,
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<BigInt>) -> Result<Self> {
        for (i, d) in factors.iter().enumerate() {
            if *d < BigInt::from(2) {
                return Err(Error::InvalidParameter(format!("invariant factor {d} must be at least 2")));
            }
            if i > 0 && !d.is_multiple_of(&factors[i - 1]) {
                return Err(Error::InvalidParameter(format!("{} does not divide {d}", factors[i - 1])));
            }
        }
        Ok(FiniteAbelianGroup { factors })
    }

    pub fn from_u64(factors: &[u64]) -> Result<Self> {
        Self::new(factors.iter().map(|&d| BigInt::from(d)).collect())
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> BigInt {
        self.factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        v.iter().zip(&self.factors).map(|(x, d)| x.mod_floor(d)).collect()
    }

    pub fn element_order(&self, v: &[BigInt]) -> BigInt {
        v.iter()
            .zip(&self.factors)
            .map(|(x, d)| d / x.gcd(d))
            .fold(BigInt::one(), |acc, o| acc.lcm(&o))
    }

    /// Order of the subgroup generated by `gens`: the index of the lattice
    /// spanned by the generators and d_i e_i, read off its Hermite form.
    pub fn subgroup_order(&self, gens: &[Vec<BigInt>]) -> BigInt {
        let k = self.rank();
        if k == 0 {
            return BigInt::one();
        }
        let mut rows: Vec<Vec<BigInt>> = gens.to_vec();
        for (i, d) in self.factors.iter().enumerate() {
            let mut r = vec![BigInt::zero(); k];
            r[i] = d.clone();
            rows.push(r);
        }
        let h = hermite_normal_form(&IntMatrix::from_big_rows(&rows, k));
        let index: BigInt = (0..k).map(|i| h[(i, i)].clone()).product();
        self.order() / index
    }

    /// All elements in mixed-radix order (first coordinate fastest).
    fn elements(&self) -> Vec<Vec<BigInt>> {
        let total = self.order().to_usize().expect("small group");
        let dims: Vec<usize> = self.factors.iter().map(|d| d.to_usize().unwrap()).collect();
        (0..total)
            .map(|mut idx| {
                dims.iter()
                    .map(|&d| {
                        let c = idx % d;
                        idx /= d;
                        BigInt::from(c)
                    })
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingPairing {
    group: FiniteAbelianGroup,
    gram: Vec<Vec<QZ>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingValidation {
    pub valid: bool,
    pub exhaustive: bool,
    pub diagnostics: Vec<String>,
}

impl AlternatingPairing {
    /// Builds the pairing; shape is checked, the alternating property is not
    /// (see [`AlternatingPairing::validate`]).
    pub fn new(group: FiniteAbelianGroup, gram: Vec<Vec<QZ>>) -> Result<Self> {
        let k = group.rank();
        if gram.len() != k || gram.iter().any(|r| r.len() != k) {
            return Err(Error::DimensionMismatch(format!("gram must be {k}x{k}")));
        }
        Ok(AlternatingPairing { group, gram })
    }

    pub fn zero(group: FiniteAbelianGroup) -> Self {
        let k = group.rank();
        AlternatingPairing { group, gram: vec![vec![QZ::zero(); k]; k] }
    }

    /// The standard pairing on (Z/n)^2 with B(e1, e2) = 1/n.
    pub fn symplectic(n: u64) -> Self {
        let g = FiniteAbelianGroup::from_u64(&[n, n]).expect("n >= 2");
        let b = QZ::from_frac(1, n as i64);
        AlternatingPairing { group: g, gram: vec![vec![QZ::zero(), b.clone()], vec![b.neg(), QZ::zero()]] }
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn gram(&self) -> &[Vec<QZ>] {
        &self.gram
    }

    pub fn eval(&self, x: &[BigInt], y: &[BigInt]) -> QZ {
        let mut acc = BigRational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || self.gram[i][j].is_zero() {
                    continue;
                }
                acc += self.gram[i][j].value() * BigRational::from_integer(xi * yj);
            }
        }
        QZ::new(acc)
    }

    pub fn validate(&self) -> PairingValidation {
        let f = &self.group.factors;
        let k = f.len();
        let mut diagnostics = Vec::new();
        for i in 0..k {
            for j in 0..k {
                let b = &self.gram[i][j];
                if !b.scale(&f[i]).is_zero() || !b.scale(&f[j]).is_zero() {
                    diagnostics.push(format!("B(e{},e{}) = {b} is not killed by d_{} and d_{}", i + 1, j + 1, i + 1, j + 1));
                }
            }
            if !self.gram[i][i].is_zero() {
                diagnostics.push(format!("B(e{0},e{0}) = {1} is not 0", i + 1, self.gram[i][i]));
            }
            for j in i + 1..k {
                if !self.gram[i][j].add(&self.gram[j][i]).is_zero() {
                    diagnostics.push(format!("B(e{},e{}) + B(e{},e{}) is not 0", i + 1, j + 1, j + 1, i + 1));
                }
            }
        }
        let exhaustive = self.group.order() <= BigInt::from(EXHAUSTIVE_LIMIT);
        if exhaustive && diagnostics.is_empty() {
            for g in self.group.elements() {
                let v = self.eval(&g, &g);
                if !v.is_zero() {
                    diagnostics.push(format!("B(g,g) = {v} for g = {g:?}"));
                    break;
                }
            }
        }
        PairingValidation { valid: diagnostics.is_empty(), exhaustive, diagnostics }
    }

    /// The radical {x : B(x, Γ) = 0}, enumerated (small groups only).
    fn radical_order(&self) -> BigInt {
        let k = self.group.rank();
        let basis: Vec<Vec<BigInt>> = (0..k)
            .map(|j| (0..k).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        let n = self.group.elements().into_iter().filter(|x| basis.iter().all(|e| self.eval(x, e).is_zero())).count();
        BigInt::from(n)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "invariant_factors": self.group.factors.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "gram": self.gram.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value, path: &str) -> Result<Self> {
        let obj = crate::json::object(v, path)?;
        let fpath = format!("{path}.invariant_factors");
        let factors = crate::json::array(crate::json::field(obj, "invariant_factors", path)?, &fpath)?
            .iter()
            .enumerate()
            .map(|(i, x)| crate::json::bigint(x, &format!("{fpath}[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let group = FiniteAbelianGroup::new(factors).map_err(|e| Error::schema(&fpath, e.to_string()))?;
        let gpath = format!("{path}.gram");
        let rows = crate::json::array(crate::json::field(obj, "gram", path)?, &gpath)?;
        let mut gram = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            let rp = format!("{gpath}[{i}]");
            let mut row = Vec::new();
            for (j, x) in crate::json::array(r, &rp)?.iter().enumerate() {
                let s = match x {
                    Value::String(s) => s.clone(),
                    Value::Number(n) => n.to_string(),
                    _ => return Err(Error::schema(format!("{rp}[{j}]"), "expected a fraction string")),
                };
                row.push(QZ::parse(&s).ok_or_else(|| Error::schema(format!("{rp}[{j}]"), format!("bad fraction `{s}`")))?);
            }
            gram.push(row);
        }
        AlternatingPairing::new(group, gram).map_err(|e| Error::schema(gpath, e.to_string()))
    }
}

/// A subgroup given by generators in the coordinates of the ambient group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    pub generators: Vec<Vec<BigInt>>,
    pub order: BigInt,
}

impl Subgroup {
    pub fn to_json(&self) -> Value {
        json!({
            "generators": self.generators.iter().map(|g| g.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "order": self.order.to_string(),
        })
    }
}

impl AlternatingPairing {
    /// True iff B vanishes on the subgroup generated by `gens`.
    pub fn is_isotropic(&self, gens: &[Vec<BigInt>]) -> bool {
        gens.iter().all(|x| gens.iter().all(|y| self.eval(x, y).is_zero()))
    }
}

fn prime_divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut m = n.clone();
    let mut p = BigInt::from(2);
    while &p * &p <= m {
        if m.is_multiple_of(&p) {
            out.push(p.clone());
            while m.is_multiple_of(&p) {
                m /= &p;
            }
        }
        p += 1;
    }
    if m > BigInt::one() {
        out.push(m);
    }
    out
}

fn valuation(n: &BigInt, p: &BigInt) -> u32 {
    let mut v = 0;
    let mut m = n.clone();
    while !m.is_zero() && m.is_multiple_of(p) {
        m /= p;
        v += 1;
    }
    v
}

/// A subgroup Λ with B|Λ = 0 and |Γ| dividing |Λ|².
pub fn isotropic_subgroup(p: &AlternatingPairing) -> Result<Subgroup> {
    let check = p.validate();
    if !check.valid {
        return Err(Error::InvalidPairing(check.diagnostics.join("; ")));
    }
    let group = &p.group;
    let k = group.rank();
    let mut gens: Vec<Vec<BigInt>> = Vec::new();
    for ell in prime_divisors(&group.order()) {
        // ℓ-primary part: generated by (d_i / ℓ^{v_i}) e_i of order ℓ^{v_i}
        let mut basis = Vec::new();
        let mut orders = Vec::new();
        for (i, d) in group.factors.iter().enumerate() {
            let v = valuation(d, &ell);
            if v == 0 {
                continue;
            }
            let q = num_traits::pow(ell.clone(), v as usize);
            let mut e = vec![BigInt::zero(); k];
            e[i] = d / &q;
            basis.push(e);
            orders.push(q);
        }
        gens.extend(isotropic_primary(p, basis, orders)?);
    }
    let gens: Vec<Vec<BigInt>> = gens.into_iter().map(|g| group.reduce(&g)).filter(|g| g.iter().any(|x| !x.is_zero())).collect();
    let order = group.subgroup_order(&gens);
    Ok(Subgroup { generators: gens, order })
}

/// One step of the induction on an ℓ-group presented as ⊕ Z/o_i with the
/// given ambient images; `orders` are powers of one prime.
fn isotropic_primary(p: &AlternatingPairing, basis: Vec<Vec<BigInt>>, orders: Vec<BigInt>) -> Result<Vec<Vec<BigInt>>> {
    let k = basis.len();
    if k == 0 {
        return Ok(vec![]);
    }
    let gram: Vec<Vec<QZ>> = basis.iter().map(|x| basis.iter().map(|y| p.eval(x, y)).collect()).collect();
    if gram.iter().flatten().all(QZ::is_zero) {
        return Ok(basis);
    }
    // g = the last basis vector of maximal order, i.e. the lexicographically
    // smallest maximal-order coordinate tuple when orders ascend
    let max = orders.iter().max().unwrap().clone();
    let gi = (0..k).rev().find(|&i| orders[i] == max).unwrap();
    // B(g, e_j) = c_j / ℓ^r
    let c: Vec<BigInt> = (0..k)
        .map(|j| {
            let v = gram[gi][j].value();
            let scaled = v * BigRational::from_integer(max.clone());
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect();
    // L = {x ∈ Z^k : Σ x_j c_j ≡ 0 mod ℓ^r}, the preimage of g^⊥
    let mut row = c.clone();
    row.push(max.clone());
    let ker = integer_kernel(&IntMatrix::from_big_rows(&[row], k + 1));
    let proj: Vec<Vec<BigInt>> = ker.row_vectors().into_iter().map(|mut r| {
        r.pop();
        r
    }).collect();
    let lat = hermite_normal_form(&IntMatrix::from_big_rows(&proj, k));
    if lat.rows() != k {
        return Err(Error::InvalidPairing("perp lattice is not of full rank".into()));
    }
    let b_l = lat.transpose(); // columns form a basis of L
    // coordinates of o_j e_j in the L-basis
    let mut m_cols = Vec::with_capacity(k);
    for j in 0..k {
        let mut t = vec![BigInt::zero(); k];
        t[j] = orders[j].clone();
        m_cols.push(solve_integer(&b_l, &t).ok_or_else(|| Error::InvalidPairing("relation outside perp lattice".into()))?);
    }
    let m = IntMatrix::from_big_rows(&m_cols, k).transpose();
    let snf = smith_normal_form(&m);
    let s = snf.diagonal();
    let new_basis = b_l.try_mul(&snf.u_inv)?; // columns b'_i of order s_i
    // coordinates of g = e_gi in the new basis
    let mut eg = vec![BigInt::zero(); k];
    eg[gi] = BigInt::one();
    let a = solve_integer(&new_basis, &eg).ok_or_else(|| Error::InvalidPairing("g not in its own perp".into()))?;
    let swap = (0..k)
        .find(|&i| s[i] == max && a[i].gcd(&max).is_one())
        .ok_or_else(|| Error::InvalidPairing("no complement for the chosen element".into()))?;
    let to_ambient = |col: usize| -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); p.group.rank()];
        for t in 0..k {
            let coef = &new_basis[(t, col)];
            if coef.is_zero() {
                continue;
            }
            for (acc, x) in v.iter_mut().zip(&basis[t]) {
                *acc += coef * x;
            }
        }
        p.group.reduce(&v)
    };
    let g_amb = basis[gi].clone();
    let mut rest_basis = Vec::new();
    let mut rest_orders = Vec::new();
    let mut idx: Vec<usize> = (0..k).filter(|&i| i != swap && !s[i].is_one() && !s[i].is_zero()).collect();
    idx.sort_by(|&x, &y| s[x].cmp(&s[y]));
    for i in idx {
        rest_basis.push(to_ambient(i));
        rest_orders.push(s[i].abs());
    }
    let mut out = vec![g_amb];
    out.extend(isotropic_primary(p, rest_basis, rest_orders)?);
    Ok(out)
}

/// Maximal order of an isotropic subgroup, by exhaustive search over
/// subgroups built from cyclic pieces; returns the order and a witness.
pub fn brute_force_isotropic_max(p: &AlternatingPairing, cap: u64) -> Result<Subgroup> {
    let order = p.group.order();
    if order > BigInt::from(cap) {
        return Err(Error::GroupTooLarge { order: order.to_u128().unwrap_or(u128::MAX), cap: cap as u128 });
    }
    let check = p.validate();
    if !check.valid {
        return Err(Error::InvalidPairing(check.diagnostics.join("; ")));
    }
    let elems = p.group.elements();
    let n = elems.len();
    let dims: Vec<usize> = p.group.factors.iter().map(|d| d.to_usize().unwrap()).collect();
    let index = |v: &[BigInt]| -> usize {
        let mut idx = 0;
        for (x, &d) in v.iter().zip(&dims).rev() {
            idx = idx * d + x.to_usize().unwrap();
        }
        idx
    };
    let add = |a: usize, b: usize| -> usize {
        let s: Vec<BigInt> = elems[a].iter().zip(&elems[b]).map(|(x, y)| x + y).collect();
        index(&p.group.reduce(&s))
    };
    // pairing table against every element, computed lazily per generator
    let perp_of = |x: usize| -> Vec<bool> { (0..n).map(|y| p.eval(&elems[x], &elems[y]).is_zero()).collect() };
    let ceiling = (&order * p.radical_order()).sqrt();

    struct Search<'a> {
        n: usize,
        add: &'a dyn Fn(usize, usize) -> usize,
        perp_of: &'a dyn Fn(usize) -> Vec<bool>,
        seen: HashSet<Vec<u64>>,
        best: usize,
        best_gens: Vec<usize>,
        ceiling: usize,
    }

    impl Search<'_> {
        fn close(&self, members: &[bool], x: usize) -> Vec<bool> {
            // H + <x>
            let mut out = members.to_vec();
            let base: Vec<usize> = (0..self.n).filter(|&h| members[h]).collect();
            let mut m = x;
            while m != 0 {
                for &h in &base {
                    out[(self.add)(h, m)] = true;
                }
                m = (self.add)(m, x);
            }
            out
        }

        fn key(members: &[bool]) -> Vec<u64> {
            let mut k = vec![0u64; members.len().div_ceil(64)];
            for (i, &b) in members.iter().enumerate() {
                if b {
                    k[i / 64] |= 1 << (i % 64);
                }
            }
            k
        }

        fn run(&mut self, members: Vec<bool>, perp: Vec<bool>, gens: Vec<usize>) {
            if self.best >= self.ceiling {
                return;
            }
            let size = members.iter().filter(|&&b| b).count();
            if size > self.best {
                self.best = size;
                self.best_gens = gens.clone();
            }
            let perp_size = perp.iter().filter(|&&b| b).count();
            if perp_size <= self.best {
                return;
            }
            for x in 0..self.n {
                if members[x] || !perp[x] {
                    continue;
                }
                let next = self.close(&members, x);
                if !self.seen.insert(Self::key(&next)) {
                    continue;
                }
                let px = (self.perp_of)(x);
                let next_perp: Vec<bool> = perp.iter().zip(&px).map(|(a, b)| *a && *b).collect();
                let mut g = gens.clone();
                g.push(x);
                self.run(next, next_perp, g);
                if self.best >= self.ceiling {
                    return;
                }
            }
        }
    }

    let mut start = vec![false; n];
    start[0] = true;
    let mut search = Search {
        n,
        add: &add,
        perp_of: &perp_of,
        seen: HashSet::new(),
        best: 0,
        best_gens: vec![],
        ceiling: ceiling.to_usize().unwrap(),
    };
    search.run(start, vec![true; n], vec![]);
    let generators: Vec<Vec<BigInt>> = search.best_gens.iter().map(|&i| elems[i].clone()).collect();
    Ok(Subgroup { order: BigInt::from(search.best), generators })
}

/// Elements of a projective unit group that can be multiplied, inverted and
/// recognised as scalars.
pub trait ProjectiveUnit: Clone {
    fn unit_mul(&self, other: &Self) -> Result<Self>;
    fn unit_inverse(&self) -> Result<Self>;
    fn as_scalar(&self) -> Option<FieldElement>;
    fn describe(&self) -> String;
}

impl ProjectiveUnit for FieldMatrix {
    fn unit_mul(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)
    }

    fn unit_inverse(&self) -> Result<Self> {
        self.inverse()
    }

    fn as_scalar(&self) -> Option<FieldElement> {
        FieldMatrix::as_scalar(self)
    }

    fn describe(&self) -> String {
        format!("{self:?}")
    }
}

/// The pairing B(g, h) = [g̃, h̃] on the abelian group ⊕ Z/orders[i] whose
/// i-th generator lifts to `lifts[i]`; scalars are converted to Q/Z by the
/// discrete logarithm of roots of unity in the constant field.
pub fn commutator_pairing<T: ProjectiveUnit>(lifts: &[T], orders: &[u64]) -> Result<AlternatingPairing> {
    if lifts.len() != orders.len() {
        return Err(Error::DimensionMismatch("one order per lift".into()));
    }
    let group = FiniteAbelianGroup::from_u64(orders)?;
    let k = lifts.len();
    let inverses = lifts.iter().map(ProjectiveUnit::unit_inverse).collect::<Result<Vec<_>>>()?;
    let mut gram = vec![vec![QZ::zero(); k]; k];
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let c = lifts[i].unit_mul(&lifts[j])?.unit_mul(&inverses[i])?.unit_mul(&inverses[j])?;
            let s = c.as_scalar().ok_or_else(|| {
                Error::CommutatorNotScalar(format!("[g{}, g{}] = {}", i + 1, j + 1, c.describe()))
            })?;
            let field = s.field().clone();
            let (num, den) = field.root_of_unity_log(&s).ok_or_else(|| Error::RootOfUnityMissing {
                order: 0,
                field: format!("{} (commutator {s} is not a root of unity there)", field.descriptor()),
            })?;
            gram[i][j] = QZ::from_frac(num as i64, den as i64);
        }
    }
    AlternatingPairing::new(group, gram)
}

/// Clock and shift matrices X = diag(1, ζ, …, ζ^{n-1}) and Y: e_i ↦ e_{i+1},
/// with XYX⁻¹Y⁻¹ = ζ for the chosen primitive n-th root of unity ζ.
pub fn heisenberg_pair(field: &FieldRef, n: usize) -> Result<(FieldMatrix, FieldMatrix)> {
    let zeta = field.root_of_unity(n as u64)?;
    let diag = (0..n).map(|i| zeta.pow(i as i64)).collect::<Result<Vec<_>>>()?;
    let x = FieldMatrix::diagonal(field, &diag);
    let mut rows = vec![vec![field.zero(); n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        row[(i + n - 1) % n] = field.one();
    }
    Ok((x, FieldMatrix::from_rows(field, rows)?))
}

/// A random valid pairing on a group of order at most `max_order`.
pub fn random_alternating_pairing<R: Rng>(rng: &mut R, max_order: u64) -> AlternatingPairing {
    loop {
        let k = rng.gen_range(1..=4usize);
        let mut factors = vec![rng.gen_range(2..=16u64)];
        for _ in 1..k {
            let last = *factors.last().unwrap();
            factors.push(last * rng.gen_range(1..=3u64));
        }
        let order: u128 = factors.iter().map(|&d| d as u128).product();
        if order > max_order as u128 {
            continue;
        }
        let group = FiniteAbelianGroup::from_u64(&factors).unwrap();
        let mut gram = vec![vec![QZ::zero(); k]; k];
        for i in 0..k {
            for j in i + 1..k {
                let g = factors[i].gcd(&factors[j]);
                let num = rng.gen_range(0..g) as i64;
                gram[i][j] = QZ::from_frac(num, g as i64);
                gram[j][i] = gram[i][j].neg();
            }
        }
        return AlternatingPairing::new(group, gram).unwrap();
    }
}
