//! Quadratic forms q(x) = Σ_{i≤j} Q_ij x_i x_j over exact fields, the Arf
//! normal form in characteristic 2, and the Pfister forms
//! q_k = Σ_I a_I x_I² over Q(a_1, …, a_k).
//!
//! Pfister coordinates are indexed by bitmasks: bit i-1 of the index is set
//! when i ∈ I, so the order is ∅, {1}, {2}, {1,2}, {3}, …

use std::collections::HashMap;

use rand::Rng;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::scalars::{
    artin_schreier_image, Field, FieldDescriptor, FieldElement, FieldMatrix, FieldRef, MPoly, PolyRing,
};

pub const PFISTER_MAX_K: usize = 5;

/// Field sizes enumerated when reducing an Arf parameter.
pub const ARF_FIELD_CAP: u128 = 1 << 16;

#[derive(Clone, Debug)]
pub struct QuadraticForm {
    field: FieldRef,
    dim: usize,
    /// Upper triangular; entries below the diagonal are zero.
    coeffs: Vec<Vec<FieldElement>>,
}

impl PartialEq for QuadraticForm {
    fn eq(&self, other: &Self) -> bool {
        self.field.same_as(&other.field) && self.coeffs == other.coeffs
    }
}

impl QuadraticForm {
    /// Entries below the diagonal are folded into the upper triangle.
    pub fn new(field: &FieldRef, coeffs: Vec<Vec<FieldElement>>) -> Result<Self> {
        let dim = coeffs.len();
        if dim == 0 || coeffs.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch("coefficient matrix must be square and nonempty".into()));
        }
        let mut up = vec![vec![field.zero(); dim]; dim];
        for (i, row) in coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                let (a, b) = if i <= j { (i, j) } else { (j, i) };
                up[a][b] = up[a][b].try_add(c)?;
            }
        }
        Ok(QuadraticForm { field: field.clone(), dim, coeffs: up })
    }

    pub fn diagonal(field: &FieldRef, d: &[FieldElement]) -> Result<Self> {
        let n = d.len();
        let mut rows = vec![vec![field.zero(); n]; n];
        for (i, c) in d.iter().enumerate() {
            rows[i][i] = c.clone();
        }
        Self::new(field, rows)
    }

    pub fn from_i64(field: &FieldRef, rows: &[&[i64]]) -> Result<Self> {
        Self::new(field, rows.iter().map(|r| r.iter().map(|&c| field.from_i64(c)).collect()).collect())
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Q_ij for i ≤ j (zero below the diagonal).
    pub fn coeff(&self, i: usize, j: usize) -> &FieldElement {
        &self.coeffs[i][j]
    }

    pub fn eval(&self, x: &[FieldElement]) -> FieldElement {
        let mut acc = self.field.zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                let c = &self.coeffs[i][j];
                if !c.is_zero() && !x[i].is_zero() && !x[j].is_zero() {
                    acc = &acc + &(&(c * &x[i]) * &x[j]);
                }
            }
        }
        acc
    }

    /// Gram matrix of B_q(v, w) = q(v + w) - q(v) - q(w).
    pub fn gram(&self) -> FieldMatrix {
        let mut m = FieldMatrix::zero(&self.field, self.dim, self.dim);
        for i in 0..self.dim {
            m[(i, i)] = &self.coeffs[i][i] + &self.coeffs[i][i];
            for j in i + 1..self.dim {
                m[(i, j)] = self.coeffs[i][j].clone();
                m[(j, i)] = self.coeffs[i][j].clone();
            }
        }
        m
    }

    pub fn bilinear(&self, v: &[FieldElement], w: &[FieldElement]) -> FieldElement {
        let g = self.gram();
        let gw = g.mul_vec(w);
        v.iter().zip(&gw).fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.gram().det().is_zero()
    }

    /// The form y ↦ q(C y).
    pub fn transform(&self, c: &FieldMatrix) -> Result<QuadraticForm> {
        if c.rows() != self.dim {
            return Err(Error::DimensionMismatch(format!("change of basis must have {} rows", self.dim)));
        }
        let mut q = FieldMatrix::zero(&self.field, self.dim, self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                q[(i, j)] = self.coeffs[i][j].clone();
            }
        }
        let m = c.transpose().try_mul(&q)?.try_mul(c)?;
        let n = c.cols();
        let mut rows = vec![vec![self.field.zero(); n]; n];
        for i in 0..n {
            rows[i][i] = m[(i, i)].clone();
            for j in i + 1..n {
                rows[i][j] = &m[(i, j)] + &m[(j, i)];
            }
        }
        QuadraticForm::new(&self.field, rows)
    }

    pub fn scale(&self, c: &FieldElement) -> QuadraticForm {
        let coeffs = self.coeffs.iter().map(|r| r.iter().map(|x| x * c).collect()).collect();
        QuadraticForm { field: self.field.clone(), dim: self.dim, coeffs }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for i in 0..self.dim {
            for j in i..self.dim {
                if !self.coeffs[i][j].is_zero() {
                    m.insert(format!("{i},{j}"), self.coeffs[i][j].to_json());
                }
            }
        }
        json!({"field": self.field.descriptor().to_json(), "dim": self.dim, "coeffs": Value::Object(m)})
    }

    /// {"field": descriptor, "dim": n, "coeffs": {"i,j": element}} with
    /// 0-based indices.
    pub fn from_json(v: &Value, path: &str) -> Result<Self> {
        let obj = crate::json::object(v, path)?;
        let desc = FieldDescriptor::from_json(crate::json::field(obj, "field", path)?, &format!("{path}.field"))?;
        let field = Field::new(&desc)?;
        let dim = crate::json::usize_field(obj, "dim", path)?;
        if dim == 0 || dim > 64 {
            return Err(Error::schema(format!("{path}.dim"), "dimension must be between 1 and 64"));
        }
        let cpath = format!("{path}.coeffs");
        let coeffs = crate::json::object(crate::json::field(obj, "coeffs", path)?, &cpath)?;
        let mut rows = vec![vec![field.zero(); dim]; dim];
        for (k, c) in coeffs {
            let p = format!("{cpath}.{k}");
            let (i, j) = k
                .split_once(',')
                .and_then(|(i, j)| Some((i.trim().parse::<usize>().ok()?, j.trim().parse::<usize>().ok()?)))
                .ok_or_else(|| Error::schema(&p, "keys must be \"i,j\" index pairs"))?;
            if i >= dim || j >= dim {
                return Err(Error::schema(&p, "index out of range"));
            }
            rows[i][j] = field.element_from_json(c, &p)?;
        }
        QuadraticForm::new(&field, rows)
    }
}

/// The symmetric Gram matrix of B_q; alternating in characteristic 2.
pub fn associated_bilinear(q: &QuadraticForm) -> FieldMatrix {
    q.gram()
}

#[derive(Clone, Debug)]
pub struct Diagonalization {
    /// Columns are the new basis; q(C y) = Σ d_i y_i².
    pub change: FieldMatrix,
    pub diagonal: Vec<FieldElement>,
}

/// Orthogonal basis by Gram–Schmidt on B_q, characteristic ≠ 2.
pub fn diagonalize(q: &QuadraticForm) -> Result<Diagonalization> {
    if q.field.characteristic() == 2 {
        return Err(Error::CharTwo);
    }
    let n = q.dim;
    let f = &q.field;
    let mut basis: Vec<Vec<FieldElement>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { f.one() } else { f.zero() }).collect()).collect();
    for k in 0..n {
        let pivot = (k..n).find(|&i| !q.eval(&basis[i]).is_zero());
        match pivot {
            Some(i) => basis.swap(k, i),
            None => {
                let j = (k + 1..n)
                    .find(|&j| !q.bilinear(&basis[k], &basis[j]).is_zero())
                    .ok_or(Error::DegenerateForm)?;
                basis[k] = basis[k].iter().zip(&basis[j]).map(|(a, b)| a + b).collect();
            }
        }
        let bkk = q.bilinear(&basis[k], &basis[k]);
        for j in k + 1..n {
            let t = &q.bilinear(&basis[j], &basis[k]) / &bkk;
            if t.is_zero() {
                continue;
            }
            let bk = basis[k].clone();
            basis[j] = basis[j].iter().zip(&bk).map(|(a, b)| a - &(&t * b)).collect();
        }
    }
    let diagonal: Vec<FieldElement> = basis.iter().map(|v| q.eval(v)).collect();
    if diagonal.iter().any(FieldElement::is_zero) {
        return Err(Error::DegenerateForm);
    }
    let change = FieldMatrix::from_rows(f, basis)?.transpose();
    Ok(Diagonalization { change, diagonal })
}

#[derive(Clone, Debug)]
pub struct ArfNormalForm {
    /// The Arf parameter, reduced to a fixed representative of its class.
    pub a: FieldElement,
    /// q(C y) = y1² + y1y2 + a y2² + y3y4 + … + y_{2k-1}y_{2k}.
    pub change: FieldMatrix,
}

/// x1² + x1x2 + a x2² + x3x4 + … in dimension `dim`.
pub fn arf_target(field: &FieldRef, dim: usize, a: &FieldElement) -> Result<QuadraticForm> {
    let mut rows = vec![vec![field.zero(); dim]; dim];
    rows[0][0] = field.one();
    rows[0][1] = field.one();
    rows[1][1] = a.clone();
    for i in (2..dim).step_by(2) {
        rows[i][i + 1] = field.one();
    }
    QuadraticForm::new(field, rows)
}

fn require_perfect_char_two(field: &FieldRef) -> Result<()> {
    if field.characteristic() != 2 {
        return Err(Error::WrongCharacteristic(format!("{} does not have characteristic 2", field.descriptor())));
    }
    if field.nvars() > 0 {
        return Err(Error::WrongCharacteristic(format!("{} is not a finite field", field.descriptor())));
    }
    Ok(())
}

/// Representative of the class of `a` in F/℘(F), ℘(c) = c² - c: zero on the
/// image, otherwise the first field element (in index order) off the image.
fn arf_representative(a: &FieldElement) -> Result<FieldElement> {
    let field = a.field();
    let image = artin_schreier_image(field.descriptor(), ARF_FIELD_CAP)?;
    if image.contains(a) {
        return Ok(field.zero());
    }
    Ok(field.elements(ARF_FIELD_CAP)?.into_iter().find(|c| !image.contains(c)).expect("cokernel is nontrivial"))
}

/// Greedy symplectic splitting of B_q, then Artin–Schreier reduction of the
/// single remaining anisotropic plane.
pub fn arf_normal_form(q: &QuadraticForm) -> Result<ArfNormalForm> {
    let field = q.field.clone();
    require_perfect_char_two(&field)?;
    if q.dim % 2 == 1 || !q.is_nondegenerate() {
        return Err(Error::DegenerateForm);
    }
    let n = q.dim;
    let add = |v: &[FieldElement], w: &[FieldElement]| -> Vec<FieldElement> { v.iter().zip(w).map(|(a, b)| a + b).collect() };
    let mul = |c: &FieldElement, v: &[FieldElement]| -> Vec<FieldElement> { v.iter().map(|a| c * a).collect() };

    let mut rest: Vec<Vec<FieldElement>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect()).collect();
    let mut planes: Vec<(Vec<FieldElement>, Vec<FieldElement>)> = Vec::new();
    while !rest.is_empty() {
        let e = rest.remove(0);
        let j = rest.iter().position(|w| !q.bilinear(&e, w).is_zero()).ok_or(Error::DegenerateForm)?;
        let f0 = rest.remove(j);
        let f = mul(&q.bilinear(&e, &f0).inv()?, &f0);
        // project onto the orthogonal complement of <e, f>; signs vanish in char 2
        rest = rest
            .into_iter()
            .map(|w| add(&add(&w, &mul(&q.bilinear(&w, &f), &e)), &mul(&q.bilinear(&w, &e), &f)))
            .collect();
        planes.push((e, f));
    }

    // normalize each plane to xy (hyperbolic) or x² + xy + a y²
    let mut hyperbolic = Vec::new();
    let mut anisotropic: Vec<(Vec<FieldElement>, Vec<FieldElement>, FieldElement)> = Vec::new();
    for (mut e, mut f) in planes {
        if q.eval(&e).is_zero() || q.eval(&f).is_zero() {
            if !q.eval(&e).is_zero() {
                std::mem::swap(&mut e, &mut f);
            }
            let beta = q.eval(&f);
            f = add(&f, &mul(&beta, &e));
            hyperbolic.push((e, f));
        } else {
            let alpha = q.eval(&e);
            let s = alpha.nth_root(2).expect("finite fields of characteristic 2 are perfect");
            let a = &alpha * &q.eval(&f);
            e = mul(&s.inv()?, &e);
            f = mul(&s, &f);
            anisotropic.push((e, f, a));
        }
    }
    // two planes x² + xy + a y² ⊥ x² + xy + b y² become a hyperbolic plane
    // ⊥ x² + xy + (a + b) y²
    while anisotropic.len() > 1 {
        let (e2, f2, b) = anisotropic.pop().unwrap();
        let (e1, f1, a) = anisotropic.pop().unwrap();
        let big_e = add(&e1, &e2);
        let big_f = add(&f1, &mul(&a, &big_e));
        hyperbolic.push((big_e, big_f));
        anisotropic.push((e2, add(&f1, &f2), &a + &b));
    }
    let (e, f, a) = match anisotropic.pop() {
        Some(p) => p,
        None => {
            let (he, hf) = hyperbolic.remove(0);
            (add(&he, &hf), hf, field.zero())
        }
    };
    let r = arf_representative(&a)?;
    let target = &a + &r;
    let c = field
        .elements(ARF_FIELD_CAP)?
        .into_iter()
        .find(|c| &(c * c) + c == target)
        .expect("a and its representative differ by an Artin-Schreier value");
    let f = add(&f, &mul(&c, &e));
    let mut cols = vec![e, f];
    for (he, hf) in hyperbolic {
        cols.push(he);
        cols.push(hf);
    }
    let change = FieldMatrix::from_rows(&field, cols)?.transpose();
    let normal = q.transform(&change)?;
    if normal != arf_target(&field, n, &r)? {
        return Err(Error::ConsistencyAlarm("Arf change of basis does not reach the normal form".into()));
    }
    Ok(ArfNormalForm { a: r, change })
}

/// Whether x1² + x1x2 + a x2² and x1² + x1x2 + a′ x2² are equivalent, i.e.
/// a - a′ lies in the image of c ↦ c² - c.
pub fn arf_invariant_class(a: &FieldElement, a2: &FieldElement, cap: u128) -> Result<bool> {
    let field = a.field();
    require_perfect_char_two(field)?;
    let image = artin_schreier_image(field.descriptor(), cap)?;
    Ok(image.contains(&a.try_sub(a2)?))
}

/// A projective similitude g with q∘g = λ q.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveIsometry {
    pub matrix: FieldMatrix,
    pub lambda: FieldElement,
}

impl ProjectiveIsometry {
    /// Computes λ and checks q∘g = λ q as a polynomial identity.
    pub fn new(q: &QuadraticForm, g: FieldMatrix) -> Result<Self> {
        let lambda = similitude_factor(q, &g)?;
        Ok(ProjectiveIsometry { matrix: g, lambda })
    }

    /// Scaled so the first nonzero entry is 1; λ changes by the square.
    pub fn normalized(&self) -> Self {
        let matrix = self.matrix.projective_normalize();
        let lead = self.matrix.entries().iter().find(|e| !e.is_zero()).cloned();
        let lambda = match lead {
            Some(c) => &self.lambda / &(&c * &c),
            None => self.lambda.clone(),
        };
        ProjectiveIsometry { matrix, lambda }
    }

    pub fn to_json(&self) -> Value {
        json!({"matrix": self.matrix.to_json(), "lambda": self.lambda.to_string()})
    }
}

fn similitude_factor(q: &QuadraticForm, g: &FieldMatrix) -> Result<FieldElement> {
    if g.rows() != q.dim || g.cols() != q.dim {
        return Err(Error::DimensionMismatch(format!("isometry must be {0}x{0}", q.dim)));
    }
    let qg = q.transform(g)?;
    let (i, j) = (0..q.dim)
        .flat_map(|i| (i..q.dim).map(move |j| (i, j)))
        .find(|&(i, j)| !q.coeffs[i][j].is_zero())
        .ok_or(Error::DegenerateForm)?;
    let lambda = &qg.coeffs[i][j] / &q.coeffs[i][j];
    if qg != q.scale(&lambda) {
        return Err(Error::NotIsometry("q∘g is not a scalar multiple of q".into()));
    }
    Ok(lambda)
}

/// For g in O(q) of order p = char K > 2, a nonzero v1 with g v1 = v1 and
/// some v2 with g v2 = v1 + v2; then q(v1) = 0.
pub fn extract_isotropic_from_order_p(q: &QuadraticForm, g: &FieldMatrix) -> Result<Vec<FieldElement>> {
    let p = q.field.characteristic();
    if p <= 2 {
        return Err(Error::NotOrderP(format!("characteristic {p} is not an odd prime")));
    }
    let lambda = similitude_factor(q, g)?;
    if !lambda.is_one() {
        return Err(Error::NotIsometry(format!("q∘g = ({lambda})·q")));
    }
    if g.is_identity() || !g.pow(p).is_identity() {
        return Err(Error::NotOrderP(format!("g does not have order {p}")));
    }
    let n = q.dim;
    let nil = g.sub(&FieldMatrix::identity(&q.field, n));
    // largest j with N^j ≠ 0; N^p = (g - 1)^p = g^p - 1 = 0
    let mut top = nil.clone();
    loop {
        let next = top.try_mul(&nil)?;
        if next.entries().iter().all(FieldElement::is_zero) {
            break;
        }
        top = next;
    }
    let col = (0..n).find(|&c| top.column(c).iter().any(|e| !e.is_zero())).expect("N^j is nonzero");
    let v1 = top.column(col);
    let lead = v1.iter().find(|e| !e.is_zero()).unwrap().inv()?;
    let v1: Vec<FieldElement> = v1.iter().map(|e| e * &lead).collect();
    if !q.eval(&v1).is_zero() {
        return Err(Error::ConsistencyAlarm("fixed vector of a Jordan chain is not isotropic".into()));
    }
    Ok(v1)
}

#[derive(Clone, Debug)]
pub struct InvolutionReport {
    pub lambda: FieldElement,
    pub projective_order: u64,
    /// For lifts in O(q): the order of g and its eigenvalues with multiplicity.
    pub order: Option<u64>,
    pub eigenvalues: Vec<(FieldElement, usize)>,
    pub squares_to_identity: Option<bool>,
}

impl InvolutionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "lambda": self.lambda.to_string(),
            "projective_order": self.projective_order,
            "order": self.order,
            "eigenvalues": self.eigenvalues.iter().map(|(e, m)| json!({"value": e.to_string(), "multiplicity": m})).collect::<Vec<_>>(),
            "squares_to_identity": self.squares_to_identity,
        })
    }
}

/// Search bound for orders in [`involution_check`].
pub const INVOLUTION_ORDER_BOUND: u64 = 64;

/// For g preserving an anisotropic q up to scalars (char ≠ 2): an honest
/// isometry diagonalizes with eigenvalues ±1, so g² = 1; a projective
/// element has order 1, 2 or 4. Violations mean q is not anisotropic.
pub fn involution_check(q: &QuadraticForm, g: &FieldMatrix) -> Result<InvolutionReport> {
    if q.field.characteristic() == 2 {
        return Err(Error::CharTwo);
    }
    let lambda = similitude_factor(q, g)?;
    let projective_order = (1..=8u64)
        .find(|&k| g.pow(k).as_scalar().is_some())
        .ok_or_else(|| Error::OrderExceedsBound("projective order exceeds 8".into()))?;
    if ![1, 2, 4].contains(&projective_order) {
        return Err(Error::OrderExceedsBound(format!("projective order {projective_order} is not 1, 2 or 4")));
    }
    if !lambda.is_one() {
        return Ok(InvolutionReport { lambda, projective_order, order: None, eigenvalues: vec![], squares_to_identity: None });
    }
    let order = (1..=INVOLUTION_ORDER_BOUND)
        .find(|&k| g.pow(k).is_identity())
        .ok_or_else(|| Error::OrderExceedsBound(format!("order exceeds {INVOLUTION_ORDER_BOUND}")))?;
    let field = &q.field;
    let n = q.dim;
    let mut candidates: Vec<FieldElement> = Vec::new();
    for d in (1..=order).filter(|d| order % d == 0) {
        if let Ok(z) = field.root_of_unity(d) {
            for i in 0..d {
                let e = z.pow(i as i64)?;
                if !candidates.contains(&e) {
                    candidates.push(e);
                }
            }
        }
    }
    let mut eigenvalues = Vec::new();
    let mut total = 0;
    for e in candidates {
        let m = g.sub(&FieldMatrix::scalar(field, n, &e)).kernel().len();
        if m > 0 {
            total += m;
            eigenvalues.push((e, m));
        }
    }
    if total < n {
        return Err(Error::NotDiagonalizable);
    }
    let one = field.one();
    if let Some((e, _)) = eigenvalues.iter().find(|(e, _)| *e != one && *e != one.neg()) {
        return Err(Error::OrderExceedsBound(format!("eigenvalue {e} is not ±1, so q is isotropic")));
    }
    let squares_to_identity = g.pow(2).is_identity();
    Ok(InvolutionReport { lambda, projective_order, order: Some(order), eigenvalues, squares_to_identity: Some(squares_to_identity) })
}

/// Q(a_1, …, a_k).
pub fn pfister_field(k: usize) -> Result<FieldRef> {
    check_k(k, 1, "k must be between 1 and 5")?;
    let names: Vec<String> = (1..=k).map(|i| format!("a{i}")).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    Field::new(&FieldDescriptor::function_field(FieldDescriptor::Rationals, &refs))
}

fn check_k(k: usize, min: usize, reason: &str) -> Result<()> {
    if k < min || k > PFISTER_MAX_K {
        return Err(Error::KOutOfRange { k, reason: reason.into() });
    }
    Ok(())
}

/// a_I = Π_{i∈I} a_i for the subset with bitmask `mask`.
pub fn subset_coefficient(field: &FieldRef, mask: usize) -> FieldElement {
    (0..field.nvars()).filter(|i| mask >> i & 1 == 1).fold(field.one(), |acc, i| &acc * &field.var(i))
}

#[derive(Clone, Debug)]
pub struct Pfister {
    pub k: usize,
    pub field: FieldRef,
    pub form: QuadraticForm,
    /// Negates x_{1} and x_{2}; needs k ≥ 2.
    pub sigma: Option<ProjectiveIsometry>,
    /// x_I ↦ a_Ī x_Ī, with λ = a_{1..k}.
    pub tau: ProjectiveIsometry,
}

pub fn pfister_build(k: usize) -> Result<Pfister> {
    let field = pfister_field(k)?;
    let n = 1usize << k;
    let full = n - 1;
    let coeffs: Vec<FieldElement> = (0..n).map(|m| subset_coefficient(&field, m)).collect();
    let form = QuadraticForm::diagonal(&field, &coeffs)?;
    let mut t = FieldMatrix::zero(&field, n, n);
    for i in 0..n {
        t[(i, full ^ i)] = coeffs[full ^ i].clone();
    }
    let tau = ProjectiveIsometry::new(&form, t)?;
    let sigma = if k >= 2 {
        let mut d = vec![field.one(); n];
        d[0b01] = field.one().neg();
        d[0b10] = field.one().neg();
        Some(ProjectiveIsometry::new(&form, FieldMatrix::diagonal(&field, &d))?)
    } else {
        None
    };
    Ok(Pfister { k, field, form, sigma, tau })
}

/// σ of the Pfister example; `KOutOfRange` for k = 1.
pub fn pfister_sigma(k: usize) -> Result<ProjectiveIsometry> {
    check_k(k, 2, "σ negates x_{1} and x_{2}, which needs k ≥ 2")?;
    Ok(pfister_build(k)?.sigma.expect("k >= 2"))
}

#[derive(Clone, Debug)]
pub struct PfisterClosure {
    pub k: usize,
    /// Projectively normalized matrices; index 0 is the identity.
    pub elements: Vec<FieldMatrix>,
    pub table: Vec<Vec<usize>>,
    pub sigma: usize,
    pub tau: usize,
    pub iota: usize,
    pub projective_orders: Vec<u64>,
}

impl PfisterClosure {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (0..n).all(|j| self.table[i][j] == self.table[j][i]))
    }

    pub fn sigma_tau_commute(&self) -> bool {
        self.table[self.sigma][self.tau] == self.table[self.tau][self.sigma]
    }

    /// Whether the order divides 8^{n-1} for n = 2^k.
    pub fn order_divides_bound(&self) -> bool {
        let bound = num_traits::pow(num_bigint::BigInt::from(8), (1usize << self.k) - 1);
        (bound % self.order()) == num_bigint::BigInt::from(0)
    }

    pub fn orders_in_1_2_4(&self) -> bool {
        self.projective_orders.iter().all(|o| [1, 2, 4].contains(o))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "order": self.order(),
            "table": self.table,
            "sigma": self.sigma,
            "tau": self.tau,
            "iota": self.iota,
            "iota_is_identity": self.iota == 0,
            "iota_squared_is_identity": self.table[self.iota][self.iota] == 0,
            "sigma_tau_commute": self.sigma_tau_commute(),
            "order_divides_8_pow_n_minus_1": self.order_divides_bound(),
            "projective_orders": self.projective_orders,
            "orders_in_1_2_4": self.orders_in_1_2_4(),
        })
    }
}

/// Closure of ⟨σ, τ⟩ in PO(q_k) with its multiplication table.
pub fn pfister_group_closure(k: usize) -> Result<PfisterClosure> {
    check_k(k, 2, "the closure needs σ, so 2 ≤ k ≤ 5")?;
    let pf = pfister_build(k)?;
    let field = pf.field.clone();
    let n = 1usize << k;
    let gens = [pf.sigma.as_ref().unwrap().matrix.projective_normalize(), pf.tau.matrix.projective_normalize()];
    let mut elements = vec![FieldMatrix::identity(&field, n)];
    let mut index: HashMap<FieldMatrix, usize> = HashMap::new();
    index.insert(elements[0].clone(), 0);
    let mut i = 0;
    while i < elements.len() {
        for g in &gens {
            let p = elements[i].try_mul(g)?.projective_normalize();
            if !index.contains_key(&p) {
                if elements.len() >= 4096 {
                    return Err(Error::ClosureCapExceeded { cap: 4096 });
                }
                index.insert(p.clone(), elements.len());
                elements.push(p);
            }
        }
        i += 1;
    }
    let m = elements.len();
    let mut table = vec![vec![0usize; m]; m];
    for a in 0..m {
        for b in 0..m {
            let p = elements[a].try_mul(&elements[b])?.projective_normalize();
            table[a][b] = *index.get(&p).ok_or_else(|| Error::ConsistencyAlarm("closure is not closed".into()))?;
        }
    }
    let sigma = index[&gens[0]];
    let tau = index[&gens[1]];
    let st = table[sigma][tau];
    let iota = table[st][st];
    let projective_orders = (0..m)
        .map(|a| {
            let mut cur = a;
            let mut k = 1u64;
            while cur != 0 {
                cur = table[cur][a];
                k += 1;
            }
            k
        })
        .collect();
    Ok(PfisterClosure { k, elements, table, sigma, tau, iota, projective_orders })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Half {
    /// Subsets without the current index.
    Even,
    /// Subsets containing it.
    Odd,
}

#[derive(Clone, Debug)]
pub struct DescentStep {
    /// The variable a_j being eliminated.
    pub variable: usize,
    pub half: Half,
    /// deg_{a_j} of q_j at the candidate; its parity fixes the half.
    pub degree: u32,
}

#[derive(Clone, Debug)]
pub struct Refutation {
    pub k: usize,
    pub value: FieldElement,
    /// Leading coefficients down to a nonzero constant c with q_0(c) = c² ≠ 0.
    pub trace: Vec<DescentStep>,
    pub base_constant: String,
}

impl Refutation {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "value": self.value.to_string(),
            "refuted": !self.value.is_zero(),
            "trace": self.trace.iter().map(|s| json!({
                "variable": format!("a{}", s.variable),
                "half": match s.half { Half::Even => "without", Half::Odd => "with" },
                "degree": s.degree,
            })).collect::<Vec<_>>(),
            "base_constant": self.base_constant,
        })
    }
}

/// Shows q_k(p) ≠ 0 for a nonzero candidate p, both by evaluation and by the
/// degree-parity descent: in a_k, the even half contributes even degrees and
/// the odd half odd degrees, so the top coefficient is q_{k-1} at the top
/// coefficients of one half, which is again a nonzero tuple.
pub fn pfister_refute_point(k: usize, candidate: &[FieldElement]) -> Result<Refutation> {
    let pf = pfister_build(k)?;
    let n = 1usize << k;
    if candidate.len() != n {
        return Err(Error::DimensionMismatch(format!("candidate must have {n} coordinates")));
    }
    if let Some(c) = candidate.iter().find(|c| !c.field().same_as(&pf.field)) {
        return Err(Error::DescriptorMismatch {
            left: pf.field.descriptor().to_string(),
            right: c.field().descriptor().to_string(),
        });
    }
    if candidate.iter().all(FieldElement::is_zero) {
        return Err(Error::AllZeroCandidate);
    }
    let value = pf.form.eval(candidate);
    if value.is_zero() {
        return Err(Error::ConsistencyAlarm(format!("q_{k} vanishes at a nonzero point")));
    }
    // clear denominators; q is homogeneous so this keeps the zero locus
    let ring: &PolyRing = pf.field.ring();
    let common = candidate.iter().fold(ring.one(), |acc, c| ring.mul(&acc, c.denominator()));
    let mut tuple: Vec<MPoly> = candidate
        .iter()
        .map(|c| ring.div_exact(&ring.mul(c.numerator(), &common), c.denominator()).expect("denominator divides"))
        .collect();
    let mut trace = Vec::new();
    for j in (1..=k).rev() {
        let half = tuple.len() / 2;
        let var = j - 1;
        let top = |part: &[MPoly]| part.iter().filter(|p| !p.is_zero()).map(|p| p.degree_in(var)).max();
        let (even, odd) = (top(&tuple[..half]), top(&tuple[half..]));
        let (which, m, degree) = match (even, odd) {
            (Some(e), Some(o)) if 2 * e > 2 * o + 1 => (Half::Even, e, 2 * e),
            (Some(e), None) => (Half::Even, e, 2 * e),
            (_, Some(o)) => (Half::Odd, o, 2 * o + 1),
            (None, None) => return Err(Error::ConsistencyAlarm("descent reached an all-zero tuple".into())),
        };
        let part = if which == Half::Even { &tuple[..half] } else { &tuple[half..] };
        tuple = part.iter().map(|p| ring.coeff_in(p, var, m)).collect();
        trace.push(DescentStep { variable: j, half: which, degree });
    }
    let c = &tuple[0];
    if c.is_zero() || !c.is_constant() {
        return Err(Error::ConsistencyAlarm("descent did not end at a nonzero constant".into()));
    }
    let base_constant = pf.field.from_poly(c.clone()).to_string();
    Ok(Refutation { k, value, trace, base_constant })
}

/// A random nonzero candidate: each coordinate a polynomial in a_1..a_k of
/// total degree ≤ `max_degree` with small integer coefficients.
pub fn random_pfister_candidate<R: Rng>(rng: &mut R, k: usize, max_degree: u32) -> Result<Vec<FieldElement>> {
    let field = pfister_field(k)?;
    let n = 1usize << k;
    loop {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let mut acc = field.zero();
            for _ in 0..rng.gen_range(0..=3) {
                let mut mono = field.from_i64(rng.gen_range(-5..=5));
                let mut budget = rng.gen_range(0..=max_degree);
                while budget > 0 {
                    let v = rng.gen_range(0..k);
                    mono = &mono * &field.var(v);
                    budget -= 1;
                }
                acc = &acc + &mono;
            }
            out.push(acc);
        }
        if out.iter().any(|c| !c.is_zero()) {
            return Ok(out);
        }
    }
}

/// Every check on the Pfister quadric for one k, plus refutation of seeded
/// random candidate points.
#[derive(Clone, Debug)]
pub struct PfisterVerification {
    pub k: usize,
    pub sigma_involution: bool,
    pub tau_involution: bool,
    pub sigma_tau_commute: bool,
    pub iota_nontrivial: bool,
    pub iota_squared_trivial: bool,
    pub tau_similitude: bool,
    pub sigma_isometry: bool,
    pub closure_order: usize,
    pub order_divides_bound: bool,
    pub orders_in_1_2_4: bool,
    pub trials: usize,
    pub refuted: usize,
    pub seed: u64,
}

impl PfisterVerification {
    /// For k = 2 the two lifts commute; from k = 3 on ι = [σ, τ] must be a
    /// nontrivial involution.
    pub fn passes(&self) -> bool {
        let noncommuting = self.k < 3 || (!self.sigma_tau_commute && self.iota_nontrivial);
        self.sigma_involution
            && self.tau_involution
            && noncommuting
            && self.iota_squared_trivial
            && self.tau_similitude
            && self.sigma_isometry
            && self.order_divides_bound
            && self.orders_in_1_2_4
            && self.refuted == self.trials
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "n": 1usize << self.k,
            "sigma_squared_is_identity": self.sigma_involution,
            "tau_squared_is_identity": self.tau_involution,
            "sigma_tau_commute": self.sigma_tau_commute,
            "iota_nontrivial": self.iota_nontrivial,
            "iota_squared_is_identity": self.iota_squared_trivial,
            "q_tau_equals_a_full_q": self.tau_similitude,
            "q_sigma_equals_q": self.sigma_isometry,
            "closure_order": self.closure_order.to_string(),
            "closure_order_divides_8_pow_n_minus_1": self.order_divides_bound,
            "projective_orders_in_1_2_4": self.orders_in_1_2_4,
            "seed": self.seed,
            "trials": self.trials,
            "refuted": self.refuted,
            "pass": self.passes(),
        })
    }
}

pub fn pfister_verification(k: usize, trials: usize, max_degree: u32, seed: u64) -> Result<PfisterVerification> {
    use rand::SeedableRng;
    let pf = pfister_build(k)?;
    let closure = pfister_group_closure(k)?;
    let full = subset_coefficient(&pf.field, (1 << k) - 1);
    let sigma = pf.sigma.as_ref().expect("k ≥ 2");
    let t = &closure.table;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut refuted = 0;
    for _ in 0..trials {
        let cand = random_pfister_candidate(&mut rng, k, max_degree)?;
        if !pfister_refute_point(k, &cand)?.value.is_zero() {
            refuted += 1;
        }
    }
    Ok(PfisterVerification {
        k,
        sigma_involution: t[closure.sigma][closure.sigma] == 0,
        tau_involution: t[closure.tau][closure.tau] == 0,
        sigma_tau_commute: closure.sigma_tau_commute(),
        iota_nontrivial: closure.iota != 0,
        iota_squared_trivial: t[closure.iota][closure.iota] == 0,
        tau_similitude: pf.form.transform(&pf.tau.matrix)? == pf.form.scale(&full),
        sigma_isometry: pf.form.transform(&sigma.matrix)? == pf.form,
        closure_order: closure.order(),
        order_divides_bound: closure.order_divides_bound(),
        orders_in_1_2_4: closure.orders_in_1_2_4(),
        trials,
        refuted,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(desc: FieldDescriptor) -> FieldRef {
        Field::new(&desc).unwrap()
    }

    #[test]
    fn gram_examples() {
        let q = Field::rationals();
        let x2 = QuadraticForm::from_i64(&q, &[&[1]]).unwrap();
        assert_eq!(x2.gram(), FieldMatrix::from_i64(&q, &[&[2]]));
        let f2 = f(FieldDescriptor::PrimeField(2));
        let h = QuadraticForm::from_i64(&f2, &[&[0, 1], &[0, 0]]).unwrap();
        assert_eq!(h.gram(), FieldMatrix::from_i64(&f2, &[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn diagonalize_examples() {
        let q = Field::rationals();
        let h = QuadraticForm::from_i64(&q, &[&[0, 1], &[0, 0]]).unwrap();
        let d = diagonalize(&h).unwrap();
        assert_eq!(h.transform(&d.change).unwrap(), QuadraticForm::diagonal(&q, &d.diagonal).unwrap());
        // diag(1, -1/4) ~ diag(1, -1) up to squares
        assert_eq!(d.diagonal[0], q.one());
        assert!((&d.diagonal[1] * &q.from_i64(-4)).nth_root(2).is_some());
        let diag = QuadraticForm::from_i64(&q, &[&[3, 0], &[0, 5]]).unwrap();
        assert!(diagonalize(&diag).unwrap().change.is_identity());
        let pf = pfister_build(2).unwrap();
        let d = diagonalize(&pf.form).unwrap();
        assert!(d.change.is_identity());
        assert_eq!(d.diagonal[3], &pf.field.var(0) * &pf.field.var(1));
    }

    #[test]
    fn arf_examples() {
        let f2 = f(FieldDescriptor::PrimeField(2));
        let h = QuadraticForm::from_i64(&f2, &[&[0, 1], &[0, 0]]).unwrap();
        assert!(arf_normal_form(&h).unwrap().a.is_zero());
        let an = QuadraticForm::from_i64(&f2, &[&[1, 1], &[0, 1]]).unwrap();
        assert!(arf_normal_form(&an).unwrap().a.is_one());
        assert!(!arf_invariant_class(&f2.zero(), &f2.one(), 16).unwrap());
        let f4 = f(FieldDescriptor::FiniteField { p: 2, m: 2 });
        assert!(arf_invariant_class(&f4.zero(), &f4.one(), 16).unwrap());
        let q = Field::rationals();
        assert!(matches!(arf_normal_form(&QuadraticForm::from_i64(&q, &[&[0, 1], &[0, 0]]).unwrap()), Err(Error::WrongCharacteristic(_))));
    }

    #[test]
    fn isotropic_from_cycles() {
        for p in [3i64, 5] {
            let fp = f(FieldDescriptor::PrimeField(p as u64));
            let n = p as usize;
            let q = QuadraticForm::diagonal(&fp, &vec![fp.one(); n]).unwrap();
            let mut g = FieldMatrix::zero(&fp, n, n);
            for i in 0..n {
                g[((i + 1) % n, i)] = fp.one();
            }
            let v = extract_isotropic_from_order_p(&q, &g).unwrap();
            assert_eq!(v, vec![fp.one(); n]);
            assert!(q.eval(&v).is_zero());
        }
        let f3 = f(FieldDescriptor::PrimeField(3));
        let q = QuadraticForm::diagonal(&f3, &[f3.one(), f3.one()]).unwrap();
        let swap = FieldMatrix::from_i64(&f3, &[&[0, 1], &[1, 0]]);
        assert!(matches!(extract_isotropic_from_order_p(&q, &swap), Err(Error::NotOrderP(_))));
    }

    #[test]
    fn pfister_identities() {
        for k in 1..=4 {
            let pf = pfister_build(k).unwrap();
            let full = subset_coefficient(&pf.field, (1 << k) - 1);
            assert_eq!(pf.tau.lambda, full);
            assert_eq!(pf.form.transform(&pf.tau.matrix).unwrap(), pf.form.scale(&full));
            if let Some(s) = &pf.sigma {
                assert!(s.lambda.is_one());
                assert_eq!(pf.form.transform(&s.matrix).unwrap(), pf.form);
            }
        }
        let q1 = pfister_build(1).unwrap().form;
        assert!(q1.coeff(0, 0).is_one());
        assert_eq!(*q1.coeff(1, 1), q1.field().var(0));
        assert!(matches!(pfister_sigma(1), Err(Error::KOutOfRange { .. })));
        assert!(matches!(pfister_build(6), Err(Error::KOutOfRange { .. })));
    }

    #[test]
    fn pfister_closure_k3() {
        let c = pfister_group_closure(3).unwrap();
        assert_eq!(c.order(), 8);
        assert!(!c.sigma_tau_commute());
        assert_ne!(c.iota, 0);
        assert_eq!(c.table[c.iota][c.iota], 0);
        assert!(c.order_divides_bound());
        assert!(c.orders_in_1_2_4());
    }

    #[test]
    fn involutions() {
        let pf = pfister_build(3).unwrap();
        let s = pf.sigma.unwrap();
        let r = involution_check(&pf.form, &s.matrix).unwrap();
        assert_eq!(r.squares_to_identity, Some(true));
        let st = s.matrix.try_mul(&pf.tau.matrix).unwrap();
        let iota = st.try_mul(&st).unwrap();
        let r = involution_check(&pf.form, &iota).unwrap();
        assert_eq!(r.projective_order, 2);
        let q = Field::rationals();
        let form = QuadraticForm::from_i64(&q, &[&[1, 0], &[0, 1]]).unwrap();
        let r = involution_check(&form, &FieldMatrix::from_i64(&q, &[&[1, 0], &[0, -1]])).unwrap();
        assert_eq!(r.order, Some(2));
    }

    #[test]
    fn refutations() {
        let f1 = pfister_field(1).unwrap();
        let r = pfister_refute_point(1, &[f1.one(), f1.zero()]).unwrap();
        assert!(r.value.is_one());
        let f2 = pfister_field(2).unwrap();
        let a2 = f2.var(1);
        let r = pfister_refute_point(2, &[a2.clone(), f2.zero(), f2.one(), f2.zero()]).unwrap();
        assert_eq!(r.value, &(&a2 * &a2) + &a2);
        assert!(matches!(pfister_refute_point(2, &[f2.zero(), f2.zero(), f2.zero(), f2.zero()]), Err(Error::AllZeroCandidate)));
    }
}
