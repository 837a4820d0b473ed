//! Sparse multivariate polynomials over a constant field, lex order.
//!
//! Monomials are exponent vectors compared lexicographically with the first
//! declared variable most significant, so the leading term is the last key
//! of the map.

use std::collections::BTreeMap;

use super::base::{BaseField, Coeff};

pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MPoly {
    pub(crate) terms: BTreeMap<Monomial, Coeff>,
}

impl MPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> std::collections::btree_map::Iter<'_, Monomial, Coeff> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn leading(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.iter().next_back()
    }

    pub fn constant_term(&self) -> Option<&Coeff> {
        self.terms.iter().next().filter(|(m, _)| m.iter().all(|&e| e == 0)).map(|(_, c)| c)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m[var] > 0)
    }
}

/// Polynomial arithmetic over `base` in `nvars` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyRing {
    pub base: BaseField,
    pub nvars: usize,
}

impl PolyRing {
    pub fn new(base: BaseField, nvars: usize) -> Self {
        PolyRing { base, nvars }
    }

    pub fn zero(&self) -> MPoly {
        MPoly { terms: BTreeMap::new() }
    }

    pub fn one(&self) -> MPoly {
        self.constant(self.base.one())
    }

    pub fn constant(&self, c: Coeff) -> MPoly {
        self.monomial(vec![0; self.nvars], c)
    }

    pub fn monomial(&self, m: Monomial, c: Coeff) -> MPoly {
        debug_assert_eq!(m.len(), self.nvars);
        let mut terms = BTreeMap::new();
        if !self.base.is_zero(&c) {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn var(&self, i: usize) -> MPoly {
        let mut m = vec![0; self.nvars];
        m[i] = 1;
        self.monomial(m, self.base.one())
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, Coeff)>) -> MPoly {
        let mut out = self.zero();
        for (m, c) in terms {
            self.add_term(&mut out, m, &c);
        }
        out
    }

    fn add_term(&self, p: &mut MPoly, m: Monomial, c: &Coeff) {
        if self.base.is_zero(c) {
            return;
        }
        match p.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = self.base.add(e.get(), c);
                if self.base.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let (mut out, other) = if a.terms.len() >= b.terms.len() { (a.clone(), b) } else { (b.clone(), a) };
        for (m, c) in &other.terms {
            self.add_term(&mut out, m.clone(), c);
        }
        out
    }

    pub fn neg(&self, a: &MPoly) -> MPoly {
        MPoly { terms: a.terms.iter().map(|(m, c)| (m.clone(), self.base.neg(c))).collect() }
    }

    pub fn sub(&self, a: &MPoly, b: &MPoly) -> MPoly {
        let mut out = a.clone();
        for (m, c) in &b.terms {
            self.add_term(&mut out, m.clone(), &self.base.neg(c));
        }
        out
    }

    pub fn scale(&self, a: &MPoly, c: &Coeff) -> MPoly {
        if self.base.is_zero(c) {
            return self.zero();
        }
        MPoly { terms: a.terms.iter().map(|(m, x)| (m.clone(), self.base.mul(x, c))).collect() }
    }

    pub fn mul(&self, a: &MPoly, b: &MPoly) -> MPoly {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if a.is_constant() {
            return self.scale(b, a.constant_term().unwrap());
        }
        if b.is_constant() {
            return self.scale(a, b.constant_term().unwrap());
        }
        let mut out = self.zero();
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                self.add_term(&mut out, m, &self.base.mul(ca, cb));
            }
        }
        out
    }

    pub fn pow(&self, a: &MPoly, mut e: u64) -> MPoly {
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

    /// Multiplies by the monomial x^m.
    fn shift(&self, a: &MPoly, m: &Monomial) -> MPoly {
        MPoly {
            terms: a
                .terms
                .iter()
                .map(|(k, c)| (k.iter().zip(m).map(|(x, y)| x + y).collect(), c.clone()))
                .collect(),
        }
    }

    /// Divides by the leading coefficient so the lex-leading coefficient is 1.
    pub fn monic(&self, a: &MPoly) -> MPoly {
        match a.leading() {
            None => self.zero(),
            Some((_, lc)) => {
                if self.base.is_one(lc) {
                    a.clone()
                } else {
                    let inv = self.base.inv(lc).expect("nonzero leading coefficient");
                    self.scale(a, &inv)
                }
            }
        }
    }

    /// Exact division; `None` if `b` does not divide `a`.
    pub fn div_exact(&self, a: &MPoly, b: &MPoly) -> Option<MPoly> {
        assert!(!b.is_zero(), "division by the zero polynomial");
        if b.is_constant() {
            let inv = self.base.inv(b.constant_term().unwrap())?;
            return Some(self.scale(a, &inv));
        }
        let (lm_b, lc_b) = b.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let lc_inv = self.base.inv(&lc_b)?;
        let mut r = a.clone();
        let mut q = self.zero();
        while let Some((lm_r, lc_r)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if lm_r.iter().zip(&lm_b).any(|(x, y)| x < y) {
                return None;
            }
            let m: Monomial = lm_r.iter().zip(&lm_b).map(|(x, y)| x - y).collect();
            let c = self.base.mul(&lc_r, &lc_inv);
            let t = self.monomial(m, c);
            r = self.sub(&r, &self.mul(&t, b));
            q = self.add(&q, &t);
        }
        Some(q)
    }

    /// Coefficient of var^d, as a polynomial not involving var.
    pub fn coeff_in(&self, a: &MPoly, var: usize, d: u32) -> MPoly {
        MPoly {
            terms: a
                .terms
                .iter()
                .filter(|(m, _)| m[var] == d)
                .map(|(m, c)| {
                    let mut m = m.clone();
                    m[var] = 0;
                    (m, c.clone())
                })
                .collect(),
        }
    }

    /// Coefficients with respect to `var`, indexed by degree.
    pub fn to_univariate(&self, a: &MPoly, var: usize) -> Vec<MPoly> {
        let deg = a.degree_in(var) as usize;
        let mut out = vec![self.zero(); if a.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &a.terms {
            let d = m[var] as usize;
            let mut mm = m.clone();
            mm[var] = 0;
            out[d].terms.insert(mm, c.clone());
        }
        out
    }

    fn var_power(&self, var: usize, e: u32) -> Monomial {
        let mut m = vec![0; self.nvars];
        m[var] = e;
        m
    }

    /// Pseudo-remainder of a by b with respect to var.
    fn prem(&self, a: &MPoly, b: &MPoly, var: usize) -> MPoly {
        let db = b.degree_in(var);
        let lb = self.coeff_in(b, var, db);
        let mut r = a.clone();
        while !r.is_zero() && r.involves_or_zero(var, db) {
            let dr = r.degree_in(var);
            let lr = self.coeff_in(&r, var, dr);
            let t = self.shift(&self.mul(&lr, b), &self.var_power(var, dr - db));
            r = self.sub(&self.mul(&lb, &r), &t);
        }
        r
    }

    fn content_in(&self, a: &MPoly, var: usize) -> MPoly {
        let mut g = self.zero();
        for c in self.to_univariate(a, var) {
            if c.is_zero() {
                continue;
            }
            g = self.gcd(&g, &c);
            if g.is_constant() && !g.is_zero() {
                return self.one();
            }
        }
        g
    }

    fn primitive_part_in(&self, a: &MPoly, var: usize) -> MPoly {
        if a.is_zero() {
            return a.clone();
        }
        let c = self.content_in(a, var);
        // scaling by a constant keeps rational coefficients from growing
        self.monic(&self.div_exact(a, &c).expect("content divides"))
    }

    /// Monic greatest common divisor (recursive primitive PRS).
    pub fn gcd(&self, a: &MPoly, b: &MPoly) -> MPoly {
        if a.is_zero() {
            return self.monic(b);
        }
        if b.is_zero() {
            return self.monic(a);
        }
        if a.is_constant() || b.is_constant() {
            return self.one();
        }
        let var = (0..self.nvars).find(|&v| a.involves(v) || b.involves(v)).unwrap();
        if !a.involves(var) {
            return self.gcd(a, &self.content_in(b, var));
        }
        if !b.involves(var) {
            return self.gcd(&self.content_in(a, var), b);
        }
        let ca = self.content_in(a, var);
        let cb = self.content_in(b, var);
        let c = self.gcd(&ca, &cb);
        let pa = self.div_exact(a, &ca).expect("content divides");
        let pb = self.div_exact(b, &cb).expect("content divides");
        let (mut r0, mut r1) = if pa.degree_in(var) >= pb.degree_in(var) { (pa, pb) } else { (pb, pa) };
        let g = loop {
            if r1.is_zero() {
                break r0;
            }
            if r1.degree_in(var) == 0 {
                break self.one();
            }
            let r = self.prem(&r0, &r1, var);
            r0 = r1;
            r1 = self.primitive_part_in(&r, var);
        };
        let g = self.primitive_part_in(&g, var);
        self.monic(&self.mul(&c, &g))
    }

    pub fn derivative(&self, a: &MPoly, var: usize) -> MPoly {
        let mut out = self.zero();
        for (m, c) in &a.terms {
            if m[var] == 0 {
                continue;
            }
            let mut mm = m.clone();
            let e = mm[var];
            mm[var] -= 1;
            self.add_term(&mut out, mm, &self.base.mul(c, &self.base.from_i64(e as i64)));
        }
        out
    }

    /// Substitutes each variable by a polynomial (in a possibly different ring).
    pub fn substitute(&self, a: &MPoly, target: &PolyRing, values: &[MPoly]) -> MPoly {
        debug_assert_eq!(values.len(), self.nvars);
        let mut out = target.zero();
        for (m, c) in &a.terms {
            let mut t = target.constant(c.clone());
            for (v, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = target.mul(&t, &target.pow(&values[v], e as u64));
                }
            }
            out = target.add(&out, &t);
        }
        out
    }

    /// q-th root of a polynomial if it is a q-th power (up to nothing: the
    /// constant factor must be a q-th power in the base too).
    pub fn nth_root(&self, a: &MPoly, q: u32) -> Option<MPoly> {
        if a.is_zero() {
            return Some(self.zero());
        }
        if q == 1 {
            return Some(a.clone());
        }
        let ch = self.base.characteristic();
        if ch != 0 && q as u64 == ch {
            // Frobenius is additive: a = Σ c_e x^e is a p-th power iff p | e for all e
            let mut out = self.zero();
            for (m, c) in &a.terms {
                if m.iter().any(|&e| e % q != 0) {
                    return None;
                }
                let root = self.base.frobenius_root(c)?;
                out.terms.insert(m.iter().map(|&e| e / q).collect(), root);
            }
            return Some(out);
        }
        if ch != 0 && (q as u64).is_multiple_of(ch) {
            let r = self.nth_root(a, ch as u32)?;
            return self.nth_root(&r, q / ch as u32);
        }
        let (lm, lc) = a.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        if lm.iter().any(|&e| e % q != 0) {
            return None;
        }
        let root_lc = self.base.nth_root(&lc, q)?;
        let bounds: Vec<u32> = (0..self.nvars).map(|v| a.degree_in(v) / q).collect();
        let mut g = self.monomial(lm.iter().map(|&e| e / q).collect(), root_lc);
        let qc = self.base.from_i64(q as i64);
        loop {
            let r = self.sub(a, &self.pow(&g, q as u64));
            let Some((rm, rc)) = r.leading().map(|(m, c)| (m.clone(), c.clone())) else {
                return Some(g);
            };
            // next term t = lt(r) / (q * lt(g)^(q-1))
            let (gm, gc) = g.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
            let denom_m: Vec<u32> = gm.iter().map(|&e| e * (q - 1)).collect();
            if rm.iter().zip(&denom_m).any(|(x, y)| x < y) {
                return None;
            }
            let tm: Monomial = rm.iter().zip(&denom_m).map(|(x, y)| x - y).collect();
            if tm.iter().zip(&bounds).any(|(x, b)| x > b) || tm >= gm {
                return None;
            }
            let denom_c = self.base.mul(&qc, &self.base.pow(&gc, (q - 1) as u128));
            let tc = self.base.mul(&rc, &self.base.inv(&denom_c)?);
            g = self.add(&g, &self.monomial(tm, tc));
        }
    }
}

impl MPoly {
    fn involves_or_zero(&self, var: usize, min_deg: u32) -> bool {
        self.degree_in(var) >= min_deg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_ring(n: usize) -> PolyRing {
        PolyRing::new(BaseField::rationals(), n)
    }

    fn c(r: &PolyRing, v: i64) -> MPoly {
        r.constant(r.base.from_i64(v))
    }

    #[test]
    fn gcd_of_products() {
        let r = q_ring(2);
        let x = r.var(0);
        let y = r.var(1);
        let xy = r.add(&x, &y);
        let xmy = r.sub(&x, &y);
        let a = r.mul(&xy, &r.mul(&xmy, &xmy));
        let b = r.mul(&xy, &r.add(&x, &c(&r, 3)));
        assert_eq!(r.gcd(&a, &b), xy);
        assert_eq!(r.gcd(&a, &r.mul(&xmy, &c(&r, 7))), xmy);
        assert_eq!(r.gcd(&x, &y), r.one());
    }

    #[test]
    fn gcd_three_vars_content() {
        let r = q_ring(3);
        let (x, y, z) = (r.var(0), r.var(1), r.var(2));
        // common factor y*z + 1 does not involve x
        let f = r.add(&r.mul(&y, &z), &r.one());
        let a = r.mul(&f, &r.add(&x, &y));
        let b = r.mul(&f, &r.sub(&r.mul(&x, &x), &z));
        assert_eq!(r.gcd(&a, &b), f);
    }

    #[test]
    fn gcd_over_f2() {
        let r = PolyRing::new(BaseField::finite(2, 1).unwrap(), 1);
        let x = r.var(0);
        let x1 = r.add(&x, &r.one());
        // x^2 + 1 = (x + 1)^2 in char 2
        let a = r.add(&r.mul(&x, &x), &r.one());
        assert_eq!(r.gcd(&a, &x1), x1);
    }

    #[test]
    fn nth_roots() {
        let r = q_ring(2);
        let x = r.var(0);
        let y = r.var(1);
        let f = r.add(&r.mul(&c(&r, 2), &x), &r.mul(&y, &y));
        let f3 = r.pow(&f, 3);
        assert_eq!(r.nth_root(&f3, 3), Some(f.clone()));
        assert_eq!(r.nth_root(&r.add(&f3, &r.one()), 3), None);
        assert_eq!(r.nth_root(&x, 2), None);
        let r2 = PolyRing::new(BaseField::finite(3, 1).unwrap(), 2);
        let x = r2.var(0);
        let g = r2.add(&x, &r2.var(1));
        assert_eq!(r2.nth_root(&r2.pow(&g, 3), 3), Some(g));
        assert_eq!(r2.nth_root(&x, 3), None);
    }

    #[test]
    fn exact_division_detects_remainders() {
        let r = q_ring(2);
        let x = r.var(0);
        let y = r.var(1);
        let a = r.sub(&r.mul(&x, &x), &r.mul(&y, &y));
        assert_eq!(r.div_exact(&a, &r.add(&x, &y)), Some(r.sub(&x, &y)));
        assert_eq!(r.div_exact(&a, &r.add(&x, &r.one())), None);
    }
}
