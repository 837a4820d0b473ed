//! Dense matrices over a [`Field`].

use std::fmt;
use std::hash::{Hash, Hasher};

use serde_json::{json, Value};

use super::field::{FieldElement, FieldRef};
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct FieldMatrix {
    field: FieldRef,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl PartialEq for FieldMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl Eq for FieldMatrix {}

impl Hash for FieldMatrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl std::ops::Index<(usize, usize)> for FieldMatrix {
    type Output = FieldElement;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElement {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FieldMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElement {
        &mut self.data[i * self.cols + j]
    }
}

impl FieldMatrix {
    pub fn zero(field: &FieldRef, rows: usize, cols: usize) -> Self {
        FieldMatrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &FieldRef, n: usize) -> Self {
        Self::scalar(field, n, &field.one())
    }

    pub fn scalar(field: &FieldRef, n: usize, c: &FieldElement) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn diagonal(field: &FieldRef, d: &[FieldElement]) -> Self {
        let mut m = Self::zero(field, d.len(), d.len());
        for (i, c) in d.iter().enumerate() {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_rows(field: &FieldRef, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(FieldMatrix { field: field.clone(), rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(field: &FieldRef, rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
        Self::from_rows(field, rows).expect("rectangular literal")
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn try_mul(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zero(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = &out[(i, j)] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn add(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FieldMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FieldMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElement) -> FieldMatrix {
        FieldMatrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> FieldMatrix {
        assert!(self.is_square());
        let mut result = Self::identity(&self.field, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        result
    }

    /// Row echelon form by Gaussian elimination; returns (echelon, pivot columns, sign of the permutation).
    fn echelon(&self) -> (FieldMatrix, Vec<usize>, bool) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut negate = false;
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
                negate = !negate;
            }
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for i in r + 1..m.rows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..m.cols {
                    let t = &f * &m[(r, j)];
                    m[(i, j)] = &m[(i, j)] - &t;
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots, negate)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    pub fn det(&self) -> FieldElement {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let (m, pivots, negate) = self.echelon();
        if pivots.len() < self.rows {
            return self.field.zero();
        }
        let mut d = self.field.one();
        for i in 0..self.rows {
            d = &d * &m[(i, i)];
        }
        if negate {
            d.neg()
        } else {
            d
        }
    }

    pub fn inverse(&self) -> Result<FieldMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zero(&self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = self.field.one();
        }
        for c in 0..n {
            let p = (c..n).find(|&i| !aug[(i, c)].is_zero()).ok_or(Error::NotInvertible)?;
            if p != c {
                for j in 0..2 * n {
                    aug.data.swap(p * 2 * n + j, c * 2 * n + j);
                }
            }
            let inv = aug[(c, c)].inv()?;
            for j in 0..2 * n {
                aug[(c, j)] = &aug[(c, j)] * &inv;
            }
            for i in 0..n {
                if i == c || aug[(i, c)].is_zero() {
                    continue;
                }
                let f = aug[(i, c)].clone();
                for j in 0..2 * n {
                    let t = &f * &aug[(c, j)];
                    aug[(i, j)] = &aug[(i, j)] - &t;
                }
            }
        }
        let mut out = Self::zero(&self.field, n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = aug[(i, n + j)].clone();
            }
        }
        Ok(out)
    }

    /// Basis of the right null space {x : Mx = 0}.
    pub fn kernel(&self) -> Vec<Vec<FieldElement>> {
        // reduced row echelon form
        let (mut m, pivots, _) = self.echelon();
        for (r, &c) in pivots.iter().enumerate().rev() {
            let inv = m[(r, c)].inv().unwrap();
            for j in 0..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..r {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in 0..m.cols {
                    let t = &f * &m[(r, j)];
                    m[(i, j)] = &m[(i, j)] - &t;
                }
            }
        }
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); self.cols];
                v[f] = self.field.one();
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = m[(r, f)].neg();
                }
                v
            })
            .collect()
    }

    /// The scalar c if this matrix equals c·I.
    pub fn as_scalar(&self) -> Option<FieldElement> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self[(0, 0)].clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = &self[(i, j)];
                if (i == j && *e != c) || (i != j && !e.is_zero()) {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn is_identity(&self) -> bool {
        self.as_scalar().is_some_and(|c| c.is_one())
    }

    /// Canonical projective representative: scaled so the first nonzero entry is 1.
    pub fn projective_normalize(&self) -> FieldMatrix {
        match self.data.iter().find(|e| !e.is_zero()) {
            None => self.clone(),
            Some(lead) => {
                let inv = lead.inv().unwrap();
                self.scale(&inv)
            }
        }
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.rows)
            .map(|i| Value::Array(self.row(i).iter().map(FieldElement::to_json).collect()))
            .collect();
        json!({"rows": self.rows, "cols": self.cols, "entries": rows})
    }

    pub fn from_json(field: &FieldRef, v: &Value, path: &str) -> Result<Self> {
        let (rows, cols, entries) = crate::json::matrix_shape(v, path)?;
        let mut data = Vec::with_capacity(rows * cols);
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                data.push(field.element_from_json(e, &format!("{path}.entries[{i}][{j}]"))?);
            }
        }
        Ok(FieldMatrix { field: field.clone(), rows, cols, data })
    }
}

impl std::ops::Mul<&FieldMatrix> for &FieldMatrix {
    type Output = FieldMatrix;
    fn mul(self, rhs: &FieldMatrix) -> FieldMatrix {
        self.try_mul(rhs).expect("matrix dimensions")
    }
}
