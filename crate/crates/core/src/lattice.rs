//! Integer linear algebra: Smith and Hermite normal forms, integer kernels,
//! fixed sublattices, d-torsion of invariants, finite matrix-group closure
//! and first cohomology of a lattice with a finite group action.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diagonal(d: &[BigInt]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.iter().flatten().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn from_big_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        assert!(rows.iter().all(|x| x.len() == cols), "ragged rows");
        IntMatrix { rows: rows.len(), cols, data: rows.iter().flatten().cloned().collect() }
    }

    /// Permutation matrix sending e_j to e_{perm[j]}.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (j, &i) in perm.iter().enumerate() {
            m[(i, j)] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vectors(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn try_mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    /// Stacks matrices with equal column counts vertically.
    pub fn vstack(parts: &[IntMatrix], cols: usize) -> IntMatrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            data.extend(p.data.iter().cloned());
            rows += p.rows;
        }
        IntMatrix { rows, cols, data }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else { return BigInt::zero() };
                a.swap_rows(k, p);
                sign = !sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        if sign {
            -d
        } else {
            d
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.det().abs().is_one()
    }

    pub fn pow(&self, mut e: u64) -> IntMatrix {
        let mut r = Self::identity(self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.try_mul(&b).unwrap();
            }
            e >>= 1;
            if e > 0 {
                b = b.try_mul(&b).unwrap();
            }
        }
        r
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        if !self.is_unimodular() {
            return Err(Error::NotUnimodular);
        }
        let snf = smith_normal_form_tracked(self, true, true);
        // U A V = D with D = I, so A^{-1} = V U
        Ok(snf.v.try_mul(&snf.u).unwrap())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row_a += q * row_b
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let t = &self.data[b * self.cols + j] * q;
            self.data[a * self.cols + j] += t;
        }
    }

    /// col_a += q * col_b
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let t = &self.data[i * self.cols + b] * q;
            self.data[i * self.cols + a] += t;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -&self.data[a * self.cols + j];
            self.data[a * self.cols + j] = v;
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = -&self.data[i * self.cols + a];
            self.data[i * self.cols + a] = v;
        }
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = (0..self.rows)
            .map(|i| Value::Array(self.row(i).iter().map(|x| Value::String(x.to_string())).collect()))
            .collect();
        json!({"rows": self.rows, "cols": self.cols, "entries": rows})
    }

    pub fn from_json(v: &Value, path: &str) -> Result<Self> {
        let (rows, cols, entries) = crate::json::matrix_shape(v, path)?;
        let mut data = Vec::with_capacity(rows * cols);
        for (i, row) in entries.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                data.push(crate::json::bigint(e, &format!("{path}.entries[{i}][{j}]"))?);
            }
        }
        Ok(IntMatrix { rows, cols, data })
    }
}

/// U·M·V = D with U, V unimodular and D diagonal with d_1 | d_2 | ...
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    smith_normal_form_tracked(m, true, true)
}

/// Smith normal form; `track_rows` / `track_cols` control whether U (with
/// its inverse) and V are accumulated. Untracked transforms are returned as
/// empty 0x0 matrices.
pub fn smith_normal_form_tracked(m: &IntMatrix, track_rows: bool, track_cols: bool) -> Snf {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = if track_rows { IntMatrix::identity(r) } else { IntMatrix::zeros(0, 0) };
    let mut ui = u.clone();
    let mut v = if track_cols { IntMatrix::identity(c) } else { IntMatrix::zeros(0, 0) };

    // each elementary row op E on A: A <- E A, U <- E U, U^{-1} <- U^{-1} E^{-1}
    macro_rules! row_swap {
        ($x:expr, $y:expr) => {{
            a.swap_rows($x, $y);
            if track_rows {
                u.swap_rows($x, $y);
                ui.swap_cols($x, $y);
            }
        }};
    }
    macro_rules! row_add {
        ($x:expr, $y:expr, $q:expr) => {{
            let q: BigInt = $q;
            a.add_row($x, $y, &q);
            if track_rows {
                u.add_row($x, $y, &q);
                ui.add_col($y, $x, &(-q));
            }
        }};
    }
    macro_rules! row_neg {
        ($x:expr) => {{
            a.negate_row($x);
            if track_rows {
                u.negate_row($x);
                ui.negate_col($x);
            }
        }};
    }
    macro_rules! col_swap {
        ($x:expr, $y:expr) => {{
            a.swap_cols($x, $y);
            if track_cols {
                v.swap_cols($x, $y);
            }
        }};
    }
    macro_rules! col_add {
        ($x:expr, $y:expr, $q:expr) => {{
            let q: BigInt = $q;
            a.add_col($x, $y, &q);
            if track_cols {
                v.add_col($x, $y, &q);
            }
        }};
    }

    for t in 0..r.min(c) {
        loop {
            // smallest |entry| in the trailing block, lowest row on ties
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &a[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            row_swap!(t, pi);
            col_swap!(t, pj);
            let mut clean = true;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                row_add!(i, t, -q);
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                col_add!(j, t, -q);
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into the pivot row
            let p = a[(t, t)].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a[(i, j)].is_multiple_of(&p)));
            match bad {
                Some(i) => row_add!(t, i, BigInt::one()),
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            row_neg!(t);
        }
    }
    Snf { u, u_inv: ui, d: a, v }
}

/// Row-style Hermite normal form of the lattice spanned by the rows of `m`:
/// nonzero rows only, positive pivots, entries above each pivot in [0, pivot).
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        loop {
            // smallest nonzero |entry| in column c at or below row r
            let best = (r..a.rows)
                .filter(|&i| !a[(i, c)].is_zero())
                .min_by(|&x, &y| a[(x, c)].abs().cmp(&a[(y, c)].abs()));
            let Some(p) = best else { break };
            a.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..a.rows {
                if a[(i, c)].is_zero() {
                    continue;
                }
                let q = a[(i, c)].div_floor(&a[(r, c)]);
                a.add_row(i, r, &(-q));
                if !a[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(r, c)].is_zero() {
            continue;
        }
        if a[(r, c)].is_negative() {
            a.negate_row(r);
        }
        for i in 0..r {
            let q = a[(i, c)].div_floor(&a[(r, c)]);
            a.add_row(i, r, &(-q));
        }
        pivots.push(c);
        r += 1;
    }
    IntMatrix { rows: r, cols: a.cols, data: a.data[..r * a.cols].to_vec() }
}

/// Column echelon form E = M·V with V unimodular; returns (E, V, rank).
/// The first `rank` columns of E are nonzero with strictly increasing pivot
/// rows; the remaining columns of V span the integer kernel of M.
fn column_echelon(m: &IntMatrix) -> (IntMatrix, IntMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut v = IntMatrix::identity(m.cols);
    let mut k = 0;
    let mut pivot_rows = Vec::new();
    for i in 0..a.rows {
        if k == a.cols {
            break;
        }
        loop {
            let best = (k..a.cols)
                .filter(|&j| !a[(i, j)].is_zero())
                .min_by(|&x, &y| a[(i, x)].abs().cmp(&a[(i, y)].abs()));
            let Some(p) = best else { break };
            a.swap_cols(k, p);
            v.swap_cols(k, p);
            let mut done = true;
            for j in k + 1..a.cols {
                if a[(i, j)].is_zero() {
                    continue;
                }
                let q = -a[(i, j)].div_floor(&a[(i, k)]);
                a.add_col(j, k, &q);
                v.add_col(j, k, &q);
                if !a[(i, j)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[(i, k)].is_zero() {
            continue;
        }
        pivot_rows.push(i);
        k += 1;
    }
    (a, v, pivot_rows)
}

/// Basis of {x ∈ Z^cols : M x = 0}, as rows of a matrix in Hermite normal form.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let (_, v, pivots) = column_echelon(m);
    let rank = pivots.len();
    let basis: Vec<Vec<BigInt>> = (rank..m.cols).map(|j| v.column(j)).collect();
    if basis.is_empty() {
        return IntMatrix::zeros(0, m.cols);
    }
    hermite_normal_form(&IntMatrix::from_big_rows(&basis, m.cols))
}

/// Solves M x = b over Z (one solution), or `None` if there is none.
pub fn solve_integer(m: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(b.len(), m.rows);
    let (e, v, pivots) = column_echelon(m);
    // forward substitution E y = b on the pivot rows, y zero on the kernel part
    let mut y = vec![BigInt::zero(); m.cols];
    for (k, &i) in pivots.iter().enumerate() {
        let s: BigInt = (0..k).map(|j| &e[(i, j)] * &y[j]).sum();
        let rest = &b[i] - s;
        if !rest.is_multiple_of(&e[(i, k)]) {
            return None;
        }
        y[k] = rest / &e[(i, k)];
    }
    let x = v.mul_vec(&y);
    if m.mul_vec(&x) == b {
        Some(x)
    } else {
        None
    }
}

/// Invariant factors (each ≥ 2) of a finite abelian group plus a free rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianGroupStructure {
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianGroupStructure {
    pub fn trivial() -> Self {
        AbelianGroupStructure { invariant_factors: vec![], free_rank: 0 }
    }

    /// Builds the structure from any diagonal presentation ⊕ Z/a_i (a_i = 0
    /// meaning Z), normalizing to the divisibility chain.
    pub fn from_cyclic_orders(orders: &[BigInt]) -> Self {
        let free_rank = orders.iter().filter(|x| x.is_zero()).count();
        let finite: Vec<BigInt> = orders.iter().filter(|x| !x.is_zero()).map(|x| x.abs()).collect();
        // diagonal SNF gives the chain
        let snf = smith_normal_form_tracked(&IntMatrix::diagonal(&finite), false, false);
        let mut inv: Vec<BigInt> = snf.diagonal().into_iter().filter(|x| !x.is_one()).collect();
        inv.sort();
        AbelianGroupStructure { invariant_factors: inv, free_rank }
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    /// Exponent of the torsion part (1 for the trivial group).
    pub fn exponent(&self) -> BigInt {
        self.invariant_factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "invariant_factors": self.invariant_factors.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            "free_rank": self.free_rank,
        })
    }
}

impl fmt::Display for AbelianGroupStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

fn check_square(gens: &[IntMatrix], n: usize) -> Result<()> {
    for (i, g) in gens.iter().enumerate() {
        if g.rows != n || g.cols != n {
            return Err(Error::DimensionMismatch(format!("generator {i} is {}x{}, expected {n}x{n}", g.rows, g.cols)));
        }
    }
    Ok(())
}

fn stacked_minus_identity(gens: &[IntMatrix], n: usize) -> IntMatrix {
    let id = IntMatrix::identity(n);
    let parts: Vec<IntMatrix> = gens.iter().map(|g| g.sub(&id)).collect();
    IntMatrix::vstack(&parts, n)
}

/// Basis (rows, Hermite normal form) of the vectors fixed by every generator.
pub fn fixed_sublattice(gens: &[IntMatrix], n: usize) -> Result<IntMatrix> {
    check_square(gens, n)?;
    if gens.iter().any(|g| !g.is_unimodular()) {
        return Err(Error::NotUnimodular);
    }
    if gens.is_empty() {
        return Ok(IntMatrix::identity(n));
    }
    Ok(integer_kernel(&stacked_minus_identity(gens, n)))
}

/// The invariants of (Z/d)^n under the generators, with generators of each
/// cyclic factor reduced to coordinates in [0, d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionInvariants {
    pub structure: AbelianGroupStructure,
    /// One generator per invariant factor, in the same order.
    pub generators: Vec<Vec<BigInt>>,
}

pub fn kernel_mod_d(gens: &[IntMatrix], n: usize, d: &BigInt) -> Result<TorsionInvariants> {
    if *d < BigInt::from(2) {
        return Err(Error::InvalidModulus(d.to_string()));
    }
    check_square(gens, n)?;
    let a = if gens.is_empty() { IntMatrix::zeros(0, n) } else { stacked_minus_identity(gens, n) };
    let snf = smith_normal_form_tracked(&a, false, true);
    let diag = snf.diagonal();
    // coordinate w_i = (V^{-1} v)_i must be a multiple of d / gcd(d, d_i)
    let mut cyclic: Vec<(BigInt, Vec<BigInt>)> = Vec::new();
    for i in 0..n {
        let di = diag.get(i).cloned().unwrap_or_else(BigInt::zero);
        let g = d.gcd(&di);
        if g.is_one() {
            continue;
        }
        let step = d / &g;
        let col = snf.v.column(i);
        let gen: Vec<BigInt> = col.iter().map(|x| (x * &step).mod_floor(d)).collect();
        cyclic.push((g, gen));
    }
    // the g_i already form a divisibility chain (d_i | d_{i+1} and trailing zeros)
    let structure = AbelianGroupStructure {
        invariant_factors: cyclic.iter().map(|(g, _)| g.clone()).collect(),
        free_rank: 0,
    };
    Ok(TorsionInvariants { structure, generators: cyclic.into_iter().map(|(_, v)| v).collect() })
}

/// All elements of the group generated by `gens` (breadth-first from the
/// identity, multiplying by generators on the right).
pub fn group_closure(gens: &[IntMatrix], n: usize, cap: usize) -> Result<Vec<IntMatrix>> {
    check_square(gens, n)?;
    if gens.iter().any(|g| !g.is_unimodular()) {
        return Err(Error::NotUnimodular);
    }
    let id = IntMatrix::identity(n);
    let mut seen: HashSet<IntMatrix> = HashSet::from([id.clone()]);
    let mut order = vec![id.clone()];
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.try_mul(g)?;
            if seen.insert(y.clone()) {
                if order.len() >= cap {
                    return Err(Error::ClosureCapExceeded { cap });
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(order)
}

/// H^1(Θ, Z^n) for the finite group Θ given by its full element list.
///
/// Cocycles are functions f: Θ -> Z^n with f(gh) = f(g) + g f(h); Z^1 is
/// the kernel of the linear map f ↦ (f(gh) - f(g) - g f(h))_{g,h}. Coboundaries
/// m ↦ (g m - m)_g are rewritten in a basis of Z^1 and the quotient is read
/// off a Smith normal form.
pub fn h1_of_theta_module(elements: &[IntMatrix], n: usize) -> Result<AbelianGroupStructure> {
    check_square(elements, n)?;
    let k = elements.len();
    if k == 0 {
        return Err(Error::DimensionMismatch("empty element list".into()));
    }
    let index_of = |m: &IntMatrix| elements.iter().position(|x| x == m);
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(k * k * n);
    for (gi, g) in elements.iter().enumerate() {
        for (hi, h) in elements.iter().enumerate() {
            let gh = g.try_mul(h)?;
            let ghi = index_of(&gh).ok_or_else(|| Error::DimensionMismatch("element list is not closed".into()))?;
            for r in 0..n {
                let mut row = vec![BigInt::zero(); k * n];
                row[ghi * n + r] += 1;
                row[gi * n + r] -= 1;
                for c in 0..n {
                    row[hi * n + c] -= &g[(r, c)];
                }
                rows.push(row);
            }
        }
    }
    let delta = IntMatrix::from_big_rows(&rows, k * n);
    let z1 = integer_kernel(&delta); // rows form a basis of Z^1
    let z = z1.rows;
    if z == 0 {
        return Ok(AbelianGroupStructure::trivial());
    }
    let basis = z1.transpose(); // (k n) x z
    let mut coords: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for m in 0..n {
        let b: Vec<BigInt> = elements
            .iter()
            .flat_map(|g| (0..n).map(move |r| &g[(r, m)] - if r == m { BigInt::one() } else { BigInt::zero() }))
            .collect();
        let x = solve_integer(&basis, &b)
            .ok_or_else(|| Error::DimensionMismatch("coboundary is not a cocycle".into()))?;
        coords.push(x);
    }
    let rel = IntMatrix::from_big_rows(&coords, z).transpose(); // z x n
    let snf = smith_normal_form_tracked(&rel, false, false);
    let mut orders = snf.diagonal();
    orders.resize(z, BigInt::zero());
    Ok(AbelianGroupStructure::from_cyclic_orders(&orders))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn snf_small_cases() {
        let s = smith_normal_form(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(s.diagonal(), vec![b(2), b(4)]);
        assert_eq!(s.u.try_mul(&m(&[&[2, 4], &[6, 8]])).unwrap().try_mul(&s.v).unwrap(), s.d);
        assert!(s.u.try_mul(&s.u_inv).unwrap() == IntMatrix::identity(2));
        let z = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert!(z.d.is_zero());
        assert_eq!(smith_normal_form(&IntMatrix::identity(2)).d, IntMatrix::identity(2));
    }

    #[test]
    fn fixed_sublattice_examples() {
        assert_eq!(fixed_sublattice(&[], 2).unwrap(), IntMatrix::identity(2));
        assert_eq!(fixed_sublattice(&[m(&[&[-1]])], 1).unwrap().rows(), 0);
        let cyc = IntMatrix::permutation(&[1, 2, 0]);
        assert_eq!(fixed_sublattice(&[cyc], 3).unwrap(), m(&[&[1, 1, 1]]));
        assert_eq!(fixed_sublattice(&[m(&[&[2]])], 1), Err(Error::NotUnimodular));
    }

    #[test]
    fn kernel_mod_d_examples() {
        let r = kernel_mod_d(&[], 1, &b(5)).unwrap();
        assert_eq!(r.structure.invariant_factors, vec![b(5)]);
        let neg = m(&[&[-1]]);
        let r = kernel_mod_d(std::slice::from_ref(&neg), 1, &b(2)).unwrap();
        assert_eq!(r.structure.invariant_factors, vec![b(2)]);
        assert_eq!(r.generators, vec![vec![b(1)]]);
        assert!(kernel_mod_d(std::slice::from_ref(&neg), 1, &b(9)).unwrap().structure.invariant_factors.is_empty());
        assert_eq!(kernel_mod_d(&[neg], 1, &b(1)), Err(Error::InvalidModulus("1".into())));
    }

    #[test]
    fn closure_orders() {
        assert_eq!(group_closure(&[m(&[&[-1]])], 1, 100).unwrap().len(), 2);
        assert_eq!(group_closure(&[IntMatrix::permutation(&[1, 2, 0])], 3, 100).unwrap().len(), 3);
        assert_eq!(group_closure(&[m(&[&[0, -1], &[1, 0]])], 2, 100).unwrap().len(), 4);
        let shear = m(&[&[1, 1], &[0, 1]]);
        assert_eq!(group_closure(&[shear], 2, 50), Err(Error::ClosureCapExceeded { cap: 50 }));
    }

    #[test]
    fn h1_examples() {
        let triv = h1_of_theta_module(&[IntMatrix::identity(2)], 2).unwrap();
        assert_eq!(triv, AbelianGroupStructure::trivial());
        let sign = h1_of_theta_module(&[IntMatrix::identity(1), m(&[&[-1]])], 1).unwrap();
        assert_eq!(sign.invariant_factors, vec![b(2)]);
        // trivial action of Z/2: H^1 = Hom(Z/2, Z) = 0
        let id = IntMatrix::identity(1);
        let trivial_action = h1_of_theta_module(&[id.clone(), id], 1);
        assert!(trivial_action.is_err() || trivial_action.unwrap().invariant_factors.is_empty());
    }

    #[test]
    fn hnf_and_solve() {
        let h = hermite_normal_form(&m(&[&[2, 4], &[6, 8]]));
        assert_eq!(h, m(&[&[2, 0], &[0, 4]]));
        let a = m(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve_integer(&a, &[b(4), b(9)]), Some(vec![b(2), b(3)]));
        assert_eq!(solve_integer(&a, &[b(1), b(0)]), None);
        assert_eq!(m(&[&[2, 1], &[7, 4]]).det(), b(1));
        let inv = m(&[&[2, 1], &[7, 4]]).inverse_unimodular().unwrap();
        assert_eq!(inv, m(&[&[4, -1], &[-7, 2]]));
    }
}
