//! Algebraic tori over a field with enough roots of unity, modelled by the
//! cocharacter lattice Z^n together with the finite group Θ ⊂ GL_n(Z)
//! through which Galois acts.
//!
//! With μ_d trivial as a Galois module, the d-torsion of T(K) is the group
//! of Θ-invariants of (Z/d)^n, which is what [`TorusModel::torsion_points`]
//! computes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::lattice::{
    fixed_sublattice, group_closure, h1_of_theta_module, kernel_mod_d, AbelianGroupStructure, IntMatrix,
    DEFAULT_CLOSURE_CAP,
};

/// Upper bound on d^n for exhaustive enumeration of invariant cosets.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Clone, Debug)]
pub struct TorusModel {
    rank: usize,
    theta_generators: Vec<IntMatrix>,
    theta_elements: Vec<IntMatrix>,
    label: String,
    /// |G| for tori built by [`norm_quotient_torus`].
    splitting_degree: Option<usize>,
}

impl TorusModel {
    pub fn new(rank: usize, theta_generators: Vec<IntMatrix>, label: &str) -> Result<Self> {
        Self::with_cap(rank, theta_generators, label, DEFAULT_CLOSURE_CAP)
    }

    pub fn with_cap(rank: usize, theta_generators: Vec<IntMatrix>, label: &str, cap: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidParameter("torus rank must be positive".into()));
        }
        let theta_elements = group_closure(&theta_generators, rank, cap)?;
        Ok(TorusModel { rank, theta_generators, theta_elements, label: label.to_string(), splitting_degree: None })
    }

    /// The split torus G_m^n.
    pub fn split(rank: usize) -> Result<Self> {
        Self::new(rank, vec![], "split")
    }

    /// The rank-one torus on which Galois acts by -1.
    pub fn nonsplit_rank_one() -> Self {
        Self::new(1, vec![IntMatrix::from_rows(&[vec![-1]])], "nonsplit rank 1").expect("order 2")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn theta_generators(&self) -> &[IntMatrix] {
        &self.theta_generators
    }

    pub fn theta_elements(&self) -> &[IntMatrix] {
        &self.theta_elements
    }

    pub fn theta_order(&self) -> usize {
        self.theta_elements.len()
    }

    pub fn splitting_degree(&self) -> Option<usize> {
        self.splitting_degree
    }

    /// True iff no nonzero cocharacter is fixed by Θ.
    pub fn is_anisotropic(&self) -> Result<bool> {
        Ok(fixed_sublattice(&self.theta_generators, self.rank)?.rows() == 0)
    }

    pub fn h1(&self) -> Result<AbelianGroupStructure> {
        h1_of_theta_module(&self.theta_elements, self.rank)
    }

    /// The Θ-invariant d-torsion, i.e. the points of order dividing d in T(K).
    /// `characteristic` is the characteristic of the ambient field, if any.
    pub fn torsion_points(&self, d: u64, characteristic: Option<u64>) -> Result<TorsionReport> {
        if d < 2 {
            return Err(Error::InvalidModulus(d.to_string()));
        }
        if let Some(p) = characteristic.filter(|&p| p > 0) {
            if d.is_multiple_of(p) {
                return Err(Error::CharDividesOrder { p, d });
            }
        }
        let inv = kernel_mod_d(&self.theta_generators, self.rank, &BigInt::from(d))?;
        let exponent = inv.structure.exponent();
        let divisibility_check = BigInt::from(self.theta_order()).is_multiple_of(&exponent);
        Ok(TorsionReport { d, group: inv.structure, witnesses: inv.generators, divisibility_check })
    }

    fn is_invariant_mod(&self, v: &[BigInt], d: &BigInt) -> bool {
        self.theta_generators.iter().all(|g| {
            g.mul_vec(v).iter().zip(v).all(|(a, b)| (a - b).is_multiple_of(d))
        })
    }

    /// All Θ-invariant elements of (Z/d)^n of exact order d, by exhaustive
    /// enumeration (refused when d^n exceeds `cap`).
    pub fn invariant_elements_of_order(&self, d: u64, cap: u64) -> Result<Vec<Vec<BigInt>>> {
        let size = (d as u128).checked_pow(self.rank as u32).unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(Error::GroupTooLarge { order: size, cap: cap as u128 });
        }
        let db = BigInt::from(d);
        let mut out = Vec::new();
        let mut v = vec![0u64; self.rank];
        for _ in 0..size {
            let vb: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
            if element_order(&vb, &db) == db && self.is_invariant_mod(&vb, &db) {
                out.push(vb);
            }
            for slot in v.iter_mut() {
                *slot += 1;
                if *slot < d {
                    break;
                }
                *slot = 0;
            }
        }
        Ok(out)
    }

    /// Replays the averaging argument: lift v̄ to v, form w = Σ_θ θ(v),
    /// check w = 0 and conclude |Θ|·v̄ = 0 in (Z/d)^n, so d divides |Θ|.
    pub fn averaging_certificate(&self, d: u64, vbar: &[BigInt]) -> Result<AveragingCertificate> {
        if d < 2 {
            return Err(Error::InvalidModulus(d.to_string()));
        }
        if vbar.len() != self.rank {
            return Err(Error::DimensionMismatch(format!("vector of length {} for rank {}", vbar.len(), self.rank)));
        }
        let db = BigInt::from(d);
        let lift: Vec<BigInt> = vbar.iter().map(|x| x.mod_floor(&db)).collect();
        if !self.is_invariant_mod(&lift, &db) {
            return Err(Error::NotInvariant);
        }
        if !self.is_anisotropic()? {
            return Err(Error::NotAnisotropic);
        }
        let order = element_order(&lift, &db);
        if order != db {
            return Err(Error::OrderMismatch { expected: d.to_string(), actual: order.to_string() });
        }
        let mut w = vec![BigInt::zero(); self.rank];
        for theta in &self.theta_elements {
            for (acc, x) in w.iter_mut().zip(theta.mul_vec(&lift)) {
                *acc += x;
            }
        }
        let w_is_zero = w.iter().all(Zero::is_zero);
        let theta_order = self.theta_order();
        let scaled: Vec<BigInt> = lift.iter().map(|x| (x * BigInt::from(theta_order)).mod_floor(&db)).collect();
        let annihilated = scaled.iter().all(Zero::is_zero);
        Ok(AveragingCertificate {
            d,
            lift,
            w,
            w_is_zero,
            theta_order,
            theta_times_vbar: scaled,
            d_divides_theta_order: annihilated && (theta_order as u64).is_multiple_of(d),
        })
    }

    /// For each d in 2..=d_max (skipping multiples of the characteristic),
    /// checks that the exponent of the d-torsion divides |Θ| and, for norm
    /// quotient tori, that its order divides |G|.
    pub fn exponent_bound_check(&self, d_max: u64, characteristic: Option<u64>) -> Result<ExponentReport> {
        if !self.is_anisotropic()? {
            return Err(Error::NotAnisotropic);
        }
        let mut rows = Vec::new();
        for d in 2..=d_max {
            if characteristic.is_some_and(|p| p > 0 && d % p == 0) {
                continue;
            }
            let r = self.torsion_points(d, characteristic)?;
            let order = r.group.order().expect("finite");
            let group_ok = self.splitting_degree.map(|n| BigInt::from(n).is_multiple_of(&order));
            rows.push(ExponentRow {
                d,
                exponent: r.group.exponent(),
                order,
                divides_theta_order: r.divisibility_check,
                order_divides_splitting_degree: group_ok,
            });
        }
        let all_ok = rows
            .iter()
            .all(|r| r.divides_theta_order && r.order_divides_splitting_degree.unwrap_or(true));
        Ok(ExponentReport { theta_order: self.theta_order(), rows, all_ok })
    }

    pub fn to_json(&self) -> Value {
        json!({
            "rank": self.rank,
            "theta_generators": self.theta_generators.iter().map(IntMatrix::to_json).collect::<Vec<_>>(),
            "label": self.label,
        })
    }

    pub fn from_json(v: &Value, path: &str, cap: usize) -> Result<Self> {
        let obj = crate::json::object(v, path)?;
        let rank = crate::json::usize_field(obj, "rank", path)?;
        let gens = crate::json::array(crate::json::field(obj, "theta_generators", path)?, &format!("{path}.theta_generators"))?
            .iter()
            .enumerate()
            .map(|(i, g)| IntMatrix::from_json(g, &format!("{path}.theta_generators[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let label = obj.get("label").and_then(Value::as_str).unwrap_or("");
        Self::with_cap(rank, gens, label, cap)
    }
}

/// Additive order of v in (Z/d)^n.
fn element_order(v: &[BigInt], d: &BigInt) -> BigInt {
    let g = v.iter().fold(d.clone(), |acc, x| acc.gcd(x));
    d / g
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionReport {
    pub d: u64,
    pub group: AbelianGroupStructure,
    pub witnesses: Vec<Vec<BigInt>>,
    /// Whether the exponent of `group` divides |Θ|.
    pub divisibility_check: bool,
}

impl TorsionReport {
    pub fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "group": self.group.to_json(),
            "witnesses": self.witnesses.iter().map(|w| w.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "divisibility_check": self.divisibility_check,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AveragingCertificate {
    pub d: u64,
    pub lift: Vec<BigInt>,
    pub w: Vec<BigInt>,
    pub w_is_zero: bool,
    pub theta_order: usize,
    pub theta_times_vbar: Vec<BigInt>,
    pub d_divides_theta_order: bool,
}

impl AveragingCertificate {
    pub fn is_valid(&self) -> bool {
        self.w_is_zero && self.d_divides_theta_order
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentRow {
    pub d: u64,
    pub exponent: BigInt,
    pub order: BigInt,
    pub divides_theta_order: bool,
    pub order_divides_splitting_degree: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentReport {
    pub theta_order: usize,
    pub rows: Vec<ExponentRow>,
    pub all_ok: bool,
}

impl ExponentReport {
    pub fn to_json(&self) -> Value {
        json!({
            "theta_order": self.theta_order.to_string(),
            "rows": self.rows.iter().map(|r| json!({
                "d": r.d,
                "exponent": r.exponent.to_string(),
                "order": r.order.to_string(),
                "exponent_divides_theta_order": r.divides_theta_order,
                "order_divides_splitting_degree": r.order_divides_splitting_degree,
            })).collect::<Vec<_>>(),
            "all_ok": self.all_ok,
        })
    }
}

/// A finite group by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    label: String,
}

impl FiniteGroup {
    pub fn from_table(table: Vec<Vec<usize>>, label: &str) -> Result<Self> {
        let n = table.len();
        if table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(Error::InvalidParameter("multiplication table must be square with entries < order".into()));
        }
        if n == 0 || (0..n).any(|a| table[0][a] != a || table[a][0] != a) {
            return Err(Error::InvalidParameter("element 0 must be the identity".into()));
        }
        for r in &table {
            if r.iter().collect::<BTreeSet<_>>().len() != n {
                return Err(Error::InvalidParameter("table rows must be permutations".into()));
            }
        }
        for c in 0..n {
            if (0..n).map(|r| table[r][c]).collect::<BTreeSet<_>>().len() != n {
                return Err(Error::InvalidParameter("table columns must be permutations".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidParameter("multiplication is not associative".into()));
                    }
                }
            }
        }
        Ok(FiniteGroup { table, label: label.to_string() })
    }

    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup { table, label: format!("Z/{n}") }
    }

    /// Dihedral group of order 2n: element r^i s^j is index i + n j.
    pub fn dihedral(n: usize) -> Self {
        let idx = |i: usize, j: usize| i % n + n * j;
        let mut table = vec![vec![0; 2 * n]; 2 * n];
        for (a, row) in table.iter_mut().enumerate() {
            let (i, j) = (a % n, a / n);
            for (b, slot) in row.iter_mut().enumerate() {
                let (k, l) = (b % n, b / n);
                // r^i s^j r^k s^l = r^{i ± k} s^{j+l}
                let rot = if j == 0 { i + k } else { i + n - k };
                *slot = idx(rot, (j + l) % 2);
            }
        }
        FiniteGroup { table, label: format!("D_{}", 2 * n) }
    }

    /// The symmetric group on three letters, as the dihedral group of order 6.
    pub fn symmetric3() -> Self {
        let mut g = Self::dihedral(3);
        g.label = "S_3".into();
        g
    }

    /// The quaternion group {±1, ±i, ±j, ±k}.
    pub fn quaternion() -> Self {
        // index = 2*u + s with u in {1, i, j, k} and sign s (0 = +)
        let unit = |a: usize, b: usize| -> (usize, usize) {
            // (product unit, sign flip)
            const T: [[(usize, usize); 4]; 4] = [
                [(0, 0), (1, 0), (2, 0), (3, 0)],
                [(1, 0), (0, 1), (3, 0), (2, 1)],
                [(2, 0), (3, 1), (0, 1), (1, 0)],
                [(3, 0), (2, 0), (1, 1), (0, 1)],
            ];
            T[a][b]
        };
        let table = (0..8)
            .map(|x| {
                (0..8)
                    .map(|y| {
                        let (u, s) = unit(x / 2, y / 2);
                        2 * u + ((x % 2) + (y % 2) + s) % 2
                    })
                    .collect()
            })
            .collect();
        FiniteGroup { table, label: "Q_8".into() }
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (m, n) = (a.order(), b.order());
        let table = (0..m * n)
            .map(|x| (0..m * n).map(|y| a.table[x / n][y / n] * n + b.table[x % n][y % n]).collect())
            .collect();
        FiniteGroup { table, label: format!("{} x {}", a.label, b.label) }
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order()).all(|a| (0..a).all(|b| self.table[a][b] == self.table[b][a]))
    }

    /// A small generating set chosen greedily in index order.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut sub: BTreeSet<usize> = BTreeSet::from([0]);
        for g in 1..self.order() {
            if sub.contains(&g) {
                continue;
            }
            gens.push(g);
            let mut frontier: Vec<usize> = sub.iter().copied().collect();
            while let Some(x) = frontier.pop() {
                for &h in &gens {
                    let y = self.table[x][h];
                    if sub.insert(y) {
                        frontier.push(y);
                    }
                }
            }
        }
        gens
    }

    /// Left multiplication by each generator, as permutations of the elements.
    pub fn regular_permutations(&self) -> Vec<Vec<usize>> {
        self.generators().iter().map(|&g| (0..self.order()).map(|h| self.table[g][h]).collect()).collect()
    }
}

/// R_{L/K} G_m / G_m for a Galois extension with group G, from permutations
/// generating the regular action of G on its own elements.
///
/// The cocharacter lattice is Z[G]/Z·N with N = Σ_g g. The images of e_g for
/// g different from the point 0 form a Z-basis; e_0 maps to -Σ_{g≠0} e_g.
pub fn norm_quotient_torus(perms: &[Vec<usize>], label: &str) -> Result<TorusModel> {
    let n = perms.first().map_or(0, Vec::len);
    if n < 2 {
        return Err(Error::TrivialGroup);
    }
    for p in perms {
        if p.len() != n || p.iter().collect::<BTreeSet<_>>().len() != n || p.iter().any(|&x| x >= n) {
            return Err(Error::NotRegular("generators must be permutations of one set".into()));
        }
    }
    // the generated permutation group must act simply transitively
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([(0..n).collect()]);
    let mut frontier: Vec<Vec<usize>> = seen.iter().cloned().collect();
    while let Some(x) = frontier.pop() {
        for p in perms {
            let y: Vec<usize> = x.iter().map(|&i| p[i]).collect();
            if seen.insert(y.clone()) {
                if seen.len() > n {
                    return Err(Error::NotRegular(format!("group generated has order > {n}")));
                }
                frontier.push(y);
            }
        }
    }
    if seen.len() != n {
        return Err(Error::NotRegular(format!("group generated has order {} on {n} points", seen.len())));
    }
    let orbit: BTreeSet<usize> = seen.iter().map(|g| g[0]).collect();
    if orbit.len() != n {
        return Err(Error::NotRegular("action is not transitive".into()));
    }
    let gens: Vec<IntMatrix> = perms.iter().map(|p| quotient_matrix(p)).collect();
    let mut t = TorusModel::new(n - 1, gens, label)?;
    t.splitting_degree = Some(n);
    Ok(t)
}

pub fn norm_quotient_torus_of(group: &FiniteGroup) -> Result<TorusModel> {
    if group.order() < 2 {
        return Err(Error::TrivialGroup);
    }
    norm_quotient_torus(&group.regular_permutations(), group.label())
}

fn quotient_matrix(p: &[usize]) -> IntMatrix {
    let n = p.len();
    let mut m = IntMatrix::zeros(n - 1, n - 1);
    for j in 1..n {
        let target = p[j];
        if target == 0 {
            for i in 0..n - 1 {
                m[(i, j - 1)] = BigInt::from(-1);
            }
        } else {
            m[(target - 1, j - 1)] = BigInt::one();
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn anisotropy_examples() {
        assert!(!TorusModel::split(1).unwrap().is_anisotropic().unwrap());
        assert!(TorusModel::nonsplit_rank_one().is_anisotropic().unwrap());
        let t3 = norm_quotient_torus_of(&FiniteGroup::cyclic(3)).unwrap();
        assert_eq!(t3.rank(), 2);
        assert_eq!(t3.theta_order(), 3);
        assert!(t3.is_anisotropic().unwrap());
    }

    #[test]
    fn z2_quotient_is_negation() {
        let t = norm_quotient_torus_of(&FiniteGroup::cyclic(2)).unwrap();
        assert_eq!(t.theta_generators(), &[IntMatrix::from_rows(&[vec![-1]])]);
    }

    #[test]
    fn torsion_of_nonsplit_rank_one() {
        let t = TorusModel::nonsplit_rank_one();
        let r = t.torsion_points(2, None).unwrap();
        assert_eq!(r.group.invariant_factors, vec![b(2)]);
        assert!(r.divisibility_check);
        assert!(t.torsion_points(7, None).unwrap().group.invariant_factors.is_empty());
        assert_eq!(t.torsion_points(4, Some(2)), Err(Error::CharDividesOrder { p: 2, d: 4 }));
    }

    #[test]
    fn averaging_certificates() {
        let t = TorusModel::nonsplit_rank_one();
        let c = t.averaging_certificate(2, &[b(1)]).unwrap();
        assert!(c.w_is_zero && c.d_divides_theta_order);
        assert_eq!(
            TorusModel::split(1).unwrap().averaging_certificate(2, &[b(1)]),
            Err(Error::NotAnisotropic)
        );
        assert_eq!(t.averaging_certificate(3, &[b(1)]), Err(Error::NotInvariant));
        assert!(matches!(t.averaging_certificate(4, &[b(2)]), Err(Error::OrderMismatch { .. })));
    }

    #[test]
    fn regularity_is_checked() {
        assert_eq!(norm_quotient_torus(&[vec![0]], "t").unwrap_err(), Error::TrivialGroup);
        // a transposition on three points is not regular
        assert!(matches!(norm_quotient_torus(&[vec![1, 0, 2]], "t"), Err(Error::NotRegular(_))));
    }

    #[test]
    fn small_groups_are_groups() {
        for g in [FiniteGroup::symmetric3(), FiniteGroup::quaternion(), FiniteGroup::dihedral(4)] {
            assert!(FiniteGroup::from_table(g.table.clone(), "check").is_ok(), "{}", g.label());
            assert!(!g.is_abelian());
        }
        let k = FiniteGroup::direct_product(&FiniteGroup::cyclic(2), &FiniteGroup::cyclic(2));
        assert!(FiniteGroup::from_table(k.table.clone(), "V4").is_ok());
        assert!(k.is_abelian());
    }
}
