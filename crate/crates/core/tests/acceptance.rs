#![allow(clippy::needless_range_loop)]

//! Acceptance criteria 1-10. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; the process fails if any
//! criterion fails.

use std::collections::{HashMap, HashSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use anisobound_core::bounds::{burnside_divisibility_check, burnside_examples, minkowski_values, upsilon_m};
use anisobound_core::csa::{
    heisenberg_subgroup, inseparable_torsion_subgroup, monic_irreducibles, projective_closure, weyl_split_verification,
    AlgebraElement, AlgebraSpec,
};
use anisobound_core::lattice::IntMatrix;
use anisobound_core::pairing::{brute_force_isotropic_max, isotropic_subgroup, random_alternating_pairing};
use anisobound_core::quadform::{
    arf_invariant_class, extract_isotropic_from_order_p, pfister_verification, QuadraticForm, ARF_FIELD_CAP,
};
use anisobound_core::torus::{norm_quotient_torus_of, FiniteGroup, TorusModel};
use anisobound_core::{Field, FieldDescriptor, FieldElement, FieldMatrix, FieldRef};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::SeedableRng;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, f: impl FnOnce() -> Result<String, String>) -> Result<String, String> {
    let start = Instant::now();
    let detail = f()?;
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))?;
    Ok(format!("{detail} in {took:.2?}"))
}

fn ac1() -> Result<String, String> {
    // warm the prime sieve so the timing reflects the table itself
    let _ = upsilon_m(1);
    let expected = [(1u64, 2u64, 2u64), (2, 12, 24), (3, 48, 48)];
    timed(Duration::from_millis(1), || {
        for (n, a, m) in expected {
            let v = minkowski_values(n).map_err(|e| e.to_string())?;
            ensure(v.upsilon_a == Some(BigInt::from(a)) && v.upsilon_m == BigInt::from(m), || {
                format!("n = {n}: got {:?}, {}", v.upsilon_a, v.upsilon_m)
            })?;
        }
        Ok("Υ_A = 2, 12, 48; Υ_M = 2, 24, 48".into())
    })
}

fn desk_tori() -> Vec<TorusModel> {
    let mut out = vec![TorusModel::nonsplit_rank_one()];
    for g in [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::cyclic(4), FiniteGroup::symmetric3()] {
        out.push(norm_quotient_torus_of(&g).expect("nontrivial group"));
    }
    out
}

/// Θ-invariant vectors of (Z/d)^n by direct enumeration: (count, exponent).
fn invariant_torsion_oracle(gens: &[IntMatrix], n: usize, d: u64) -> (u64, u64) {
    let total = d.pow(n as u32);
    let mut count = 0;
    let mut exponent = 1u64;
    let mut v = vec![0i64; n];
    for idx in 0..total {
        let mut r = idx;
        for c in v.iter_mut() {
            *c = (r % d) as i64;
            r /= d;
        }
        let invariant = gens.iter().all(|g| {
            (0..n).all(|i| {
                let s: i64 = (0..n).map(|j| g[(i, j)].to_string().parse::<i64>().unwrap() * v[j]).sum();
                (s - v[i]).rem_euclid(d as i64) == 0
            })
        });
        if invariant {
            count += 1;
            let g = v.iter().fold(d, |acc, &x| acc.gcd(&(x as u64)));
            exponent = exponent.lcm(&(d / g));
        }
    }
    (count, exponent)
}

const ORACLE_LIMIT: u64 = 200_000;

fn ac2() -> Result<String, String> {
    timed(Duration::from_secs(5), || {
        let mut checked = 0;
        let mut oracle = 0;
        for t in desk_tori() {
            let theta = BigInt::from(t.theta_order());
            for d in 2..=50u64 {
                let r = t.torsion_points(d, None).map_err(|e| e.to_string())?;
                let exp = r.group.exponent();
                ensure(theta.is_multiple_of(&exp), || format!("{}: d = {d}, exponent {exp} ∤ |Θ| = {theta}", t.label()))?;
                if d.pow(t.rank() as u32) <= ORACLE_LIMIT {
                    let (count, e) = invariant_torsion_oracle(t.theta_generators(), t.rank(), d);
                    ensure(r.group.order() == Some(BigInt::from(count)) && exp == BigInt::from(e), || {
                        format!("{}: d = {d}, group {} but enumeration gives order {count}, exponent {e}", t.label(), r.group)
                    })?;
                    oracle += 1;
                }
                checked += 1;
            }
        }
        Ok(format!("{checked} (torus, d) pairs, {oracle} confirmed by enumeration"))
    })
}

fn ac3() -> Result<String, String> {
    let mut checked = 0;
    for t in desk_tori().into_iter().filter(|t| t.rank() <= 3) {
        let n = t.rank() as u64;
        let bound = num_traits::pow(upsilon_m(n), n as usize);
        for d in 2..=50u64 {
            let order = t.torsion_points(d, None).map_err(|e| e.to_string())?.group.order().unwrap();
            ensure(bound.is_multiple_of(&order), || format!("{}: d = {d}, order {order} ∤ {bound}", t.label()))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} torsion groups of rank ≤ 3 divide Υ_M(n)^n"))
}

fn ac4() -> Result<String, String> {
    timed(Duration::from_secs(30), || {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
        let mut maximal = 0;
        for trial in 0..200 {
            let p = random_alternating_pairing(&mut rng, 256);
            let order = p.group().order();
            ensure(order <= BigInt::from(256), || format!("trial {trial}: order {order}"))?;
            let lam = isotropic_subgroup(&p).map_err(|e| format!("trial {trial}: {e}"))?;
            ensure(p.is_isotropic(&lam.generators), || format!("trial {trial}: Λ not isotropic"))?;
            let sq = &lam.order * &lam.order;
            ensure(sq.is_multiple_of(&order), || format!("trial {trial}: |Γ| = {order} ∤ |Λ|² = {sq}"))?;
            let best = brute_force_isotropic_max(&p, 4096).map_err(|e| e.to_string())?;
            ensure(p.is_isotropic(&best.generators) && lam.order <= best.order, || {
                format!("trial {trial}: |Λ| = {} vs brute force {}", lam.order, best.order)
            })?;
            ensure((&best.order * &best.order).is_multiple_of(&order), || format!("trial {trial}: oracle infeasible"))?;
            if lam.order == best.order {
                maximal += 1;
            }
        }
        Ok(format!("200 pairings, {maximal} with |Λ| equal to the brute-force maximum"))
    })
}

fn ac5() -> Result<String, String> {
    for n in [2usize, 3, 5] {
        let spec = AlgebraSpec::generic_symbol(n).map_err(|e| e.to_string())?;
        let r = heisenberg_subgroup(&spec).map_err(|e| e.to_string())?;
        ensure(r.passes(), || format!("n = {n}: {r:?}"))?;
        let u = AlgebraElement::u(&spec);
        let v = AlgebraElement::v(&spec);
        let closure = projective_closure(&[u.clone(), v.clone()], 1000).map_err(|e| e.to_string())?;
        ensure(closure.len() == n * n, || format!("n = {n}: closure has {} classes", closure.len()))?;
        let un = u.pow(n as u64);
        let vn = v.pow(n as u64);
        ensure(un.as_scalar().is_some() && vn.as_scalar().is_some(), || format!("n = {n}: u^n or v^n not central"))?;
    }
    Ok("⟨[u],[v]⟩ ≅ (Z/n)² with pairing 1/n for n = 2, 3, 5".into())
}

fn ac6() -> Result<String, String> {
    timed(Duration::from_secs(10), || {
        for p in [2u64, 3, 5] {
            let c = weyl_split_verification(p).map_err(|e| e.to_string())?;
            ensure(c.passes() && c.monomial_rank == (p * p) as usize, || format!("p = {p}: certificate fails"))?;
            for m in 1..=4 {
                let r = inseparable_torsion_subgroup(p, &monic_irreducibles(p, m), 1 << 20).map_err(|e| e.to_string())?;
                let want = num_traits::pow(BigInt::from(p), m);
                ensure(r.order == want && r.commute && r.orders_divide_p(), || {
                    format!("p = {p}, m = {m}: order {}", r.order)
                })?;
            }
        }
        Ok("split certificates for p = 2, 3, 5 and subgroups of order p^m, m ≤ 4".into())
    })
}

fn field(d: FieldDescriptor) -> FieldRef {
    Field::new(&d).expect("valid descriptor")
}

/// GL_2 generators: elementary transvections x_i += c x_j and scalings of
/// one coordinate by a field generator.
fn gl2_generators(f: &FieldRef, elems: &[FieldElement]) -> Vec<FieldMatrix> {
    let mut gens = Vec::new();
    for c in elems.iter().filter(|c| !c.is_zero()) {
        let (o, z) = (f.one(), f.zero());
        gens.push(FieldMatrix::from_rows(f, vec![vec![o.clone(), c.clone()], vec![z.clone(), o.clone()]]).unwrap());
        gens.push(FieldMatrix::from_rows(f, vec![vec![o.clone(), z.clone()], vec![c.clone(), o.clone()]]).unwrap());
        gens.push(FieldMatrix::from_rows(f, vec![vec![c.clone(), z], vec![f.zero(), o]]).unwrap());
    }
    gens
}

fn form2(f: &FieldRef, a: &FieldElement, b: &FieldElement, c: &FieldElement) -> QuadraticForm {
    QuadraticForm::new(f, vec![vec![a.clone(), b.clone()], vec![f.zero(), c.clone()]]).unwrap()
}

fn key(q: &QuadraticForm) -> [FieldElement; 3] {
    [q.coeff(0, 0).clone(), q.coeff(0, 1).clone(), q.coeff(1, 1).clone()]
}

fn ac7() -> Result<String, String> {
    timed(Duration::from_secs(60), || {
        let mut notes = Vec::new();
        for desc in [FieldDescriptor::PrimeField(2), FieldDescriptor::FiniteField { p: 2, m: 2 }] {
            let f = field(desc.clone());
            let elems = f.elements(16).map_err(|e| e.to_string())?;
            let gens = gl2_generators(&f, &elems);
            let mut forms = Vec::new();
            for a in &elems {
                for b in elems.iter().filter(|b| !b.is_zero()) {
                    for c in &elems {
                        forms.push(form2(&f, a, b, c));
                    }
                }
            }
            let mut orbit_of: HashMap<[FieldElement; 3], usize> = HashMap::new();
            let mut orbits = 0;
            for q in &forms {
                if orbit_of.contains_key(&key(q)) {
                    continue;
                }
                let mut queue = VecDeque::from([q.clone()]);
                orbit_of.insert(key(q), orbits);
                while let Some(x) = queue.pop_front() {
                    for g in &gens {
                        let y = x.transform(g).unwrap();
                        if let std::collections::hash_map::Entry::Vacant(e) = orbit_of.entry(key(&y)) {
                            e.insert(orbits);
                            queue.push_back(y);
                        }
                    }
                }
                orbits += 1;
            }
            ensure(orbits == 2, || format!("{desc:?}: {orbits} orbits"))?;
            // the Arf parameter ac/b² separates the orbits exactly
            let arf = |q: &QuadraticForm| -> FieldElement {
                let [a, b, c] = key(q);
                (&a * &c).try_div(&(&b * &b)).unwrap()
            };
            for p in &forms {
                for q in &forms {
                    let same_orbit = orbit_of[&key(p)] == orbit_of[&key(q)];
                    let same_class = arf_invariant_class(&arf(p), &arf(q), ARF_FIELD_CAP).map_err(|e| e.to_string())?;
                    ensure(same_orbit == same_class, || format!("{desc:?}: Arf class disagrees with orbits"))?;
                }
            }
            notes.push(format!("{} forms over F_{}", forms.len(), elems.len()));
        }
        let f2 = field(FieldDescriptor::PrimeField(2));
        let bits = |x: u32, i: usize| f2.from_i64(((x >> i) & 1) as i64);
        let vectors: Vec<Vec<FieldElement>> = (1u32..16).map(|x| (0..4).map(|i| bits(x, i)).collect()).collect();
        let mut nondegenerate = 0;
        for mask in 0u32..1 << 10 {
            let mut rows = vec![vec![f2.zero(); 4]; 4];
            let mut bit = 0;
            for i in 0..4 {
                for j in i..4 {
                    rows[i][j] = bits(mask, bit);
                    bit += 1;
                }
            }
            let q = QuadraticForm::new(&f2, rows).unwrap();
            if !q.is_nondegenerate() {
                continue;
            }
            nondegenerate += 1;
            ensure(vectors.iter().any(|v| q.eval(v).is_zero()), || format!("form {mask:#b} is anisotropic"))?;
        }
        ensure(nondegenerate > 0, || "no nondegenerate dim-4 forms".into())?;
        notes.push(format!("{nondegenerate} nondegenerate dim-4 forms over F_2 all isotropic"));
        Ok(notes.join("; "))
    })
}

fn ac8() -> Result<String, String> {
    let mut cases = 0;
    for p in [3u64, 5] {
        let f = field(FieldDescriptor::PrimeField(p));
        let n = p as usize;
        let q = QuadraticForm::diagonal(&f, &vec![f.one(); n]).unwrap();
        let mut g = FieldMatrix::zero(&f, n, n);
        for i in 0..n {
            g[((i + 1) % n, i)] = f.one();
        }
        // the same isometry in a skewed basis: q∘C and C⁻¹gC
        let mut c = FieldMatrix::identity(&f, n);
        for i in 0..n - 1 {
            c[(i, i + 1)] = f.from_i64(i as i64 + 1);
        }
        let ci = c.inverse().unwrap();
        let variants = [(q.clone(), g.clone()), (q.transform(&c).unwrap(), ci.try_mul(&g).unwrap().try_mul(&c).unwrap())];
        for (form, iso) in variants {
            ensure(form.transform(&iso).unwrap() == form, || format!("p = {p}: test isometry is wrong"))?;
            let v = extract_isotropic_from_order_p(&form, &iso).map_err(|e| format!("p = {p}: {e}"))?;
            ensure(v.iter().any(|x| !x.is_zero()) && form.eval(&v).is_zero(), || format!("p = {p}: {v:?} not isotropic"))?;
            ensure(iso.mul_vec(&v) == v, || format!("p = {p}: v is not fixed by g"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} isometries of order p in char 3 and 5 give isotropic fixed vectors"))
}

fn ac9() -> Result<String, String> {
    timed(Duration::from_secs(60), || {
        let v = pfister_verification(3, 100, 3, 0).map_err(|e| e.to_string())?;
        ensure(v.passes() && v.closure_order == 8, || format!("{}", v.to_json()))?;
        let bound = num_traits::pow(BigInt::from(8), 7);
        ensure((bound % v.closure_order).is_zero(), || "8 ∤ 8^7".into())?;
        Ok(format!("closure of order {}, {}/{} candidates refuted", v.closure_order, v.refuted, v.trials))
    })
}

fn ac10() -> Result<String, String> {
    let mut labels = Vec::new();
    for (g, d) in burnside_examples().map_err(|e| e.to_string())? {
        let r = burnside_divisibility_check(&g, d).map_err(|e| e.to_string())?;
        // independent recount: x^d = 1 for every x of order prime to char K
        let p = g.field().characteristic();
        let order_of = |x: &FieldMatrix| (1..=g.order() as u64).find(|&k| x.pow(k).is_identity()).unwrap();
        let all_pow = g
            .elements()
            .iter()
            .filter(|x| p == 0 || order_of(x) % p != 0)
            .all(|x| x.pow(d).is_identity());
        let distinct: HashSet<&FieldMatrix> = g.elements().iter().collect();
        let dn = num_traits::pow(BigInt::from(d), g.degree());
        ensure(r.hypothesis_holds() && all_pow && distinct.len() == g.order(), || format!("{}: hypothesis", g.label()))?;
        ensure(r.divides && dn.is_multiple_of(&r.order_prime_part), || format!("{}: |Γ|′ ∤ d^n", g.label()))?;
        labels.push(format!("{} ({} | {})", g.label(), r.order_prime_part, dn));
    }
    ensure(labels.len() == 3, || "expected three example groups".into())?;
    Ok(labels.join(", "))
}

fn main() {
    // `cargo test -- --list` and similar probes expect no output work
    if std::env::args().any(|a| a == "--list") {
        return;
    }
    let checks: [(&str, &str, Check); 10] = [
        ("AC1", "Minkowski table", ac1),
        ("AC2", "torsion exponent divides |Θ|", ac2),
        ("AC3", "torsion order divides Υ_M(n)^n", ac3),
        ("AC4", "isotropic subgroups of random pairings", ac4),
        ("AC5", "symbol algebra Heisenberg subgroup", ac5),
        ("AC6", "char-p Weyl algebra splitting and p-subgroups", ac6),
        ("AC7", "Arf classes and isotropy in char 2", ac7),
        ("AC8", "isotropic vectors from order-p isometries", ac8),
        ("AC9", "Pfister quadric k = 3", ac9),
        ("AC10", "Burnside-type divisibility", ac10),
    ];
    let mut failed = 0;
    for (id, name, check) in checks {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("[PASS] {id} {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {id} {name}: {why}");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
