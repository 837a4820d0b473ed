//! Registry that re-runs every worked example end to end and reports
//! pass/fail with diagnostics.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::bounds::minkowski_values;
use crate::csa::{inseparable_torsion_subgroup, monic_irreducibles, weyl_split_verification};
use crate::error::{Error, Result};
use crate::quadform::pfister_verification;
use crate::torus::{norm_quotient_torus_of, FiniteGroup, TorusModel};

pub const REPLAY_IDS: [&str; 5] = ["minkowski-table", "example-2.5", "example-2.6", "example-4.8", "example-5.4"];

/// Random candidates refuted by the Pfister entry.
pub const PFISTER_TRIALS: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct ReplayEntry {
    pub id: String,
    pub parameters: Value,
    pub expected: String,
    pub passed: bool,
    pub diagnostics: Value,
}

impl ReplayEntry {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "parameters": self.parameters,
            "expected": self.expected,
            "status": if self.passed { "pass" } else { "fail" },
            "diagnostics": self.diagnostics,
        })
    }
}

/// Runs the entries in `filter` (all when `None`) concurrently and returns
/// them in registry order. `seed` drives the randomized Pfister trials.
pub fn run_replay(filter: Option<&[String]>, seed: u64) -> Result<Vec<ReplayEntry>> {
    let ids: Vec<&'static str> = match filter {
        None => REPLAY_IDS.to_vec(),
        Some(f) => {
            for id in f {
                if !REPLAY_IDS.contains(&id.as_str()) {
                    return Err(Error::UnknownExampleId(id.clone()));
                }
            }
            REPLAY_IDS.iter().copied().filter(|id| f.iter().any(|x| x == id)).collect()
        }
    };
    let entries = std::thread::scope(|s| {
        let handles: Vec<_> = ids.iter().map(|&id| s.spawn(move || run_one(id, seed))).collect();
        handles.into_iter().map(|h| h.join().expect("replay entry panicked")).collect()
    });
    Ok(entries)
}

pub fn replay_report(entries: &[ReplayEntry]) -> Value {
    json!({
        "entries": entries.iter().map(ReplayEntry::to_json).collect::<Vec<_>>(),
        "all_pass": entries.iter().all(|e| e.passed),
    })
}

fn run_one(id: &'static str, seed: u64) -> ReplayEntry {
    let (parameters, expected, outcome) = match id {
        "minkowski-table" => (json!({"n": [1, 2, 3]}), "Υ_A = 2, 12, 48 and Υ_M = 2, 24, 48", minkowski_table()),
        "example-2.5" => (
            json!({"torus": "nonsplit rank 1", "d": [2, 7, 9], "d_max": 20}),
            "T[2] has order 2, T[7] and T[9] are trivial, every exponent is 1 or 2",
            example_2_5(),
        ),
        "example-2.6" => (
            json!({"groups": ["Z/2", "Z/3", "Z/4", "S3"], "d_max": 30}),
            "norm quotient tori are anisotropic and every torsion exponent divides |G|",
            example_2_6(),
        ),
        "example-4.8" => (
            json!({"p": [2, 3, 5], "m": [1, 2, 3, 4]}),
            "the split certificate holds and subgroups of order p^m exist for every m",
            example_4_8(),
        ),
        "example-5.4" => (
            json!({"k": 3, "trials": PFISTER_TRIALS, "max_degree": 3, "seed": seed}),
            "σ² = τ² = 1 ≠ [σ,τ], q∘τ = a_123·q, closure of order 8, no rational points",
            example_5_4(seed),
        ),
        _ => unreachable!("validated id"),
    };
    let (passed, diagnostics) = match outcome {
        Ok(x) => x,
        Err(e) => (false, json!({"error": {"kind": e.kind(), "message": e.to_string()}})),
    };
    ReplayEntry { id: id.to_string(), parameters, expected: expected.to_string(), passed, diagnostics }
}

fn minkowski_table() -> Result<(bool, Value)> {
    let expected = [(1, 2, 2), (2, 12, 24), (3, 48, 48)];
    let mut rows = Vec::new();
    let mut ok = true;
    for (n, a, m) in expected {
        let v = minkowski_values(n)?;
        ok &= v.upsilon_a == Some(BigInt::from(a)) && v.upsilon_m == BigInt::from(m);
        rows.push(v.to_json());
    }
    Ok((ok, json!({ "rows": rows })))
}

fn example_2_5() -> Result<(bool, Value)> {
    let t = TorusModel::nonsplit_rank_one();
    let orders: Vec<BigInt> = [2, 7, 9]
        .iter()
        .map(|&d| t.torsion_points(d, None).map(|r| r.group.order().expect("finite")))
        .collect::<Result<_>>()?;
    let report = t.exponent_bound_check(20, None)?;
    let cert = t.averaging_certificate(2, &[BigInt::from(1)])?;
    let small = report.rows.iter().all(|r| r.exponent <= BigInt::from(2));
    let ok = orders == [BigInt::from(2), BigInt::from(1), BigInt::from(1)] && report.all_ok && small && cert.is_valid();
    Ok((
        ok,
        json!({
            "torsion_orders": orders.iter().map(|o| o.to_string()).collect::<Vec<_>>(),
            "exponents_in_1_2": small,
            "averaging_certificate_valid": cert.is_valid(),
            "exponent_check": report.to_json(),
        }),
    ))
}

fn example_2_6() -> Result<(bool, Value)> {
    let groups = [FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::cyclic(4), FiniteGroup::symmetric3()];
    let mut ok = true;
    let mut rows = Vec::new();
    for g in &groups {
        let t = norm_quotient_torus_of(g)?;
        let anisotropic = t.is_anisotropic()?;
        let report = t.exponent_bound_check(30, None)?;
        ok &= anisotropic && report.all_ok;
        let max_exponent = report.rows.iter().map(|r| r.exponent.clone()).max().unwrap_or_default();
        rows.push(json!({
            "group": g.label(),
            "rank": t.rank(),
            "anisotropic": anisotropic,
            "theta_order": t.theta_order(),
            "max_exponent": max_exponent.to_string(),
            "all_ok": report.all_ok,
        }));
    }
    Ok((ok, json!({ "tori": rows })))
}

fn example_4_8() -> Result<(bool, Value)> {
    let mut ok = true;
    let mut certs = Vec::new();
    let mut subgroups = Vec::new();
    for p in [2u64, 3, 5] {
        let c = weyl_split_verification(p)?;
        ok &= c.passes();
        certs.push(json!({"p": p, "pass": c.passes(), "monomial_rank": c.monomial_rank}));
        for m in 1..=4 {
            let r = inseparable_torsion_subgroup(p, &monic_irreducibles(p, m), 1 << 20)?;
            let expected = num_traits::pow(BigInt::from(p), m);
            let good = r.order == expected && r.commute && r.orders_divide_p();
            ok &= good;
            subgroups.push(json!({"p": p, "m": m, "order": r.order.to_string(), "pass": good}));
        }
    }
    Ok((ok, json!({ "split_certificates": certs, "subgroups": subgroups })))
}

fn example_5_4(seed: u64) -> Result<(bool, Value)> {
    let v = pfister_verification(3, PFISTER_TRIALS, 3, seed)?;
    Ok((v.passes() && v.closure_order == 8, v.to_json()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_and_unknown_id() {
        let one = run_replay(Some(&["example-2.5".to_string()]), 0).unwrap();
        assert_eq!(one.len(), 1);
        assert!(one[0].passed, "{}", one[0].diagnostics);
        assert!(matches!(run_replay(Some(&["nonsense".to_string()]), 0), Err(Error::UnknownExampleId(_))));
    }

    #[test]
    fn all_entries_pass() {
        let all = run_replay(None, 0).unwrap();
        assert_eq!(all.len(), REPLAY_IDS.len());
        for e in &all {
            assert!(e.passed, "{}: {}", e.id, e.diagnostics);
        }
    }
}
