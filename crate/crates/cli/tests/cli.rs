use std::process::Command;

use anisobound_cli::dispatch;
use serde_json::Value;

fn run(args: &[&str]) -> (Value, i32) {
    let o = dispatch(std::iter::once("anisobound").chain(args.iter().copied()));
    (o.output, o.status)
}

const Z4_SQUARED: &str = r#"{"invariant_factors":["4","4"],"gram":[["0","1/4"],["3/4","0"]]}"#;

#[test]
fn quadric_even_bound() {
    let (v, status) = run(&["bounds", "--kind", "quadric_even", "--n", "4"]);
    assert_eq!(status, 0);
    assert_eq!(v["divisor_bound"], "512");
}

#[test]
fn minkowski_and_torus_bounds() {
    let (v, _) = run(&["bounds", "--kind", "minkowski", "--n", "2"]);
    assert_eq!((v["upsilon_a"].as_str(), v["upsilon_m"].as_str()), (Some("12"), Some("24")));
    let (v, _) = run(&["bounds", "--kind", "minkowski", "--n", "5"]);
    assert_eq!(v["upsilon_a_status"], "table exhausted");
    let (v, _) = run(&["bounds", "--kind", "torus", "--n", "2"]);
    assert_eq!(v["divisor_bound"], "576");
    let (v, status) = run(&["bounds", "--kind", "general_lag", "--n", "2"]);
    assert_eq!((v["error"]["kind"].as_str(), status), (Some("MissingParameter"), 1));
    let (v, _) = run(&["bounds", "--kind", "semisimple_char_p", "--n", "1", "--r", "1", "--N", "2", "--p", "2", "--pi1", "4"]);
    assert_eq!((v["divisor_bound"].as_str(), v["exponent_bound"].as_str()), (Some("4"), Some("4")));
    let (v, _) = run(&["bounds", "--kind", "torsion_primes", "--types", "E8,A3"]);
    assert_eq!(v["torsion_primes"], serde_json::json!(["2", "3", "5"]));
    let (v, status) = run(&["bounds", "--kind", "burnside"]);
    assert_eq!((v["all_pass"].as_bool(), status), (Some(true), 0));
}

#[test]
fn pairing_isotropic_on_z4_squared() {
    let (v, status) = run(&["pairing", "isotropic", "--json", Z4_SQUARED]);
    assert_eq!(status, 0, "{v}");
    assert_eq!(v["order"], "4");
    assert_eq!(v["isotropic"], true);
    let (v, _) = run(&["pairing", "brute-force", "--json", Z4_SQUARED]);
    assert_eq!(v["order"], "4");
}

#[test]
fn invalid_pairing_is_reported() {
    let bad = r#"{"invariant_factors":["4"],"gram":[["1/4"]]}"#;
    let (v, status) = run(&["pairing", "validate", "--json", bad]);
    assert_eq!((v["valid"].as_bool(), status), (Some(false), 1));
}

#[test]
fn malformed_json_is_a_schema_error() {
    let (v, status) = run(&["pairing", "isotropic", "--json", "{\"invariant_factors\": "]);
    assert_eq!(status, 1);
    assert_eq!(v["error"]["kind"], "SchemaError");
    let (v, _) = run(&["pairing", "isotropic", "--json", r#"{"invariant_factors":["4","x"],"gram":[]}"#]);
    assert_eq!(v["error"]["kind"], "SchemaError");
    assert!(v["error"]["path"].as_str().unwrap().starts_with("$.invariant_factors"), "{v}");
}

#[test]
fn torus_analyze_group() {
    let (v, status) = run(&["torus", "analyze", "--json", r#"{"group":"Z/3"}"#, "--d-max", "12"]);
    assert_eq!(status, 0, "{v}");
    assert_eq!(v["anisotropic"], true);
    assert_eq!(v["exponent_check"]["all_ok"], true);
    let split = r#"{"rank":1,"theta_generators":[]}"#;
    let (v, _) = run(&["torus", "analyze", "--json", split]);
    assert_eq!(v["anisotropic"], false);
}

#[test]
fn csa_and_quad_commands() {
    let (v, status) = run(&["csa", "verify-weyl", "--p", "3"]);
    assert_eq!(status, 0, "{v}");
    let (v, _) = run(&["csa", "torsion", "--p", "2", "--m", "3"]);
    assert_eq!(v["order"], "8");
    let (v, status) = run(&["quad", "pfister", "--k", "2", "--trials", "5"]);
    assert_eq!((v["pass"].as_bool(), status), (Some(true), 0), "{v}");
    let (v, status) = run(&["csa", "verify-weyl", "--p", "11"]);
    assert_eq!((v["error"]["kind"].as_str(), status), (Some("PrimeTooLarge"), 1));
}

#[test]
fn replay_is_deterministic_and_validates_ids() {
    let (a, status) = run(&["replay"]);
    assert_eq!(status, 0, "{a}");
    let (b, _) = run(&["replay"]);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let (one, _) = run(&["replay", "--id", "example-2.5"]);
    assert_eq!(one["entries"].as_array().unwrap().len(), 1);
    let (v, status) = run(&["replay", "--id", "nonsense"]);
    assert_eq!((v["error"]["kind"].as_str(), status), (Some("UnknownExampleId"), 1));
}

#[test]
fn binary_round_trip() {
    let bin = env!("CARGO_BIN_EXE_anisobound");
    let out = Command::new(bin).args(["bounds", "--kind", "quadric_even", "--n", "4"]).output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["divisor_bound"], "512");
    let a = Command::new(bin).arg("replay").output().unwrap();
    let b = Command::new(bin).arg("replay").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
    let bad = Command::new(bin).args(["replay", "--id", "nonsense"]).output().unwrap();
    assert!(!bad.status.success());
    let cap = Command::new(bin)
        .env("ANISOBOUND_CLOSURE_CAP", "2")
        .args(["torus", "analyze", "--json", r#"{"rank":2,"theta_generators":[{"rows":2,"cols":2,"entries":[[0,-1],[1,0]]}]}"#])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&cap.stdout).unwrap();
    assert_eq!(v["error"]["kind"], "ClosureCapExceeded");
}
