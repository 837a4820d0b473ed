//! Argument parsing and JSON dispatch for the `anisobound` binary.
//!
//! Every command prints one JSON document. Failures print
//! `{"error": {"kind", "path", "message"}}` and exit nonzero.

use std::io::Read;

use anisobound_core::bounds::{
    bound_calculator, burnside_divisibility_check, burnside_examples, minkowski_values, torsion_primes, BoundKind,
    BoundQuery, DynkinType,
};
use anisobound_core::csa::{
    finite_order_in_projective_units, inseparable_torsion_subgroup, monic_irreducibles, norm_residue_class,
    polys_from_json, reduced_norm, weyl_split_verification, AlgebraElement, AlgebraSpec,
};
use anisobound_core::lattice::DEFAULT_CLOSURE_CAP;
use anisobound_core::pairing::{
    brute_force_isotropic_max, isotropic_subgroup, random_alternating_pairing, AlternatingPairing,
};
use anisobound_core::quadform::{
    arf_normal_form, extract_isotropic_from_order_p, involution_check, pfister_verification, QuadraticForm,
};
use anisobound_core::replay::{replay_report, run_replay};
use anisobound_core::torus::{norm_quotient_torus_of, FiniteGroup, TorusModel};
use anisobound_core::{Error, FieldMatrix, Result};
use num_bigint::BigInt;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use serde_json::{json, Value};

pub const CAP_ENV: &str = "ANISOBOUND_CLOSURE_CAP";

#[derive(Parser, Debug)]
#[command(name = "anisobound", version, about = "Exact finite-subgroup bounds for anisotropic groups")]
pub struct Cli {
    /// Seed for randomized trials.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// JSON payload: inline text, a file path, or "-" for stdin.
    #[arg(long, global = true)]
    pub json: Option<String>,
    /// Enumeration and closure cap.
    #[arg(long, global = true, env = CAP_ENV)]
    pub cap: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Divisor and exponent bounds, Minkowski values, torsion primes and the
    /// Burnside-type check.
    Bounds(BoundsArgs),
    /// Anisotropic tori from their cocharacter lattice
    #[command(subcommand)]
    Torus(TorusCmd),
    /// Alternating pairings on finite abelian groups
    #[command(subcommand)]
    Pairing(PairingCmd),
    /// Symbol algebras and the char-p Weyl algebra
    #[command(subcommand)]
    Csa(CsaCmd),
    /// Quadratic forms, Arf invariants and the Pfister quadric
    #[command(subcommand)]
    Quad(QuadCmd),
    /// Re-run the worked examples.
    Replay {
        /// Entries to run; all when omitted.
        #[arg(long = "id")]
        ids: Vec<String>,
    },
}

#[derive(Args, Debug)]
pub struct BoundsArgs {
    /// torus, reductive_perfect, general_lag, semisimple_char_p,
    /// severi_brauer, quadric_odd, quadric_even, minkowski, torsion_primes
    /// or burnside.
    #[arg(long)]
    pub kind: String,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub r: Option<u64>,
    #[arg(long = "N")]
    pub big_n: Option<u64>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub pi1: Option<u64>,
    /// Comma-separated Dynkin types for torsion_primes, e.g. "E8,B3".
    #[arg(long)]
    pub types: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum TorusCmd {
    /// Anisotropy, H¹ and torsion exponents of a torus given as
    /// {"rank", "theta_generators"} or {"group": "Z/n" | "S3" | "Q8" | "D<n>"}.
    Analyze {
        #[arg(long, default_value_t = 30)]
        d_max: u64,
        #[arg(long)]
        characteristic: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum PairingCmd {
    /// A maximal isotropic subgroup Λ with |Γ| dividing |Λ|².
    Isotropic,
    /// Check that the Gram matrix is well defined and alternating
    Validate,
    /// Largest isotropic subgroup by exhaustive search.
    BruteForce,
    /// Seeded random pairings checked against the brute-force search.
    Fuzz {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 256)]
        max_order: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum CsaCmd {
    /// Reduced norm, norm residue class and projective order of an element:
    /// {"algebra": spec, "element": {"i,j": coeff}}.
    Norm,
    /// Split certificate for the char-p Weyl algebra
    VerifyWeyl {
        #[arg(long)]
        p: u64,
    },
    /// Elementary abelian p-subgroups [f(v)] of the char-p algebra, from
    /// {"p", "polys"} or the first m monic irreducibles.
    Torsion {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        m: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum QuadCmd {
    /// Arf normal form of a nondegenerate even-dimensional form in char 2.
    Arf,
    /// Checks on the k-fold Pfister quadric and refutation of random points.
    Pfister {
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 3)]
        max_degree: u32,
    },
    /// {"form": q, "isometry": matrix} with the isometry of order char K.
    ExtractIsotropic,
    /// {"form": q, "isometry": matrix}: projective order and eigenvalues.
    Involution,
}

/// Outcome of one invocation: the JSON document and the exit status.
#[derive(Debug)]
pub struct Outcome {
    pub output: Value,
    pub status: i32,
}

pub fn error_json(e: &Error) -> Value {
    let path = match e {
        Error::Schema { path, .. } => Value::String(path.clone()),
        _ => Value::Null,
    };
    json!({"error": {"kind": e.kind(), "path": path, "message": e.to_string()}})
}

/// Parses `args` (including the program name) and runs the command.
pub fn dispatch<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let kind = e.kind();
            if matches!(kind, clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
                return Outcome { output: Value::String(e.to_string()), status: 0 };
            }
            let err = Error::InvalidParameter(e.to_string().trim().to_string());
            return Outcome { output: error_json(&err), status: 2 };
        }
    };
    match run(&cli) {
        Ok((output, ok)) => Outcome { output, status: if ok { 0 } else { 1 } },
        Err(e) => Outcome { output: error_json(&e), status: 1 },
    }
}

fn payload(cli: &Cli) -> Result<Value> {
    let raw = cli.json.as_deref().ok_or_else(|| Error::schema("$", "this command needs --json"))?;
    let text = if raw == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::schema("$", format!("cannot read stdin: {e}")))?;
        s
    } else if raw.trim_start().starts_with(['{', '[']) {
        raw.to_string()
    } else {
        std::fs::read_to_string(raw).map_err(|e| Error::schema("$", format!("cannot read {raw}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::schema("$", format!("malformed JSON: {e}")))
}

fn run(cli: &Cli) -> Result<(Value, bool)> {
    let cap = cli.cap.unwrap_or(DEFAULT_CLOSURE_CAP);
    let done = |v: Value| Ok((v, true));
    match &cli.command {
        Command::Bounds(a) => bounds(a),
        Command::Torus(TorusCmd::Analyze { d_max, characteristic }) => {
            done(torus_analyze(&payload(cli)?, cap, *d_max, *characteristic)?)
        }
        Command::Pairing(cmd) => pairing(cli, cmd, cap),
        Command::Csa(cmd) => csa(cli, cmd),
        Command::Quad(cmd) => quad(cli, cmd),
        Command::Replay { ids } => {
            let filter = if ids.is_empty() { None } else { Some(ids.as_slice()) };
            let entries = run_replay(filter, cli.seed)?;
            let report = replay_report(&entries);
            let ok = entries.iter().all(|e| e.passed);
            Ok((report, ok))
        }
    }
}

fn bounds(a: &BoundsArgs) -> Result<(Value, bool)> {
    match a.kind.as_str() {
        "minkowski" => {
            let n = a.n.ok_or_else(|| Error::MissingParameter("n".into()))?;
            Ok((minkowski_values(n)?.to_json(), true))
        }
        "torsion_primes" => {
            let raw = a.types.as_deref().ok_or_else(|| Error::MissingParameter("types".into()))?;
            let types = raw.split(',').map(DynkinType::parse).collect::<Result<Vec<_>>>()?;
            let primes: Vec<String> = torsion_primes(&types).iter().map(u64::to_string).collect();
            Ok((json!({"types": types.iter().map(|t| t.to_string()).collect::<Vec<_>>(), "torsion_primes": primes}), true))
        }
        "burnside" => {
            let mut rows = Vec::new();
            let mut ok = true;
            for (g, d) in burnside_examples()? {
                let r = burnside_divisibility_check(&g, d)?;
                ok &= r.hypothesis_holds() && r.divides;
                rows.push(r.to_json());
            }
            Ok((json!({"groups": rows, "all_pass": ok}), ok))
        }
        other => {
            let kind = BoundKind::parse(other)?;
            let q = BoundQuery { n: a.n, r: a.r, big_n: a.big_n, p: a.p, pi1_order: a.pi1 };
            Ok((bound_calculator(kind, &q)?.to_json(), true))
        }
    }
}

fn parse_group(name: &str) -> Result<FiniteGroup> {
    let bad = || Error::schema("$.group", format!("unknown group `{name}`"));
    Ok(match name {
        "S3" => FiniteGroup::symmetric3(),
        "Q8" => FiniteGroup::quaternion(),
        _ if name.starts_with("Z/") => {
            let n: usize = name[2..].parse().map_err(|_| bad())?;
            if n < 1 {
                return Err(bad());
            }
            FiniteGroup::cyclic(n)
        }
        _ if name.starts_with('D') => FiniteGroup::dihedral(name[1..].parse().map_err(|_| bad())?),
        _ => return Err(bad()),
    })
}

fn torus_analyze(v: &Value, cap: usize, d_max: u64, characteristic: Option<u64>) -> Result<Value> {
    let t = match v.get("group") {
        Some(g) => {
            let name = g.as_str().ok_or_else(|| Error::schema("$.group", "expected a string"))?;
            norm_quotient_torus_of(&parse_group(name)?)?
        }
        None => TorusModel::from_json(v, "$", cap)?,
    };
    let anisotropic = t.is_anisotropic()?;
    let h1 = t.h1()?;
    let exponents = if anisotropic { Some(t.exponent_bound_check(d_max, characteristic)?.to_json()) } else { None };
    Ok(json!({
        "torus": t.to_json(),
        "theta_order": t.theta_order().to_string(),
        "anisotropic": anisotropic,
        "h1": h1.to_json(),
        "h1_exponent_divides_theta_order": BigInt::from(t.theta_order()) % h1.exponent() == BigInt::from(0),
        "exponent_check": exponents,
    }))
}

fn pairing(cli: &Cli, cmd: &PairingCmd, cap: usize) -> Result<(Value, bool)> {
    match cmd {
        PairingCmd::Fuzz { trials, max_order } => {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
            let mut failures = Vec::new();
            for t in 0..*trials {
                let p = random_alternating_pairing(&mut rng, *max_order);
                let lam = isotropic_subgroup(&p)?;
                let best = brute_force_isotropic_max(&p, cap.max(4096) as u64)?;
                let order = p.group().order();
                let ok = p.is_isotropic(&lam.generators)
                    && (&lam.order * &lam.order) % &order == BigInt::from(0)
                    && lam.order <= best.order;
                if !ok {
                    failures.push(json!({"trial": t, "pairing": p.to_json()}));
                }
            }
            let ok = failures.is_empty();
            Ok((json!({"seed": cli.seed, "trials": trials, "failures": failures, "all_pass": ok}), ok))
        }
        _ => {
            let p = AlternatingPairing::from_json(&payload(cli)?, "$")?;
            match cmd {
                PairingCmd::Isotropic => {
                    let lam = isotropic_subgroup(&p)?;
                    let order = p.group().order();
                    let divides = (&lam.order * &lam.order) % &order == BigInt::from(0);
                    let mut out = lam.to_json();
                    out["group_order"] = json!(order.to_string());
                    out["isotropic"] = json!(p.is_isotropic(&lam.generators));
                    out["group_order_divides_order_squared"] = json!(divides);
                    Ok((out, true))
                }
                PairingCmd::Validate => {
                    let r = p.validate();
                    Ok((json!({"valid": r.valid, "exhaustive": r.exhaustive, "diagnostics": r.diagnostics}), r.valid))
                }
                PairingCmd::BruteForce => Ok((brute_force_isotropic_max(&p, cap as u64)?.to_json(), true)),
                PairingCmd::Fuzz { .. } => unreachable!(),
            }
        }
    }
}

fn csa(cli: &Cli, cmd: &CsaCmd) -> Result<(Value, bool)> {
    match cmd {
        CsaCmd::Norm => {
            let v = payload(cli)?;
            let spec = AlgebraSpec::from_json(v.get("algebra").unwrap_or(&Value::Null), "$.algebra")?;
            let x = AlgebraElement::from_json(&spec, v.get("element").unwrap_or(&Value::Null), "$.element")?;
            let norm = reduced_norm(&x)?;
            let class = norm_residue_class(&x)?;
            let order = finite_order_in_projective_units(&x, None)?;
            Ok((
                json!({
                    "element": x.to_string(),
                    "reduced_norm": norm.to_string(),
                    "norm_residue_class": class.to_json(),
                    "projective_order": order.to_json(),
                }),
                true,
            ))
        }
        CsaCmd::VerifyWeyl { p } => {
            let c = weyl_split_verification(*p)?;
            Ok((c.to_json(), c.passes()))
        }
        CsaCmd::Torsion { p, m } => {
            let (p, polys) = match (p, m) {
                (Some(p), Some(m)) => (*p, monic_irreducibles(*p, *m)),
                _ => {
                    let v = payload(cli)?;
                    let p = v
                        .get("p")
                        .and_then(Value::as_u64)
                        .ok_or_else(|| Error::schema("$.p", "expected a prime"))?;
                    (p, polys_from_json(v.get("polys").unwrap_or(&Value::Null), "$.polys")?)
                }
            };
            let r = inseparable_torsion_subgroup(p, &polys, cli.cap.unwrap_or(1 << 20) as u64)?;
            Ok((r.to_json(), true))
        }
    }
}

fn form_and_isometry(cli: &Cli) -> Result<(QuadraticForm, FieldMatrix)> {
    let v = payload(cli)?;
    let q = QuadraticForm::from_json(v.get("form").unwrap_or(&Value::Null), "$.form")?;
    let g = FieldMatrix::from_json(q.field(), v.get("isometry").unwrap_or(&Value::Null), "$.isometry")?;
    Ok((q, g))
}

fn quad(cli: &Cli, cmd: &QuadCmd) -> Result<(Value, bool)> {
    match cmd {
        QuadCmd::Arf => {
            let q = QuadraticForm::from_json(&payload(cli)?, "$")?;
            let nf = arf_normal_form(&q)?;
            Ok((json!({"arf": nf.a.to_string(), "change": nf.change.to_json()}), true))
        }
        QuadCmd::Pfister { k, trials, max_degree } => {
            let v = pfister_verification(*k, *trials, *max_degree, cli.seed)?;
            Ok((v.to_json(), v.passes()))
        }
        QuadCmd::ExtractIsotropic => {
            let (q, g) = form_and_isometry(cli)?;
            let x = extract_isotropic_from_order_p(&q, &g)?;
            let value = q.eval(&x);
            Ok((
                json!({
                    "vector": x.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "q_value": value.to_string(),
                    "isotropic": value.is_zero(),
                }),
                value.is_zero(),
            ))
        }
        QuadCmd::Involution => {
            let (q, g) = form_and_isometry(cli)?;
            Ok((involution_check(&q, &g)?.to_json(), true))
        }
    }
}
