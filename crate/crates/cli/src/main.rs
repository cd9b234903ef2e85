//! Command-line surface for the K3 lattice toolkit: lattice inspection,
//! slice enumeration, ACM classification and the verification suites, all
//! with canonical machine-readable reports.
//!
//! Reports are JSON with sorted keys and integer-only numerics, so a fixed
//! input produces byte-identical output across runs and platforms. Timing is
//! only embedded on request to keep that contract.
//!
//! Exit codes: 0 success / all checks passed, 1 verification failure,
//! 2 input or usage error.

use std::io::Read;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use k3acm_core::classify::{
    classify_dp9, classify_genus2, classify_quartic, classify_very_ample, Dp9Verdict, Dp9Witness,
    NegTwoShape, PolarizationTrust,
};
use k3acm_core::enumerate::{enumerate_slice, SliceQuery, SquareConstraint};
use k3acm_core::extensions::family_plan;
use k3acm_core::geometry::SurfaceGeometry;
use k3acm_core::lattice::TwoElementaryOutcome;
use k3acm_core::two_elementary::{builtin_lattice, builtin_names, build_dp9, Dp9};
use k3acm_core::verify::{run_suite, SuiteReport, SUITE_NAMES};
use k3acm_core::{DivisorClass, Int, LatticeSpec};

#[derive(Parser)]
#[command(name = "k3acm", version, about = "Exact lattice arithmetic and ACM classification for polarized K3 surfaces")]
struct Cli {
    /// Pretty-print the JSON report.
    #[arg(long, global = true)]
    pretty: bool,
    /// Render a human-readable summary to stderr alongside the JSON report.
    #[arg(long, global = true)]
    human: bool,
    /// Embed wall-clock timing in the report (off by default so reports are
    /// byte-identical across runs).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, signature, evenness, Smith invariants, 2-elementary invariants
    /// and the ampleness verdict of the reference class.
    LatticeInfo(LatticeArg),
    /// Enumerate the divisor classes of one degree/square slice.
    Enumerate(EnumerateArgs),
    /// Classify a divisor class against a polarization.
    Classify(ClassifyArgs),
    /// Run a verification suite; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Emit the rank-n family construction schedule with its audit trail.
    Family {
        /// Bundle rank, at least 2.
        #[arg(long)]
        rank: u64,
    },
    /// List the built-in lattices, or emit one as lattice JSON.
    Builtin { name: Option<String> },
}

#[derive(Args)]
struct LatticeArg {
    /// Path to a lattice JSON file, or builtin:NAME.
    lattice: String,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Path to a lattice JSON file, or builtin:NAME.
    lattice: String,
    /// Degree against the degree class.
    #[arg(long, allow_hyphen_values = true)]
    degree: String,
    /// Required self-intersection (exact); see also --square-at-least.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "square_at_least")]
    square: Option<String>,
    /// Lower bound on the self-intersection instead of an exact value.
    #[arg(long, allow_hyphen_values = true)]
    square_at_least: Option<String>,
    /// Class defining the degree: a name (for built-ins) or comma-separated
    /// coordinates; defaults to the ample reference.
    #[arg(long)]
    degree_class: Option<String>,
    /// Omit the class list from the report, keep only the count.
    #[arg(long)]
    count_only: bool,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Path to a lattice JSON file, or builtin:NAME.
    lattice: String,
    /// The divisor class: a name (for built-ins) or comma-separated
    /// coordinates.
    #[arg(long)]
    class: String,
    /// Classification table: auto, genus2, quartic, very-ample or rank9.
    #[arg(long, default_value = "auto")]
    table: String,
    /// Polarization class; defaults to 3X on the canonical rank-9 lattice
    /// and to the ample reference elsewhere.
    #[arg(long)]
    polarization: Option<String>,
    /// Skip the numeric very-ampleness verification of the polarization.
    #[arg(long)]
    attest_very_ample: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or "all".
    suite: String,
    /// Cap on the polarization degree H.D for the dp9-acm sweep.
    #[arg(long, default_value_t = 24)]
    degree_cap: i64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("K3ACM_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let started = Instant::now();
    match run(&cli) {
        Ok((report, failed)) => {
            let mut report = report;
            if cli.timing {
                if let Value::Object(obj) = &mut report {
                    obj.insert("timing_ms".into(), json!(started.elapsed().as_millis() as u64));
                }
            }
            let text = if cli.pretty {
                serde_json::to_string_pretty(&report).expect("report serializes")
            } else {
                serde_json::to_string(&report).expect("report serializes")
            };
            println!("{text}");
            if failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<(Value, bool)> {
    match &cli.command {
        Command::LatticeInfo(args) => cmd_lattice_info(cli, args),
        Command::Enumerate(args) => cmd_enumerate(cli, args),
        Command::Classify(args) => cmd_classify(cli, args),
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Family { rank } => cmd_family(cli, *rank),
        Command::Builtin { name } => cmd_builtin(name.as_deref()),
    }
}

fn load_lattice(spec: &str) -> Result<LatticeSpec> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin_lattice(name)
            .ok_or_else(|| anyhow!("unknown builtin lattice {name:?}; available: {}", builtin_names().join(", ")));
    }
    let mut text = String::new();
    if spec == "-" {
        std::io::stdin().read_to_string(&mut text).context("reading lattice from stdin")?;
    } else {
        text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    }
    LatticeSpec::from_json_str(&text).with_context(|| format!("parsing lattice {spec}"))
}

fn parse_int(text: &str) -> Result<Int> {
    Int::from_str(text.trim()).map_err(|e| anyhow!("{text:?} is not an integer: {e}"))
}

/// Resolve a class argument: comma-separated coordinates, or a named class
/// when the lattice is the canonical rank-9 one.
fn resolve_class(lat: &LatticeSpec, text: &str) -> Result<DivisorClass> {
    let text = text.trim();
    if text.contains(',') || text.parse::<i64>().is_ok() {
        let coords = text
            .split(',')
            .map(parse_int)
            .collect::<Result<Vec<Int>>>()
            .with_context(|| format!("parsing class coordinates {text:?}"))?;
        if coords.len() != lat.rank() {
            bail!("class has {} coordinates, lattice rank is {}", coords.len(), lat.rank());
        }
        return Ok(DivisorClass::new(coords));
    }
    if Dp9::fingerprint_matches(lat) {
        if let Some(class) = build_dp9().named(&text.to_lowercase()) {
            return Ok(class);
        }
    }
    bail!("unknown class name {text:?}; pass comma-separated coordinates")
}

fn gram_sha256(lat: &LatticeSpec) -> String {
    let gram_json = lat.to_json()["gram"].to_string();
    let digest = Sha256::digest(gram_json.as_bytes());
    digest.iter().fold(String::with_capacity(64), |mut s, b| {
        s.push_str(&format!("{b:02x}"));
        s
    })
}

fn lattice_fingerprint(lat: &LatticeSpec) -> Value {
    let (rho, a, delta) = match lat.two_elementary_invariants() {
        Ok(TwoElementaryOutcome::Invariants(inv)) => {
            (json!(inv.rho), json!(inv.a), json!(inv.delta))
        }
        _ => (json!(lat.rank()), Value::Null, Value::Null),
    };
    json!({
        "name": lat.name(),
        "rho": rho,
        "a": a,
        "delta": delta,
        "gram_sha256": gram_sha256(lat),
    })
}

fn report(command: Value, lattice: Option<&LatticeSpec>, results: Value) -> Value {
    let mut obj = serde_json::Map::new();
    obj.insert("command".into(), command);
    if let Some(lat) = lattice {
        obj.insert("lattice".into(), lattice_fingerprint(lat));
    }
    obj.insert("results".into(), results);
    obj.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    Value::Object(obj)
}

fn int_json(v: &Int) -> Value {
    k3acm_core::lattice::int_to_json(v)
}

fn class_json(c: &DivisorClass) -> Value {
    Value::Array(c.coords().iter().map(int_json).collect())
}

fn cmd_lattice_info(cli: &Cli, args: &LatticeArg) -> Result<(Value, bool)> {
    let lat = load_lattice(&args.lattice)?;
    let geom = SurfaceGeometry::new(lat.clone());
    let (plus, minus, zero) = lat.signature();
    let two_elem = match lat.two_elementary_invariants() {
        Ok(TwoElementaryOutcome::Invariants(inv)) => json!({
            "rho": inv.rho, "a": inv.a, "delta": inv.delta,
        }),
        Ok(TwoElementaryOutcome::NotTwoElementary) => json!("not-2-elementary"),
        Err(e) => json!({"error": e.to_string()}),
    };
    let ample = geom.is_ample(lat.ample_ref())?;
    let results = json!({
        "rank": lat.rank(),
        "basis": lat.basis_labels(),
        "signature": [plus, minus, zero],
        "even": lat.is_even(),
        "all_pairings_even": lat.all_pairings_even(),
        "smith_invariants": Value::Array(lat.smith_invariants().iter().map(int_json).collect()),
        "two_elementary": two_elem,
        "ample_ref": class_json(lat.ample_ref()),
        "ample_ref_square": int_json(&lat.self_int(lat.ample_ref())?),
        "ample_ref_verdict": ample.verdict.as_str(),
        "k3": lat.is_k3(),
    });
    if cli.human {
        eprintln!(
            "{}: rank {}, signature ({plus},{minus},{zero}), 2-elementary {two_elem}, ample_ref {}",
            lat.name(),
            lat.rank(),
            ample.verdict.as_str()
        );
    }
    let command = json!({"name": "lattice-info", "lattice": args.lattice});
    Ok((report(command, Some(&lat), results), false))
}

fn cmd_enumerate(cli: &Cli, args: &EnumerateArgs) -> Result<(Value, bool)> {
    let lat = load_lattice(&args.lattice)?;
    let degree = parse_int(&args.degree)?;
    let square = match (&args.square, &args.square_at_least) {
        (Some(s), None) => SquareConstraint::Equal(parse_int(s)?),
        (None, Some(s)) => SquareConstraint::AtLeast(parse_int(s)?),
        (None, None) => bail!("pass --square or --square-at-least"),
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };
    let degree_class = match &args.degree_class {
        Some(text) => resolve_class(&lat, text)?,
        None => lat.ample_ref().clone(),
    };
    let q = SliceQuery::new(degree_class.clone(), degree.clone(), square);
    let classes = enumerate_slice(&lat, &q)?;
    let mut results = serde_json::Map::new();
    results.insert("count".into(), json!(classes.len()));
    results.insert("degree".into(), int_json(&degree));
    results.insert("degree_class".into(), class_json(&degree_class));
    if !args.count_only {
        results.insert("classes".into(), Value::Array(classes.iter().map(class_json).collect()));
    }
    if cli.human {
        eprintln!("{} classes in the slice", classes.len());
    }
    let command = json!({
        "name": "enumerate",
        "lattice": args.lattice,
        "degree": args.degree,
        "square": args.square,
        "square_at_least": args.square_at_least,
        "degree_class": args.degree_class,
    });
    Ok((report(command, Some(&lat), Value::Object(results)), false))
}

fn dp9_witness_json(witness: &Dp9Witness) -> Value {
    match witness {
        Dp9Witness::NegTwoCurve { shape, gamma } => json!({
            "kind": "neg2_curve",
            "shape": match shape {
                NegTwoShape::Identity => "gamma",
                NegTwoShape::ThreeXMinus => "3X - gamma",
                NegTwoShape::FourXMinus => "4X - gamma",
            },
            "gamma": class_json(gamma),
        }),
        Dp9Witness::MultipleOfFixedCurve { r } => json!({
            "kind": "multiple_of_fixed_curve",
            "r": r,
        }),
    }
}

fn cmd_classify(cli: &Cli, args: &ClassifyArgs) -> Result<(Value, bool)> {
    let lat = load_lattice(&args.lattice)?;
    let is_dp9 = Dp9::fingerprint_matches(&lat);
    let d = resolve_class(&lat, &args.class)?;
    let trust = if args.attest_very_ample {
        PolarizationTrust::Attested
    } else {
        PolarizationTrust::VerifyNumerically
    };
    let table = match args.table.as_str() {
        "auto" => {
            if is_dp9 {
                "rank9"
            } else {
                "very-ample"
            }
        }
        other => other,
    };
    let geom = SurfaceGeometry::new(lat.clone());
    let polarization = match &args.polarization {
        Some(text) => resolve_class(&lat, text)?,
        None if is_dp9 => build_dp9().polarization().clone(),
        None => lat.ample_ref().clone(),
    };
    let mut results = serde_json::Map::new();
    results.insert("class".into(), class_json(&d));
    results.insert("polarization".into(), class_json(&polarization));
    results.insert("table".into(), json!(table));
    match table {
        "rank9" => {
            if !is_dp9 {
                bail!("the rank9 table requires the canonical rank-9 lattice (builtin:dp9)");
            }
            let dp9 = build_dp9();
            let structural = classify_dp9(&dp9, &d)?;
            let numeric =
                classify_genus2(dp9.geometry(), dp9.polarization(), &d, trust)?;
            results.insert("verdict".into(), numeric.to_json());
            results.insert(
                "structural".into(),
                match &structural {
                    Dp9Verdict::AcmInitialized { case, witness } => json!({
                        "status": "AcmInitialized",
                        "case": case.to_string(),
                        "witness": dp9_witness_json(witness),
                    }),
                    Dp9Verdict::Not => json!({"status": "Not", "case": Value::Null}),
                },
            );
        }
        "genus2" => {
            let verdict = classify_genus2(&geom, &polarization, &d, trust)?;
            results.insert("verdict".into(), verdict.to_json());
        }
        "quartic" => {
            let h_sq = lat.self_int(&polarization)?;
            if h_sq != Int::from(4) {
                bail!("the quartic table requires a polarization of square 4, got {h_sq}");
            }
            let d_sq = lat.self_int(&d)?;
            let hd = lat.pair(&polarization, &d)?;
            let e1 = if geom.is_effective(&(&d - &polarization))?.is_effective() {
                k3acm_core::ThreeValued::No
            } else {
                k3acm_core::ThreeValued::Yes
            };
            let two_h_minus_d = &polarization.scale(&Int::from(2)) - &d;
            let e2 = if geom.is_effective(&two_h_minus_d)?.is_effective() {
                k3acm_core::ThreeValued::No
            } else {
                k3acm_core::ThreeValued::Yes
            };
            let verdict = classify_quartic(&d_sq, &hd, e1, e2);
            results.insert("verdict".into(), verdict.to_json());
        }
        "very-ample" => {
            let verdict = classify_very_ample(&geom, &polarization, &d, trust)?;
            results.insert("verdict".into(), verdict.to_json());
        }
        other => bail!("unknown table {other:?}; use auto, genus2, quartic, very-ample or rank9"),
    }
    if cli.human {
        if let Some(v) = results.get("verdict") {
            eprintln!("verdict: {} case {}", v["status"], v["case"]);
        }
    }
    let command = json!({
        "name": "classify",
        "lattice": args.lattice,
        "class": args.class,
        "table": args.table,
        "polarization": args.polarization,
        "attest_very_ample": args.attest_very_ample,
    });
    Ok((report(command, Some(&lat), Value::Object(results)), false))
}

fn suite_human(report: &SuiteReport) {
    for c in &report.checks {
        eprintln!("  [{}] {}: {}", if c.pass { "ok" } else { "FAIL" }, c.name, c.details);
    }
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<(Value, bool)> {
    if args.degree_cap < 1 {
        bail!("--degree-cap must be at least 1");
    }
    // The sweep cap is stated against the polarization H = 3X.
    let xdeg_cap = args.degree_cap / 3;
    let names: Vec<&str> = if args.suite == "all" {
        SUITE_NAMES.to_vec()
    } else {
        vec![args.suite.as_str()]
    };
    let mut reports = Vec::new();
    let mut all_pass = true;
    for name in names {
        let suite = run_suite(name, xdeg_cap).ok_or_else(|| {
            anyhow!("unknown suite {name:?}; available: {}, all", SUITE_NAMES.join(", "))
        })?;
        if cli.human {
            eprintln!("suite {name}: {}", if suite.passed() { "pass" } else { "FAIL" });
            suite_human(&suite);
        }
        all_pass &= suite.passed();
        reports.push(suite.to_json());
    }
    let command = json!({
        "name": "verify",
        "suite": args.suite,
        "degree_cap": args.degree_cap,
    });
    let results = json!({
        "all_passed": all_pass,
        "suites": reports,
    });
    let dp9 = builtin_lattice("dp9").expect("registry");
    Ok((report(command, Some(&dp9), results), !all_pass))
}

fn cmd_builtin(name: Option<&str>) -> Result<(Value, bool)> {
    match name {
        None => {
            let command = json!({"name": "builtin"});
            let results = json!({"available": builtin_names()});
            Ok((report(command, None, results), false))
        }
        Some(name) => {
            let lat = builtin_lattice(name).ok_or_else(|| {
                anyhow!("unknown builtin lattice {name:?}; available: {}", builtin_names().join(", "))
            })?;
            // Emit the raw lattice file format so the output can be fed back
            // in as a lattice file.
            Ok((lat.to_json(), false))
        }
    }
}

fn cmd_family(cli: &Cli, rank: u64) -> Result<(Value, bool)> {
    let plan = family_plan(rank)?;
    if cli.human {
        eprintln!(
            "rank {} family: parameter space dimension {}, semistable: {}",
            plan.rank, plan.parameter_space_dim, plan.semistable
        );
    }
    let command = json!({"name": "family", "rank": rank});
    let dp9 = builtin_lattice("dp9").expect("registry");
    Ok((report(command, Some(&dp9), plan.to_json()), false))
}
