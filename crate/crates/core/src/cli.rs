//! Batch command-line surface: enumerate complexes, export presentation
//! matrices, reduce rational apartments, compute coinvariant dimensions, and
//! run the property-check suites.
//!
//! Every report embeds the parsed configuration, the seed, the tool version
//! and a content hash of the inputs; re-running with equal configuration
//! reproduces byte-identical output. Enumeration results can be cached in
//! the directory named by `STEINBERG_CACHE_DIR`, keyed by the spec hash.

use crate::apartments::{
    apartment_chain, ash_rudolph_reduce_traced, symbol_sum_chain, verify_in_tits,
    RationalApartment,
};
use crate::coinvariants::{
    coinvariant_dim, stabilizer, CoinvariantSpec, GroupKind, Twist,
};
use crate::complexes::{
    enumerate, plink_of_vertex, BoundedComplex, BoundedComplexSpec, Variant,
};
use crate::exactlin::SparseMatrixJson;
use crate::lattice::{classify, is_partial_frame, Ambient, Line, LineSetSimplex, SimplexKind};
use crate::retractions::{
    omega_u64, pihat, retract, subdivide, LevelFunctional,
};
use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

const DEFAULT_SEED: u64 = 271828;

#[derive(Parser)]
#[command(name = "steinberg", version, about = "Frame complexes, the Steinberg module presentation, and stabilizer coinvariants")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed recorded in every report and used by randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Subcommand)]
pub enum Command {
    /// Enumerate a bounded complex and emit it as JSON.
    Enum(EnumArgs),
    /// Export the boundary matrix of the bounded presentation.
    Presentation(PresentationArgs),
    /// Reduce a rational apartment to integral symbols.
    Reduce(ReduceArgs),
    /// Compute a twisted coinvariant dimension.
    Coinv(CoinvArgs),
    /// Run a property-check suite.
    Check(CheckArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VariantArg {
    B,
    #[value(name = "BA")]
    Ba,
    #[value(name = "BAprime")]
    BaPrime,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::B => Variant::B,
            VariantArg::Ba => Variant::BA,
            VariantArg::BaPrime => Variant::BAprime,
        }
    }
}

#[derive(Args)]
pub struct EnumArgs {
    #[arg(long, value_enum)]
    pub variant: VariantArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[arg(long)]
    pub ball: u64,
    /// Defaults to the variant's dimension cap.
    #[arg(long)]
    pub max_dim: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct PresentationArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub generators_ball: u64,
    #[arg(long)]
    pub relations_ball: u64,
    #[arg(long)]
    pub out_matrix: Option<PathBuf>,
    #[arg(long)]
    pub out_symbols: Option<PathBuf>,
}

#[derive(Args)]
pub struct ReduceArgs {
    #[arg(long)]
    pub n: usize,
    /// Apartment vectors, e.g. "1,0;5,3".
    #[arg(long)]
    pub apartment: Option<String>,
    /// JSON file with {"vectors": [["1","0"], ["5","3"]]}.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Check the output class against the input in the flag complex.
    #[arg(long)]
    pub verify: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SimplexArg {
    Frame,
    Augmented,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum GroupArg {
    GL,
    SL,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum TwistArg {
    Orientation,
    Trivial,
}

#[derive(Args)]
pub struct CoinvArgs {
    #[arg(long, value_enum)]
    pub simplex: SimplexArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    #[arg(long, value_enum)]
    pub group: GroupArg,
    #[arg(long, value_enum, default_value = "orientation")]
    pub twist: TwistArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CheckArgs {
    #[command(subcommand)]
    pub suite: CheckSuite,
}

#[derive(Subcommand)]
pub enum CheckSuite {
    /// Subdivide-and-retract soundness on a restricted link.
    Retraction {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long)]
        ball: u64,
        /// The threshold N of the scaled last-coordinate functional.
        #[arg(long = "N")]
        level: u64,
    },
    /// Exhaustive carrying-cocycle identity for all thresholds up to N.
    Cocycle {
        #[arg(long = "N")]
        max_n: u64,
    },
    /// Base-case graph isomorphism with the Cayley graph of Z^m.
    Cayley {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        ball: u64,
    },
    /// Simplex classification trichotomy on a bounded enumeration.
    Trichotomy {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        m: usize,
        #[arg(long)]
        ball: u64,
    },
    /// Idempotence and sublevel landing of the vertex map on random lines.
    Pihat {
        #[arg(long)]
        dim: usize,
        #[arg(long = "N")]
        level: u64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Serialize)]
struct Report {
    command: String,
    version: &'static str,
    seed: u64,
    config: serde_json::Value,
    input_hash: String,
    result: serde_json::Value,
}

fn hash_of(value: &serde_json::Value) -> String {
    let mut h = Sha256::new();
    h.update(value.to_string().as_bytes());
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn emit(report: &Report, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(report)?;
    match out {
        Some(path) => {
            std::fs::write(path, text.as_bytes())
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

pub fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    run_command(cli)
}

pub fn run_command(cli: Cli) -> Result<ExitCode> {
    let seed = cli.seed;
    match cli.command {
        Command::Enum(args) => cmd_enum(args, seed),
        Command::Presentation(args) => cmd_presentation(args, seed),
        Command::Reduce(args) => cmd_reduce(args, seed),
        Command::Coinv(args) => cmd_coinv(args, seed),
        Command::Check(args) => cmd_check(args, seed),
    }
}

fn cache_lookup(spec: &BoundedComplexSpec, max_dim: usize) -> Option<BoundedComplex> {
    let dir = std::env::var_os("STEINBERG_CACHE_DIR")?;
    let key = format!("{}-{}.json", spec.content_hash(), max_dim);
    let path = PathBuf::from(dir).join(key);
    let text = std::fs::read_to_string(path).ok()?;
    let complex: BoundedComplex = serde_json::from_str(&text).ok()?;
    // validate the hit by re-hashing the spec it claims to represent
    if complex.spec() == spec && complex.spec().content_hash() == spec.content_hash() {
        Some(complex)
    } else {
        None
    }
}

fn cache_store(complex: &BoundedComplex, max_dim: usize) {
    let Some(dir) = std::env::var_os("STEINBERG_CACHE_DIR") else {
        return;
    };
    let dir = PathBuf::from(dir);
    if std::fs::create_dir_all(&dir).is_err() {
        return;
    }
    let key = format!("{}-{}.json", complex.spec().content_hash(), max_dim);
    if let Ok(text) = serde_json::to_string(complex) {
        let _ = std::fs::write(dir.join(key), text);
    }
}

fn cmd_enum(args: EnumArgs, seed: u64) -> Result<ExitCode> {
    let spec = BoundedComplexSpec::new(args.variant.into(), args.n, args.m, args.ball);
    spec.validate().map_err(|e| anyhow!("{e}"))?;
    let max_dim = args.max_dim.or(spec.dim_cap()).unwrap_or(0);
    let complex = match cache_lookup(&spec, max_dim) {
        Some(c) => c,
        None => {
            let c = enumerate(&spec, max_dim).map_err(|e| anyhow!("{e}"))?;
            cache_store(&c, max_dim);
            c
        }
    };
    let config = json!({
        "variant": format!("{:?}", spec.variant),
        "n": spec.n, "m": spec.m, "ball": spec.ball, "max_dim": max_dim,
    });
    let report = Report {
        command: "enum".into(),
        version: env!("CARGO_PKG_VERSION"),
        seed,
        input_hash: hash_of(&config),
        config,
        result: serde_json::to_value(&complex)?,
    };
    emit(&report, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_presentation(args: PresentationArgs, seed: u64) -> Result<ExitCode> {
    let p = crate::symbols::presentation_matrices(args.n, args.generators_ball, args.relations_ball)
        .map_err(|e| anyhow!("{e}"))?;
    let matrix_json = SparseMatrixJson::from(&p.boundary);
    let symbols_json: Vec<Vec<Vec<String>>> = p
        .symbols
        .iter()
        .map(|f| {
            f.vectors()
                .iter()
                .map(|v| v.iter().map(|x| x.to_string()).collect())
                .collect()
        })
        .collect();
    if let Some(path) = &args.out_matrix {
        std::fs::write(path, serde_json::to_string_pretty(&matrix_json)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.out_symbols {
        std::fs::write(path, serde_json::to_string_pretty(&symbols_json)?)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let config = json!({
        "n": args.n,
        "generators_ball": args.generators_ball,
        "relations_ball": args.relations_ball,
    });
    let report = Report {
        command: "presentation".into(),
        version: env!("CARGO_PKG_VERSION"),
        seed,
        input_hash: hash_of(&config),
        config,
        result: json!({
            "symbols": p.symbols.len(),
            "relations": p.relations.len(),
            "matrix": matrix_json,
        }),
    };
    emit(&report, None)?;
    Ok(ExitCode::SUCCESS)
}

fn parse_apartment(n: usize, text: &str) -> Result<RationalApartment> {
    let vectors: Result<Vec<Vec<BigInt>>> = text
        .split(';')
        .map(|chunk| {
            chunk
                .split(',')
                .map(|c| {
                    BigInt::from_str(c.trim()).map_err(|e| anyhow!("bad coordinate {c:?}: {e}"))
                })
                .collect()
        })
        .collect();
    let vectors = vectors?;
    if vectors.len() != n || vectors.iter().any(|v| v.len() != n) {
        bail!("expected {n} vectors of {n} coordinates");
    }
    RationalApartment::new(vectors).map_err(|e| anyhow!("{e}"))
}

fn cmd_reduce(args: ReduceArgs, seed: u64) -> Result<ExitCode> {
    let (apartment, input_desc) = match (&args.apartment, &args.input) {
        (Some(text), None) => (parse_apartment(args.n, text)?, json!(text)),
        (None, Some(path)) => {
            let raw = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let parsed: serde_json::Value = serde_json::from_str(&raw)?;
            let vectors = parsed
                .get("vectors")
                .and_then(|v| v.as_array())
                .ok_or_else(|| anyhow!("input file needs a \"vectors\" array"))?;
            let vectors: Result<Vec<Vec<BigInt>>> = vectors
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| anyhow!("vector rows must be arrays"))?
                        .iter()
                        .map(|c| {
                            let s = c.as_str().ok_or_else(|| anyhow!("coordinates are strings"))?;
                            BigInt::from_str(s).map_err(|e| anyhow!("bad coordinate {s:?}: {e}"))
                        })
                        .collect()
                })
                .collect();
            (
                RationalApartment::new(vectors?).map_err(|e| anyhow!("{e}"))?,
                json!(raw),
            )
        }
        _ => bail!("provide exactly one of --apartment or --input"),
    };
    let (sum, trace) = ash_rudolph_reduce_traced(&apartment);
    let verified = if args.verify {
        let lhs = apartment_chain(&apartment);
        let rhs = symbol_sum_chain(&sum).map_err(|e| anyhow!("{e}"))?;
        Some(verify_in_tits(&lhs, &rhs).map_err(|e| anyhow!("{e}"))?)
    } else {
        None
    };
    let config = json!({ "n": args.n, "input": input_desc, "verify": args.verify });
    let max_det = trace
        .iter()
        .map(|(p, _)| p.clone())
        .max()
        .unwrap_or_else(|| apartment.det().clone());
    let report = Report {
        command: "reduce".into(),
        version: env!("CARGO_PKG_VERSION"),
        seed,
        input_hash: hash_of(&config),
        config,
        result: json!({
            "det": apartment.det().to_string(),
            "terms": serde_json::to_value(&sum)?,
            "reduction_edges": trace.len(),
            "max_det_seen": max_det.to_string(),
            "verified": verified,
        }),
    };
    emit(&report, args.out.as_deref())?;
    if verified == Some(false) {
        bail!("class verification failed");
    }
    Ok(ExitCode::SUCCESS)
}

/// The standard frame or augmented frame of `Z^n` used as orbit
/// representative by the coinvariant command.
pub fn standard_simplex(kind: SimplexArg, n: usize) -> Result<LineSetSimplex> {
    let mut lines = Vec::new();
    for i in 0..n {
        let mut v = vec![BigInt::from(0); n];
        v[i] = BigInt::from(1);
        lines.push(Line::from_vector(v).map_err(|e| anyhow!("{e}"))?);
    }
    if matches!(kind, SimplexArg::Augmented) {
        if n < 2 {
            bail!("augmented frames need n >= 2");
        }
        let mut v = vec![BigInt::from(0); n];
        v[0] = BigInt::from(1);
        v[1] = BigInt::from(1);
        lines.push(Line::from_vector(v).map_err(|e| anyhow!("{e}"))?);
    }
    LineSetSimplex::new(lines, Ambient::new(n, 0)).map_err(|e| anyhow!("{e}"))
}

fn cmd_coinv(args: CoinvArgs, seed: u64) -> Result<ExitCode> {
    let simplex = standard_simplex(args.simplex, args.n)?;
    let group_kind = match args.group {
        GroupArg::GL => GroupKind::GL,
        GroupArg::SL => GroupKind::SL,
    };
    let group = stabilizer(&simplex, group_kind).map_err(|e| anyhow!("{e}"))?;
    let order = group.order();
    let twist = match args.twist {
        TwistArg::Orientation => Twist::Orientation(simplex.lines().to_vec()),
        TwistArg::Trivial => Twist::Trivial,
    };
    let spec = CoinvariantSpec {
        group,
        tensor_power: args.k,
        twist,
        det_restriction: group_kind,
    };
    let dim = coinvariant_dim(&spec).map_err(|e| anyhow!("{e}"))?;
    let config = json!({
        "simplex": format!("{:?}", args.simplex),
        "n": args.n, "k": args.k,
        "group": format!("{:?}", args.group),
        "twist": format!("{:?}", args.twist),
    });
    let report = Report {
        command: "coinv".into(),
        version: env!("CARGO_PKG_VERSION"),
        seed,
        input_hash: hash_of(&config),
        config: config.clone(),
        result: json!({
            "spec": config,
            "dim": dim,
            "projector_rank": dim,
            "group_order": order,
        }),
    };
    emit(&report, args.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SuiteOutcome {
    passed: bool,
    checked: usize,
    counterexamples: Vec<serde_json::Value>,
    details: serde_json::Value,
}

fn cmd_check(args: CheckArgs, seed: u64) -> Result<ExitCode> {
    let (name, config, outcome) = match args.suite {
        CheckSuite::Retraction { n, m, ball, level } => {
            let config = json!({ "n": n, "m": m, "ball": ball, "N": level });
            ("retraction", config, check_retraction(n, m, ball, level)?)
        }
        CheckSuite::Cocycle { max_n } => {
            let config = json!({ "N": max_n });
            ("cocycle", config, check_cocycle(max_n))
        }
        CheckSuite::Cayley { m, ball } => {
            let config = json!({ "m": m, "ball": ball });
            ("cayley", config, check_cayley(m, ball)?)
        }
        CheckSuite::Trichotomy { n, m, ball } => {
            let config = json!({ "n": n, "m": m, "ball": ball });
            ("trichotomy", config, check_trichotomy(n, m, ball)?)
        }
        CheckSuite::Pihat { dim, level, samples } => {
            let config = json!({ "dim": dim, "N": level, "samples": samples });
            ("pihat", config, check_pihat(dim, level, samples, seed))
        }
    };
    let passed = outcome.passed;
    let report = Report {
        command: format!("check {name}"),
        version: env!("CARGO_PKG_VERSION"),
        seed,
        input_hash: hash_of(&config),
        config,
        result: serde_json::to_value(&outcome)?,
    };
    emit(&report, None)?;
    Ok(if passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn check_retraction(n: usize, m: usize, ball: u64, level: u64) -> Result<SuiteOutcome> {
    let spec = BoundedComplexSpec::new(Variant::BA, n, m, ball);
    spec.validate().map_err(|e| anyhow!("{e}"))?;
    let ctx = LevelFunctional::scaled_last_coordinate(m + n, level);
    let x = plink_of_vertex(&spec, &ctx.carrier_line(), n.saturating_sub(1))
        .map_err(|e| anyhow!("{e}"))?;
    let y = subdivide(&x, &ctx);
    let report = retract(&y, &ctx);
    let counterexamples: Vec<serde_json::Value> = report
        .defects
        .iter()
        .take(5)
        .map(|d| serde_json::to_value(d).unwrap_or(serde_json::Value::Null))
        .collect();
    Ok(SuiteOutcome {
        passed: report.is_simplicial() && report.outside_ball == 0,
        checked: report.simplices_checked,
        counterexamples,
        details: json!({
            "vertices": x.vertices().len(),
            "carrying_cells": y.carrying_cells().len(),
            "collapsed": report.collapsed.len(),
            "class_counts": serde_json::to_value(&report.class_counts)?,
            "outside_ball": report.outside_ball,
        }),
    })
}

fn check_cocycle(max_n: u64) -> SuiteOutcome {
    let mut checked = 0usize;
    let mut counterexamples = Vec::new();
    'outer: for n in 1..=max_n {
        let bound = n * n;
        for a in 0..bound {
            for b in 0..bound {
                let w = omega_u64(n, a, b);
                if w > 1 || (a == 0 && w != 0) || (b == 0 && w != 0) {
                    counterexamples.push(json!({ "N": n, "a": a, "b": b, "omega": w }));
                    break 'outer;
                }
                for c in 0..bound {
                    checked += 1;
                    if omega_u64(n, a, b) + omega_u64(n, a + b, c)
                        != omega_u64(n, b, c) + omega_u64(n, a, b + c)
                    {
                        counterexamples.push(json!({ "N": n, "a": a, "b": b, "c": c }));
                        break 'outer;
                    }
                }
            }
        }
    }
    SuiteOutcome {
        passed: counterexamples.is_empty(),
        checked,
        counterexamples,
        details: json!({ "max_N": max_n }),
    }
}

fn check_cayley(m: usize, ball: u64) -> Result<SuiteOutcome> {
    let spec = BoundedComplexSpec::new(Variant::BA, 1, m, ball);
    spec.validate().map_err(|e| anyhow!("{e}"))?;
    let x = enumerate(&spec, 1).map_err(|e| anyhow!("{e}"))?;
    let mut counterexamples = Vec::new();
    // vertex bijection: canonical rep ±(a_1, ..., a_m, 1) <-> a in Z^m
    let to_lattice = |l: &Line| -> Vec<i64> {
        let rep = l.rep();
        let sign = if rep[m] == BigInt::from(1) { 1 } else { -1 };
        (0..m)
            .map(|i| {
                let v: i64 = (&rep[i]).try_into().expect("desk-scale coordinates");
                sign * v
            })
            .collect()
    };
    let b = ball as i64;
    let expected_vertices = (2 * b + 1).pow(m as u32) as usize;
    if x.vertices().len() != expected_vertices {
        counterexamples.push(json!({
            "kind": "vertex count",
            "got": x.vertices().len(),
            "expected": expected_vertices,
        }));
    }
    // edges of the bounded complex = Cayley edges of the ball
    let mut complex_edges: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    for e in x.simplices(1) {
        let mut a = to_lattice(&x.vertices()[e[0] as usize]);
        let mut bb = to_lattice(&x.vertices()[e[1] as usize]);
        if bb < a {
            std::mem::swap(&mut a, &mut bb);
        }
        complex_edges.push((a, bb));
    }
    complex_edges.sort();
    let mut points: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..m {
        points = points
            .into_iter()
            .flat_map(|p| {
                (-b..=b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    let mut cayley_edges: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
    for p in &points {
        for i in 0..m {
            if p[i] < b {
                let mut q = p.clone();
                q[i] += 1;
                cayley_edges.push((p.clone(), q));
            }
        }
    }
    cayley_edges.sort();
    if complex_edges != cayley_edges {
        counterexamples.push(json!({
            "kind": "edge sets differ",
            "complex_edges": complex_edges.len(),
            "cayley_edges": cayley_edges.len(),
        }));
    }
    // every 1-simplex is externally additive
    for e in x.simplices(1) {
        let s = x.lineset_of(e);
        match classify(&s) {
            Ok(c) if c.kind == SimplexKind::ExternallyAdditive => {}
            other => {
                counterexamples.push(json!({
                    "kind": "edge not externally additive",
                    "classified": format!("{other:?}"),
                }));
                break;
            }
        }
    }
    Ok(SuiteOutcome {
        passed: counterexamples.is_empty(),
        checked: x.simplices(1).len() + x.vertices().len(),
        counterexamples,
        details: json!({
            "vertices": x.vertices().len(),
            "edges": x.simplices(1).len(),
        }),
    })
}

fn check_trichotomy(n: usize, m: usize, ball: u64) -> Result<SuiteOutcome> {
    let spec = BoundedComplexSpec::new(Variant::BA, n, m, ball);
    spec.validate().map_err(|e| anyhow!("{e}"))?;
    let x = enumerate(&spec, n).map_err(|e| anyhow!("{e}"))?;
    let mut counterexamples = Vec::new();
    let mut checked = 0usize;
    let mut counts = [0usize; 3];
    for d in 0..x.dims().len() {
        for s in x.simplices(d) {
            checked += 1;
            let ls = x.lineset_of(s);
            match classify(&ls) {
                Err(e) => {
                    counterexamples.push(json!({
                        "kind": "classification failed",
                        "simplex": serde_json::to_value(&ls)?,
                        "error": e.to_string(),
                    }));
                }
                Ok(c) => {
                    // the standard class must coincide with the frame
                    // predicate, and additive classes must carry cores
                    let standard = is_partial_frame(&ls);
                    let consistent = match c.kind {
                        SimplexKind::Standard => {
                            counts[0] += 1;
                            standard && c.core.is_none()
                        }
                        SimplexKind::InternallyAdditive => {
                            counts[1] += 1;
                            !standard && c.core.as_ref().is_some_and(|k| k.len() == 3)
                        }
                        SimplexKind::ExternallyAdditive => {
                            counts[2] += 1;
                            !standard && c.core.as_ref().is_some_and(|k| k.len() == 2)
                        }
                    };
                    if !consistent {
                        counterexamples.push(json!({
                            "kind": "inconsistent classification",
                            "simplex": serde_json::to_value(&ls)?,
                        }));
                    }
                }
            }
            if counterexamples.len() >= 5 {
                break;
            }
        }
    }
    Ok(SuiteOutcome {
        passed: counterexamples.is_empty(),
        checked,
        counterexamples,
        details: json!({
            "standard": counts[0],
            "internally_additive": counts[1],
            "externally_additive": counts[2],
        }),
    })
}

fn check_pihat(dim: usize, level: u64, samples: usize, seed: u64) -> SuiteOutcome {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let ctx = LevelFunctional::scaled_last_coordinate(dim, level);
    let w_line = ctx.carrier_line();
    let mut counterexamples = Vec::new();
    let mut checked = 0usize;
    while checked < samples {
        let v: Vec<BigInt> = (0..dim)
            .map(|_| BigInt::from(rng.gen_range(-9i64..=9)))
            .collect();
        let Some(l) = Line::from_vector_scaled(v) else {
            continue;
        };
        if l == w_line {
            continue;
        }
        checked += 1;
        let once = pihat(&l, &ctx);
        let twice = pihat(&once, &ctx);
        if once != twice || ctx.level(&once) >= *ctx.threshold() {
            counterexamples.push(json!({
                "line": serde_json::to_value(&l).unwrap_or(serde_json::Value::Null),
            }));
            if counterexamples.len() >= 5 {
                break;
            }
        }
    }
    SuiteOutcome {
        passed: counterexamples.is_empty(),
        checked,
        counterexamples,
        details: json!({ "dim": dim, "N": level }),
    }
}
