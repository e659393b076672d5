//! Batch command-line interface: isotropic ranks and decompositions with
//! JSON input and output, secant-dimension experiments, and postulation
//! checks. Exit codes: 0 success, 1 computation error, 2 input error.

use clap::{Args, Parser, Subcommand};
use isorank::decompose::lift_poly;
use isorank::io::{self, ParsedPoly};
use isorank::secant::{self, appendix};
use isorank::ternary::{TernaryOutcome};
use isorank::{apolarity, monomials, quadrics};
use rayon::prelude::*;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "isorank", version, about = "Isotropic ranks of harmonic polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for reports.
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Write the main report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Residual tolerance for the floating-complex backend.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tolerance: f64,
    /// Seed override (also via the ISORANK_SEED environment variable).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Isotropic rank of a classified input.
    Irk(IrkArgs),
    /// Explicit isotropic decomposition of a classified input.
    Decompose(IrkArgs),
    /// Verify a decomposition against a target polynomial.
    Verify { poly: PathBuf, decomposition: PathBuf },
    /// Harmonic projection f = q·g + h for the standard form.
    Project { poly: PathBuf },
    /// Terracini dimension experiment over F_p.
    SecantDim(SecantArgs),
    /// Postulation of a point scheme on a quadric.
    Postulate {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        d: usize,
    },
    /// The golden suite of base-case postulation checks.
    Appendix {
        #[arg(long)]
        case: Option<String>,
        #[arg(long, default_value_t = 3)]
        retries: usize,
    },
    /// Closed-form generic isotropic rank.
    GenericRank {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
}

#[derive(Args)]
struct IrkArgs {
    #[command(subcommand)]
    target: IrkTarget,
}

#[derive(Subcommand)]
enum IrkTarget {
    /// A ternary harmonic form (polynomial JSON, standard quadratic form).
    Ternary { poly: PathBuf },
    /// A harmonic quadratic form: a trace-zero matrix or a normal sequence.
    Quadric {
        matrix: Option<PathBuf>,
        #[arg(long)]
        normal_seq: Option<PathBuf>,
    },
    /// A harmonic monomial (forms, exponents, Gram matrix JSON).
    Monomial { spec: PathBuf },
}

#[derive(Args)]
struct SecantArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long, default_value_t = 32003)]
    p: u64,
    #[arg(long, default_value_t = 3)]
    retries: usize,
    /// Run every r up to the filling rank (cells fan out over a pool).
    #[arg(long)]
    grid: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli
        .seed
        .or_else(|| std::env::var("ISORANK_SEED").ok().and_then(|s| s.parse().ok()))
        .unwrap_or(0);
    match run(&cli, seed) {
        Ok(report) => {
            emit(&cli, &report);
            ExitCode::SUCCESS
        }
        Err(AppError::Input(msg)) => {
            eprintln!("input error: {}", msg);
            ExitCode::from(2)
        }
        Err(AppError::Compute(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(1)
        }
    }
}

enum AppError {
    Input(String),
    Compute(String),
}

impl From<io::IoError> for AppError {
    fn from(e: io::IoError) -> Self {
        AppError::Input(e.to_string())
    }
}

fn compute<E: std::fmt::Display>(e: E) -> AppError {
    AppError::Compute(e.to_string())
}

fn read_json(path: &PathBuf) -> Result<Value, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Input(format!("{}: {}", path.display(), e)))?;
    serde_json::from_str(&text).map_err(|e| AppError::Input(format!("{}: {}", path.display(), e)))
}

fn emit(cli: &Cli, report: &Value) {
    let text = match cli.format.as_str() {
        "json" => serde_json::to_string_pretty(report).unwrap(),
        "csv" => to_csv(report),
        _ => to_text(report),
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text + "\n").expect("write output"),
        None => println!("{}", text),
    }
}

fn to_csv(report: &Value) -> String {
    // Grid reports carry a "cells" array with fixed columns.
    if let Some(cells) = report.get("cells").and_then(Value::as_array) {
        let mut out = String::from("n,d,r,expected,computed,seeds_used\n");
        for c in cells {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c["n"], c["d"], c["r"], c["expected"], c["computed"], c["seeds_used"]
            ));
        }
        return out;
    }
    serde_json::to_string_pretty(report).unwrap()
}

fn to_text(report: &Value) -> String {
    serde_json::to_string_pretty(report).unwrap()
}

fn run(cli: &Cli, seed: u64) -> Result<Value, AppError> {
    match &cli.command {
        Command::Irk(args) | Command::Decompose(args) => {
            let want_decomposition = matches!(cli.command, Command::Decompose(_));
            irk_or_decompose(args, want_decomposition, seed, cli.tolerance)
        }
        Command::Verify { poly, decomposition } => {
            let pv = read_json(poly)?;
            let dv = read_json(decomposition)?;
            let ParsedPoly::Exact(fld, target) = io::parse_poly(&pv)? else {
                return Err(AppError::Input("verify expects an exact polynomial".into()));
            };
            let (dfld, dec) = io::parse_decomposition(&dv)?;
            if !dfld.extends(&fld) {
                return Err(AppError::Input(
                    "decomposition tower does not extend the polynomial's field".into(),
                ));
            }
            let report = dec.verify(&lift_poly(&dfld, &target));
            if report.valid {
                Ok(json!({"valid": true}))
            } else {
                Err(AppError::Compute(format!(
                    "invalid decomposition: {:?}",
                    report.failures
                )))
            }
        }
        Command::Project { poly } => {
            let pv = read_json(poly)?;
            match io::parse_poly(&pv)? {
                ParsedPoly::Exact(fld, p) => {
                    let w = apolarity::QuadraticFormSpec::standard(fld.clone(), p.arity - 1);
                    let (h, g) = apolarity::harmonic_project(&p, &w).map_err(compute)?;
                    Ok(json!({
                        "harmonic": io::poly_to_json(&fld, &h),
                        "cofactor": io::poly_to_json(&fld, &g),
                    }))
                }
                ParsedPoly::Fp(fld, p) => {
                    let w = apolarity::QuadraticFormSpec::standard(fld, p.arity - 1);
                    let (h, g) = apolarity::harmonic_project(&p, &w).map_err(compute)?;
                    Ok(json!({
                        "harmonic_terms": h.num_terms(),
                        "cofactor_terms": g.num_terms(),
                        "field": format!("F_{}", fld.p),
                    }))
                }
            }
        }
        Command::SecantDim(args) => secant_dim(args, seed),
        Command::Postulate { spec, d } => {
            let sv = read_json(spec)?;
            let scheme: secant::SchemeSpec =
                serde_json::from_value(sv).map_err(|e| AppError::Input(e.to_string()))?;
            let rep = secant::postulation_check(&scheme, *d).map_err(compute)?;
            Ok(json!({
                "h0": rep.h0,
                "conditions_rank": rep.conditions_rank,
                "ambient_dim": rep.ambient_dim,
                "scheme_length": secant::scheme_length(&scheme),
            }))
        }
        Command::Appendix { case, retries } => {
            let cases = match case {
                Some(name) => vec![appendix::run_appendix_case(name, *retries, seed)],
                None => appendix::appendix_suite(*retries, seed),
            };
            let ok = cases.iter().all(|c| c.pass);
            let report = json!({
                "seed": seed,
                "cases": cases.iter().map(|c| serde_json::to_value(c).unwrap()).collect::<Vec<_>>(),
            });
            if ok {
                Ok(report)
            } else {
                emit_partial(cli, &report);
                Err(AppError::Compute("appendix case(s) failed".into()))
            }
        }
        Command::GenericRank { n, d } => Ok(json!({
            "n": n, "d": d,
            "generic_isotropic_rank": secant::generic_irk(*n, *d),
            "harmonic_dimension": secant::f_dim(*n, *d),
        })),
    }
}

fn emit_partial(cli: &Cli, report: &Value) {
    emit(cli, report);
}

fn irk_or_decompose(
    args: &IrkArgs,
    want_decomposition: bool,
    seed: u64,
    tolerance: f64,
) -> Result<Value, AppError> {
    match &args.target {
        IrkTarget::Ternary { poly } => {
            let pv = read_json(poly)?;
            let ParsedPoly::Exact(_, p) = io::parse_poly(&pv)? else {
                return Err(AppError::Input("ternary inputs must be exact".into()));
            };
            let dec = isorank::ternary::ternary_decompose(&p).map_err(compute)?;
            let mut report = json!({
                "isotropic_rank": dec.rank,
                "catalecticant_index": dec.r0,
                "size": dec.size(),
            });
            if want_decomposition {
                match &dec.outcome {
                    TernaryOutcome::Exact { field, decomposition } => {
                        report["decomposition"] = io::decomposition_to_json(field, decomposition);
                        report["backend"] = json!("exact");
                    }
                    TernaryOutcome::Float { terms, residual } => {
                        if *residual > tolerance {
                            return Err(AppError::Compute(format!(
                                "float residual {} exceeds tolerance {}",
                                residual, tolerance
                            )));
                        }
                        report["backend"] = json!("float");
                        report["residual"] = json!(residual);
                        report["terms"] = float_terms_json(terms);
                    }
                }
            }
            Ok(report)
        }
        IrkTarget::Quadric { matrix, normal_seq } => match (matrix, normal_seq) {
            (Some(path), None) => {
                let mv = read_json(path)?;
                let (fld, m) = io::parse_matrix(&mv)?;
                let h = quadrics::TraceZeroSym::new(fld, m).map_err(compute)?;
                let c = quadrics::classify_irk(&h);
                if want_decomposition {
                    return Err(AppError::Input(
                        "explicit decompositions need a normal sequence (--normal-seq)".into(),
                    ));
                }
                Ok(json!({
                    "rank": c.rank,
                    "isotropic_rank": c.irk,
                    "nilpotent": c.nilpotent,
                    "rank_of_square": c.rank_sq,
                }))
            }
            (None, Some(path)) => {
                let sv = read_json(path)?;
                let seq = io::parse_normal_sequence(&sv)?;
                if want_decomposition {
                    let out = quadrics::decompose_normal_sequence(&seq).map_err(compute)?;
                    Ok(json!({
                        "rank": out.classification.rank,
                        "isotropic_rank": out.classification.irk,
                        "size": out.decomposition.size(),
                        "decomposition": io::decomposition_to_json(&out.field, &out.decomposition),
                    }))
                } else {
                    let h = quadrics::normal_blocks_matrix(&seq);
                    let c = quadrics::classify_irk(&h);
                    Ok(json!({
                        "rank": c.rank,
                        "isotropic_rank": c.irk,
                        "nilpotent": c.nilpotent,
                        "rank_of_square": c.rank_sq,
                    }))
                }
            }
            _ => Err(AppError::Input(
                "give exactly one of a matrix file or --normal-seq".into(),
            )),
        },
        IrkTarget::Monomial { spec } => {
            let sv = read_json(spec)?;
            let m = parse_monomial_spec(&sv)?;
            let ranks = monomials::monomial_irk(&m).map_err(compute)?;
            let mut report = json!({
                "waring_rank": ranks.waring_rank,
                "isotropic_rank": ranks.isotropic_rank,
                "seed": seed,
            });
            if want_decomposition {
                let out = monomials::monomial_decompose(&m, seed).map_err(compute)?;
                report["size"] = json!(out.size());
                match out {
                    monomials::MonomialDecomposition::Exact { field, decomposition } => {
                        report["backend"] = json!("exact");
                        report["decomposition"] = io::decomposition_to_json(&field, &decomposition);
                    }
                    monomials::MonomialDecomposition::Float { terms, residual } => {
                        if residual > tolerance {
                            return Err(AppError::Compute(format!(
                                "float residual {} exceeds tolerance {}",
                                residual, tolerance
                            )));
                        }
                        report["backend"] = json!("float");
                        report["residual"] = json!(residual);
                        report["terms"] = json!(terms
                            .iter()
                            .map(|(c, pt)| json!({
                                "coeff": [c.re, c.im],
                                "point": pt.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
                            }))
                            .collect::<Vec<_>>());
                    }
                }
            }
            Ok(report)
        }
    }
}

fn float_terms_json(terms: &[(num::complex::Complex64, [num::complex::Complex64; 3])]) -> Value {
    json!(terms
        .iter()
        .map(|(c, pt)| json!({
            "coeff": [c.re, c.im],
            "point": pt.iter().map(|z| json!([z.re, z.im])).collect::<Vec<_>>(),
        }))
        .collect::<Vec<_>>())
}

fn parse_monomial_spec(v: &Value) -> Result<monomials::MonomialSpec, AppError> {
    let fld = isorank::TowerField::qi();
    let forms_v = v
        .get("forms")
        .and_then(Value::as_array)
        .ok_or_else(|| AppError::Input("monomial spec missing forms".into()))?;
    let mut forms = Vec::new();
    for f in forms_v {
        let coords = f
            .as_array()
            .ok_or_else(|| AppError::Input("bad form".into()))?;
        let mut c = Vec::new();
        for x in coords {
            c.push(fld.from_gauss(io::parse_gauss(x)?));
        }
        forms.push(apolarity::LinearForm(c));
    }
    let exponents: Vec<usize> = v
        .get("exponents")
        .and_then(Value::as_array)
        .ok_or_else(|| AppError::Input("monomial spec missing exponents".into()))?
        .iter()
        .map(|x| x.as_u64().map(|u| u as usize))
        .collect::<Option<_>>()
        .ok_or_else(|| AppError::Input("bad exponent".into()))?;
    let gram_v = v
        .get("gram")
        .and_then(Value::as_array)
        .ok_or_else(|| AppError::Input("monomial spec missing gram".into()))?;
    let n1 = gram_v.len();
    let mut gram = isorank::MatrixExact::zeros(fld.clone(), n1, n1);
    for (i, row) in gram_v.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| AppError::Input("bad gram row".into()))?;
        for (j, c) in row.iter().enumerate() {
            *gram.at_mut(i, j) = fld.from_gauss(io::parse_gauss(c)?);
        }
    }
    let w = apolarity::QuadraticFormSpec::from_gram(fld, gram);
    monomials::MonomialSpec::new(forms, exponents, w)
        .map_err(|e| AppError::Input(e.to_string()))
}

fn secant_dim(args: &SecantArgs, seed: u64) -> Result<Value, AppError> {
    if args.grid {
        let rmax = if args.d == 2 {
            args.n + 1
        } else {
            secant::f_dim(args.n, args.d).div_ceil(args.n)
        };
        // One stream pass covers every r; retry rows fan out in parallel.
        let attempts: Vec<Vec<usize>> = (0..args.retries.max(1))
            .into_par_iter()
            .map(|a| {
                secant::terracini_stream(args.n, args.d, args.p, seed + a as u64, rmax)
                    .unwrap_or_default()
            })
            .collect();
        let mut cells = Vec::new();
        for r in 1..=rmax {
            let expected = secant::expected_secant_dim(args.n, args.d, r);
            let mut computed = 0usize;
            let mut used = 0usize;
            for (a, ranks) in attempts.iter().enumerate() {
                if ranks.len() >= r {
                    computed = computed.max(ranks[r - 1] - 1);
                    used = a + 1;
                    if computed == expected {
                        break;
                    }
                }
            }
            cells.push(json!({
                "n": args.n, "d": args.d, "r": r,
                "expected": expected, "computed": computed, "seeds_used": used,
            }));
        }
        return Ok(json!({"seed": seed, "p": args.p, "cells": cells}));
    }
    let r = args
        .r
        .ok_or_else(|| AppError::Input("--r required without --grid".into()))?;
    let cfg = secant::ExperimentConfig {
        n: args.n,
        d: args.d,
        r,
        p: args.p,
        seed,
        retries: args.retries,
    };
    let computed = secant::terracini_dimension(&cfg).map_err(compute)?;
    Ok(json!({
        "seed": seed,
        "p": args.p,
        "n": args.n, "d": args.d, "r": r,
        "computed": computed,
        "expected": secant::expected_secant_dim(args.n, args.d, r),
    }))
}
