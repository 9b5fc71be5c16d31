mod report;

use clap::{Parser, Subcommand};
use metasym_core::algebra::{parse_rational, Coordinate};
use metasym_core::integrals::{
    intermediate_integrals_via_distributions, is_intermediate_integral, search_first_integrals,
    IntegralVerdict,
};
use metasym_core::jet::DistributionSpec;
use metasym_core::metasymplectic::orthogonal_complement_pair;
use metasym_core::monge_ampere::{
    build_ed, check_recoverable, detect_goursat, proportional, quasilinear_coefficients,
    recover_distribution, triple_is_orthogonal, GoursatClass,
};
use metasym_core::probe::{base_points, ProbeConfig, DEFAULT_SEED};
use metasym_core::symbol::{cone_sample, default_samples};
use metasym_core::verify::{run_suite, Suite};
use metasym_core::{Distribution, Error, JetPoint, MultiPoly};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "metasym", version, about = "Third-order Monge–Ampère toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Compact JSON output (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Indented JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Level-1 base point: a JSON array of 8 values or an object keyed by
    /// coordinate name (missing coordinates are 0).
    #[arg(long, global = true, value_name = "JSON")]
    probe_point: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Boillat decomposition and Goursat classification of `F = 0`.
    Classify { expr: String },
    /// Characteristic lines over the base point and the linear component.
    Cone {
        expr: String,
        /// Base point for this command only; overrides --probe-point.
        #[arg(long, value_name = "JSON")]
        point: Option<String>,
        /// Random fibre probes in addition to the canonical ones.
        #[arg(long, default_value_t = 4)]
        probes: usize,
    },
    /// The equation `E_D` of a distribution.
    Build {
        #[arg(long, value_name = "FILE")]
        distribution: String,
    },
    /// Reconstructs `D` from a fully nonlinear Goursat equation.
    Recover { expr: String },
    /// Orthogonal complements of a distribution with 2-dimensional vertical part.
    Orthogonal {
        #[arg(long, value_name = "FILE")]
        distribution: String,
    },
    /// Intermediate integrals of `F = 0`.
    Integrals {
        expr: String,
        #[arg(long)]
        candidate: Vec<String>,
        #[arg(long)]
        search_degree: Option<u32>,
        /// Search first integrals of this distribution instead of those of
        /// the classification.
        #[arg(long, value_name = "FILE")]
        distribution: Option<String>,
    },
    /// Runs seeded property suites; exits 1 on any counterexample.
    Verify {
        /// roundtrip | orthogonality | strong-char | omega-restriction |
        /// integrals; all suites when omitted.
        #[arg(long)]
        suite: Option<String>,
        #[arg(long, default_value_t = 50)]
        n_cases: usize,
    },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = match &e {
            Error::Parse(_) | Error::BadPoint { .. } => (2, "parse"),
            Error::NotMae(_) => (3, "not-mae"),
            _ => (4, "degenerate"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

fn parse_failure(msg: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        kind: "parse",
        message: msg.into(),
    }
}

/// Payload plus the exit code to use after printing it.
type Outcome = Result<(Value, u8), Failure>;

fn parse_expr(s: &str) -> Result<MultiPoly, Failure> {
    s.parse::<MultiPoly>().map_err(|e| Error::from(e).into())
}

fn value_rational(v: &Value) -> Option<metasym_core::Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => None,
    }
}

fn parse_point(s: &str) -> Result<JetPoint, Failure> {
    let v: Value = serde_json::from_str(s).map_err(|e| parse_failure(format!("point: {e}")))?;
    let bad = |what: &str| parse_failure(format!("point: bad value for {what}"));
    let mut vals = vec![metasym_core::algebra::zero(); 8];
    match &v {
        Value::Array(xs) => {
            if xs.len() != 8 {
                return Err(Error::BadPoint {
                    level: 1,
                    expected: 8,
                    got: xs.len(),
                }
                .into());
            }
            for (i, x) in xs.iter().enumerate() {
                vals[i] = value_rational(x).ok_or_else(|| bad(Coordinate::LEVEL1[i].name()))?;
            }
        }
        Value::Object(m) => {
            for (k, x) in m {
                let i = Coordinate::LEVEL1
                    .iter()
                    .position(|c| c.name() == k)
                    .ok_or_else(|| parse_failure(format!("point: unknown coordinate `{k}`")))?;
                vals[i] = value_rational(x).ok_or_else(|| bad(k))?;
            }
        }
        _ => return Err(parse_failure("point: expected an array or an object")),
    }
    JetPoint::new(1, vals).map_err(Failure::from)
}

fn read_distribution(path: &str) -> Result<(String, Distribution), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| parse_failure(format!("{path}: {e}")))?;
    let spec: DistributionSpec =
        serde_json::from_str(&text).map_err(|e| parse_failure(format!("{path}: {e}")))?;
    Ok((text, spec.to_distribution()?))
}

fn classify(expr: &str, cfg: &ProbeConfig) -> Outcome {
    let f = parse_expr(expr)?;
    let c = detect_goursat(&f, cfg)?;
    let ds = c.class.distributions();
    let orthogonal = match &ds[..] {
        [a, b, d] => Some(triple_is_orthogonal(&[a.clone(), b.clone(), d.clone()])?),
        _ => None,
    };
    let not_mae = matches!(c.class, GoursatClass::NotMae { .. });
    let recoverable = !not_mae
        && check_recoverable(&f, cfg)
            .map(|r| r.recoverable)
            .unwrap_or(false);
    let mut out = json!({
        "input": expr,
        "mae": !not_mae,
        "boillat": c.boillat.as_ref().map(report::boillat),
        "class": c.class.name(),
        "distributions": ds.iter().map(report::distribution).collect::<Vec<_>>(),
        "orthogonal": orthogonal,
        "recoverable_probe": recoverable,
        "base": c.base.as_ref().map(report::point),
    });
    match &c.class {
        GoursatClass::QuasiLinear { inexact, .. } => out["inexact"] = json!(inexact),
        GoursatClass::FullyNonlinearGoursat { form, .. } => {
            out["goursat_form"] = form.as_ref().map(report::goursat).unwrap_or(Value::Null)
        }
        GoursatClass::NotMae { monomial } => out["offending_monomial"] = json!(monomial),
        GoursatClass::MaeNotGoursat => {}
    }
    Ok((out, if not_mae { 3 } else { 0 }))
}

fn cone(expr: &str, point: Option<&str>, probes: usize, cfg: &ProbeConfig) -> Outcome {
    let f = parse_expr(expr)?;
    let explicit = point.map(parse_point).transpose()?;
    let bases = base_points(explicit.as_ref().or(cfg.base.as_ref()));
    let mut last = Error::InsufficientSamples(0);
    for m1 in &bases {
        let cone = default_samples(&f, m1, cfg.seed, probes).and_then(|s| cone_sample(&f, m1, &s));
        let cone = match cone {
            Ok(c) => c,
            Err(e) => {
                last = e;
                continue;
            }
        };
        let samples: Vec<Value> = cone
            .samples
            .iter()
            .map(|s| {
                json!({
                    "point": report::point(&s.point),
                    "lines": s.lines.iter().zip(&s.strong)
                        .map(|(l, st)| report::char_line(l, Some(*st)))
                        .collect::<Vec<_>>(),
                })
            })
            .collect();
        let lines = samples
            .first()
            .map(|s| s["lines"].clone())
            .unwrap_or(json!([]));
        let out = json!({
            "input": expr,
            "point": report::point(&cone.point),
            "distinguished": cone.distinguished.name(),
            "lines": lines,
            "samples": samples,
            "linear_component": cone.linear_component().map(report::distribution),
            "components": cone.linear_components.iter().map(report::distribution).collect::<Vec<_>>(),
        });
        return Ok((out, 0));
    }
    Err(last.into())
}

fn build(path: &str) -> Result<(String, Value, u8), Failure> {
    let (text, d) = read_distribution(path)?;
    let f = build_ed(&d)?;
    let vrank = d.vertical_part()?.generic_rank();
    let mut out = json!({
        "distribution": report::distribution(&d),
        "vertical_rank": vrank,
        "equation": report::poly(&f),
    });
    if vrank == 2 {
        if let Ok(b) = quasilinear_coefficients(&d) {
            out["boillat"] = report::boillat(&b);
        }
    }
    Ok((text, out, 0))
}

fn recover(expr: &str, cfg: &ProbeConfig) -> Outcome {
    let f = parse_expr(expr)?;
    let r = recover_distribution(&f, cfg)?;
    let rho: Vec<Value> = r
        .rho
        .iter()
        .map(|row| Value::Array(row.iter().map(report::rational).collect()))
        .collect();
    let out = json!({
        "input": expr,
        "distribution": report::distribution(&r.distribution),
        "rho": rho,
        "certificate": r.certificate.iter().map(report::rational).collect::<Vec<_>>(),
        "base": report::point(&r.base),
        "distinguished": r.distinguished.name(),
        "check": proportional(&build_ed(&r.distribution)?, &f),
    });
    Ok((out, 0))
}

fn orthogonal(path: &str) -> Result<(String, Value, u8), Failure> {
    let (text, d) = read_distribution(path)?;
    let f = build_ed(&d)?;
    let (a, b) = orthogonal_complement_pair(&d)?;
    let all_equal = proportional(&build_ed(&a)?, &f) && proportional(&build_ed(&b)?, &f);
    let out = json!({
        "distribution": report::distribution(&d),
        "equation": report::poly(&f),
        "complements": [report::distribution(&a), report::distribution(&b)],
        "orthogonal": triple_is_orthogonal(&[d, a, b])?,
        "same_equation": all_equal,
    });
    Ok((text, out, 0))
}

fn integrals(
    expr: &str,
    candidates: &[String],
    degree: Option<u32>,
    dist: Option<&str>,
    cfg: &ProbeConfig,
) -> Result<(String, Value, u8), Failure> {
    let f = parse_expr(expr)?;
    let mut hashed = expr.to_string();
    let mut cands = Vec::new();
    for c in candidates {
        hashed.push('\n');
        hashed.push_str(c);
        let g = parse_expr(c)?;
        let verdict = is_intermediate_integral(&g, &f, cfg)?;
        let via = intermediate_integrals_via_distributions(&g, &f, cfg).unwrap_or(None);
        let mut v = json!({ "f": c, "verdict": verdict.name(), "via_distribution": via });
        if let IntegralVerdict::No(w) = &verdict {
            v["witness"] = report::point(w);
        }
        cands.push(v);
    }
    let search = match degree {
        None => Value::Null,
        Some(n) => {
            let ds: Vec<Distribution> = match dist {
                Some(path) => {
                    let (text, d) = read_distribution(path)?;
                    hashed.push('\n');
                    hashed.push_str(&text);
                    vec![d]
                }
                None => detect_goursat(&f, cfg)?.class.distributions(),
            };
            let mut basis = Vec::new();
            let mut via = Vec::new();
            for (i, d) in ds.iter().enumerate() {
                for g in search_first_integrals(d, n) {
                    basis.push(report::poly(&g));
                    via.push(i);
                }
            }
            json!({ "degree": n, "basis": basis, "via_distribution": via })
        }
    };
    let out = json!({ "equation": expr, "candidates": cands, "search": search });
    Ok((hashed, out, 0))
}

fn verify(suite: Option<&str>, n: usize, cfg: &ProbeConfig) -> Outcome {
    let suites = match suite {
        None | Some("all") => Suite::ALL.to_vec(),
        Some(s) => {
            vec![Suite::from_name(s).ok_or_else(|| parse_failure(format!("unknown suite `{s}`")))?]
        }
    };
    let reports: Vec<_> = suites
        .iter()
        .map(|s| run_suite(*s, cfg.seed, n, cfg))
        .collect();
    let ok = reports.iter().all(|r| r.ok());
    for r in &reports {
        for c in &r.failures {
            eprintln!(
                "{} case {}: {}\n  input: {}",
                r.suite, c.case, c.detail, c.input
            );
        }
    }
    let out = json!({ "ok": ok, "suites": reports });
    Ok((out, if ok { 0 } else { 1 }))
}

fn sha256(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, echo) = match &cli.command {
        Command::Classify { expr } => ("classify", expr.clone()),
        Command::Cone { expr, .. } => ("cone", expr.clone()),
        Command::Build { distribution } => ("build", distribution.clone()),
        Command::Recover { expr } => ("recover", expr.clone()),
        Command::Orthogonal { distribution } => ("orthogonal", distribution.clone()),
        Command::Integrals { expr, .. } => ("integrals", expr.clone()),
        Command::Verify { suite, n_cases } => (
            "verify",
            format!("{} {n_cases}", suite.as_deref().unwrap_or("all")),
        ),
    };
    let run = || -> Result<(String, Value, u8), Failure> {
        let base = cli.probe_point.as_deref().map(parse_point).transpose()?;
        let cfg = ProbeConfig {
            base,
            seed: cli.seed,
            ..ProbeConfig::default()
        };
        let with_echo = |o: Outcome| o.map(|(v, c)| (echo.clone(), v, c));
        match &cli.command {
            Command::Classify { expr } => with_echo(classify(expr, &cfg)),
            Command::Cone {
                expr,
                point,
                probes,
            } => with_echo(cone(expr, point.as_deref(), *probes, &cfg)),
            Command::Build { distribution } => build(distribution),
            Command::Recover { expr } => with_echo(recover(expr, &cfg)),
            Command::Orthogonal { distribution } => orthogonal(distribution),
            Command::Integrals {
                expr,
                candidate,
                search_degree,
                distribution,
            } => integrals(
                expr,
                candidate,
                *search_degree,
                distribution.as_deref(),
                &cfg,
            ),
            Command::Verify { suite, n_cases } => {
                with_echo(verify(suite.as_deref(), *n_cases, &cfg))
            }
        }
    };
    let (hashed, body, code) = match run() {
        Ok((input, v, c)) => (input, json!({ "result": v }), c),
        Err(f) => (
            echo.clone(),
            json!({ "error": { "kind": f.kind, "message": f.message } }),
            f.code,
        ),
    };
    let mut report = json!({
        "command": name,
        "input": echo,
        "input_hash": sha256(&hashed),
        "version": env!("CARGO_PKG_VERSION"),
        "seed": cli.seed,
        "probe_point": cli.probe_point,
    });
    report
        .as_object_mut()
        .expect("object")
        .extend(body.as_object().expect("object").clone());
    let text = if cli.pretty {
        serde_json::to_string_pretty(&report)
    } else {
        serde_json::to_string(&report)
    }
    .expect("serialisable");
    // A closed pipe downstream is not our failure.
    let _ = writeln!(std::io::stdout().lock(), "{text}");
    ExitCode::from(code)
}
