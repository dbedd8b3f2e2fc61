//! Command-line front end.
//!
//! Subcommands: `check-bounds`, `certify`, `lorch`, `fp-profile` and
//! `validate-norm`. Exit codes: 0 success or no violation, 2 violation found
//! (`certify` and `lorch`), 1 error. Identical arguments give byte-identical
//! output.

pub mod report;
pub mod sweep;

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::certify::{self, LorchOutcome, SearchConfig, Verdict};
use crate::error::{Error, Result};
use crate::extremum::{self, NormalizedPair};
use crate::pangular::{BoundKind, PExponent, QExponent};
use crate::vectorspace::{self, NormSpec};

use report::{fmt_f64, to_json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Debug, Parser)]
#[command(name = "pangle", version, about = "p-angular distance bounds and inner-product certification")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct NormArgs {
    /// l2 | l1 | linf | lq:<q> | wl2:<w1,w2,...>
    #[arg(long)]
    pub norm: String,
    /// Dimension (default 2; wl2 takes it from the weight count).
    #[arg(long)]
    pub dim: Option<usize>,
}

impl NormArgs {
    fn spec(&self) -> Result<NormSpec> {
        let kind: vectorspace::NormKind = self.norm.parse()?;
        let dim = match (&kind, self.dim) {
            (_, Some(d)) => Some(d),
            (vectorspace::NormKind::WeightedL2(_), None) => None,
            (_, None) => Some(2),
        };
        NormSpec::parse(&self.norm, dim)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Maximum ratio alpha_p / bound over seeded pairs for every bound kind.
    CheckBounds {
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long, default_value_t = 21)]
        p_grid: usize,
        /// Comma-separated q values for the dw and char kinds.
        #[arg(long, default_value = "0.5,1,2")]
        q_set: String,
        /// Restrict the sweep to one kind: maligranda | dw:<q> | ips | char:<q>.
        #[arg(long)]
        kind: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search for a pair violating the characterizing inequality.
    Certify {
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long, default_value_t = 0.0)]
        p: f64,
        #[arg(long, default_value_t = 1.0)]
        q: f64,
        #[arg(long, default_value_t = certify::DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = certify::DEFAULT_STEPS)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the JSON verdict to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search for a pair violating Lorch's condition.
    Lorch {
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Profile f(p) for normalized coordinates (a, b), a in (1, 1e6].
    FpProfile {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long, default_value_t = extremum::DEFAULT_SIGN_GRID)]
        grid: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample the norm axioms.
    ValidateNorm {
        #[command(flatten)]
        norm: NormArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Largest `a` accepted by `fp-profile`; `a^(1+p)` must stay finite.
pub const FP_MAX_A: f64 = 1e6;

struct Emitted {
    body: String,
    code: i32,
}

/// Runs the CLI on `argv` (including the program name), writing the report
/// to `stdout` or `--out` and diagnostics to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            let line = rendered.lines().next().unwrap_or("invalid arguments");
            let _ = writeln!(stderr, "{line}");
            return EXIT_ERROR;
        }
    };
    let out_path = output_args(&config.command).out.clone();
    match dispatch(&config.command) {
        Ok(Emitted { body, code }) => {
            let written = match &out_path {
                Some(path) => std::fs::write(path, &body)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => stdout.write_all(body.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => code,
                Err(msg) => {
                    let _ = writeln!(stderr, "error: {msg}");
                    EXIT_ERROR
                }
            }
        }
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_ERROR
        }
    }
}

/// Entry point for the binary.
pub fn main_with_io() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn output_args(cmd: &Command) -> &OutputArgs {
    match cmd {
        Command::CheckBounds { output, .. }
        | Command::Certify { output, .. }
        | Command::Lorch { output, .. }
        | Command::FpProfile { output, .. }
        | Command::ValidateNorm { output, .. } => output,
    }
}

fn dispatch(cmd: &Command) -> std::result::Result<Emitted, String> {
    let wrap = |e: Error| e.to_string();
    match cmd {
        Command::CheckBounds { norm, p_grid, q_set, kind, samples, seed, output } => {
            let spec = norm.spec().map_err(wrap)?;
            let kinds = match kind {
                Some(k) => vec![k.parse::<BoundKind>().map_err(wrap)?],
                None => sweep::kinds_for(&parse_q_set(q_set).map_err(wrap)?),
            };
            let report =
                sweep::check_bounds_sweep(&spec, *p_grid, &kinds, *samples, *seed).map_err(wrap)?;
            let code = if report.errors > 0 { EXIT_ERROR } else { EXIT_OK };
            let body = match output.format.unwrap_or(Format::Csv) {
                Format::Csv => report.to_csv(),
                Format::Json => to_json(&report),
                Format::Human => human_sweep(&report),
            };
            Ok(Emitted { body, code })
        }
        Command::Certify { norm, p, q, restarts, steps, seed, json, output } => {
            let spec = norm.spec().map_err(wrap)?;
            let p = PExponent::new(*p).map_err(wrap)?;
            let q = QExponent::new(*q).map_err(wrap)?;
            let cfg = SearchConfig::new(p, q).with_budget(*restarts, *steps).with_seed(*seed);
            let verdict = certify::certify_ips(&spec, &cfg).map_err(wrap)?;
            let doc = certify_json(&spec, &cfg, &verdict);
            if let Some(path) = json {
                std::fs::write(path, to_json(&doc))
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            let code = match verdict {
                Verdict::NotInnerProduct(_) => EXIT_VIOLATION,
                Verdict::ConsistentWithInnerProduct { .. } => EXIT_OK,
            };
            let body = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&doc),
                Format::Csv => certify_csv(&doc),
                Format::Human => human_certify(&doc),
            };
            Ok(Emitted { body, code })
        }
        Command::Lorch { norm, budget, seed, output } => {
            let spec = norm.spec().map_err(wrap)?;
            let outcome = certify::lorch_test(&spec, *budget, *seed).map_err(wrap)?;
            let doc = lorch_json(&spec, &outcome);
            let code = match outcome {
                LorchOutcome::Witness(..) => EXIT_VIOLATION,
                LorchOutcome::NotFound(_) => EXIT_OK,
            };
            let body = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&doc),
                Format::Csv => lorch_csv(&doc),
                Format::Human => human_lorch(&doc),
            };
            Ok(Emitted { body, code })
        }
        Command::FpProfile { a, b, grid, tol, output } => {
            if *a > FP_MAX_A {
                return Err(format!("a = {a} exceeds the supported maximum {FP_MAX_A:e}"));
            }
            let pair = NormalizedPair::new(*a, *b).map_err(wrap)?;
            let profile = extremum::fp_profile(&pair, *grid, *tol).map_err(wrap)?;
            let doc = json!({
                "a": pair.a(),
                "b": pair.b(),
                "p0": profile.p0,
                "f0": profile.f0,
                "f1": profile.f1,
                "sign_changes": profile.sign_changes,
                "grid": profile.grid.iter().map(|(p, f)| json!([p, f])).collect::<Vec<_>>(),
            });
            let body = match output.format.unwrap_or(Format::Json) {
                Format::Json => to_json(&doc),
                Format::Csv => {
                    let mut s = String::from("p,f\n");
                    for (p, f) in &profile.grid {
                        let _ = writeln!(s, "{},{}", fmt_f64(*p), fmt_f64(*f));
                    }
                    s
                }
                Format::Human => human_profile(&profile),
            };
            Ok(Emitted { body, code: EXIT_OK })
        }
        Command::ValidateNorm { norm, samples, seed, output } => {
            let spec = norm.spec().map_err(wrap)?;
            if *samples == 0 {
                return Err("samples must be at least 1".into());
            }
            let report = vectorspace::validate_norm_axioms(&spec, *samples, *seed);
            let doc = json!({
                "spec": spec.to_string(),
                "dim": spec.dim(),
                "samples": report.samples,
                "seed": seed,
                "passed": report.passed(),
                "failures": report.failures,
            });
            let code = if report.passed() { EXIT_OK } else { EXIT_ERROR };
            let body = match output.format.unwrap_or(Format::Json) {
                Format::Json | Format::Csv => to_json(&doc),
                Format::Human => {
                    let mut s = String::new();
                    if !report.passed() {
                        let _ = writeln!(s, "! {} axiom failures", report.failures.len());
                    }
                    let _ = writeln!(
                        s,
                        "{} dim {}: {} samples, {} failures",
                        spec,
                        spec.dim(),
                        report.samples,
                        report.failures.len()
                    );
                    s
                }
            };
            Ok(Emitted { body, code })
        }
    }
}

fn parse_q_set(text: &str) -> Result<Vec<QExponent>> {
    text.split(',')
        .map(|t| {
            let q: f64 = t.parse().map_err(|_| Error::InvalidConfig(format!("bad q value {t:?}")))?;
            QExponent::new(q)
        })
        .collect()
}

fn certify_json(spec: &NormSpec, cfg: &SearchConfig, verdict: &Verdict) -> Value {
    let (witness, evaluations, best_ratio, caveat) = match verdict {
        Verdict::NotInnerProduct(w) => (
            Some(json!({
                "x": w.x,
                "y": w.y,
                "alpha": w.alpha_p,
                "bound": w.bound,
                "ratio": w.ratio,
            })),
            w.evaluations,
            w.ratio,
            "a single violating pair refutes the inequality for this (p, q)".to_string(),
        ),
        Verdict::ConsistentWithInnerProduct { stats, caveat, q_in_unit_interval } => {
            let mut c = caveat.to_string();
            if !q_in_unit_interval {
                c.push_str("; q > 1 does not cover the inequality for q in (0, 1]");
            }
            (None, stats.evaluations, stats.best_ratio, c)
        }
    };
    let mut doc = json!({
        "verdict": verdict.label(),
        "spec": spec.to_string(),
        "p": cfg.p.value(),
        "q": cfg.q.value(),
        "evaluations": evaluations,
        "best_ratio": best_ratio,
        "caveat": caveat,
    });
    if let Some(w) = witness {
        doc["witness"] = w;
    }
    doc
}

fn lorch_json(spec: &NormSpec, outcome: &LorchOutcome) -> Value {
    let (witness, stats) = match outcome {
        LorchOutcome::Witness(w, s) => (
            Some(json!({
                "x": w.x,
                "y": w.y,
                "gamma": w.gamma,
                "lhs": w.lhs,
                "rhs": w.rhs,
                "margin": w.margin,
            })),
            s,
        ),
        LorchOutcome::NotFound(s) => (None, s),
    };
    let (verdict, caveat) = match witness {
        Some(_) => ("NotInnerProduct", "a single equal-norm pair violating the condition suffices"),
        None => ("ConsistentWithInnerProduct", certify::NOT_A_PROOF),
    };
    let mut doc = json!({
        "verdict": verdict,
        "spec": spec.to_string(),
        "pairs": stats.pairs,
        "evaluations": stats.evaluations,
        "best_margin": stats.best_margin,
        "caveat": caveat,
    });
    if let Some(w) = witness {
        doc["witness"] = w;
    }
    doc
}

fn num(v: &Value) -> String {
    v.as_f64().map(fmt_f64).unwrap_or_default()
}

fn coords(v: &Value) -> String {
    v.as_array()
        .map(|a| a.iter().map(num).collect::<Vec<_>>().join(";"))
        .unwrap_or_default()
}

fn certify_csv(doc: &Value) -> String {
    let w = &doc["witness"];
    format!(
        "verdict,spec,p,q,evaluations,best_ratio,x,y,alpha,bound,ratio\n{},{},{},{},{},{},{},{},{},{},{}\n",
        doc["verdict"].as_str().unwrap_or_default(),
        doc["spec"].as_str().unwrap_or_default(),
        num(&doc["p"]),
        num(&doc["q"]),
        doc["evaluations"],
        num(&doc["best_ratio"]),
        coords(&w["x"]),
        coords(&w["y"]),
        num(&w["alpha"]),
        num(&w["bound"]),
        num(&w["ratio"]),
    )
}

fn lorch_csv(doc: &Value) -> String {
    let w = &doc["witness"];
    format!(
        "verdict,spec,pairs,evaluations,best_margin,x,y,gamma,lhs,rhs,margin\n{},{},{},{},{},{},{},{},{},{},{}\n",
        doc["verdict"].as_str().unwrap_or_default(),
        doc["spec"].as_str().unwrap_or_default(),
        doc["pairs"],
        doc["evaluations"],
        num(&doc["best_margin"]),
        coords(&w["x"]),
        coords(&w["y"]),
        num(&w["gamma"]),
        num(&w["lhs"]),
        num(&w["rhs"]),
        num(&w["margin"]),
    )
}

fn human_sweep(report: &sweep::SweepReport) -> String {
    let mut s = String::new();
    for r in &report.rows {
        if r.flag != sweep::RowFlag::Ok {
            let _ = writeln!(s, "! {} p={:.2} {} max_ratio={:.6}", r.flag.as_str(), r.p, r.kind, r.max_ratio);
        }
    }
    for r in &report.rows {
        let _ = writeln!(s, "p={:.2} {:<12} max_ratio={:.6} {}", r.p, r.kind.to_string(), r.max_ratio, r.flag.as_str());
    }
    let _ = writeln!(s, "{} dim {}: {} rows, {} errors", report.spec, report.dim, report.rows.len(), report.errors);
    s
}

fn human_certify(doc: &Value) -> String {
    let mut s = String::new();
    let ratio = doc["best_ratio"].as_f64().unwrap_or(f64::NAN);
    if doc.get("witness").is_some() {
        let w = &doc["witness"];
        let _ = writeln!(s, "! violation: ratio {ratio:.6} at x={} y={}", w["x"], w["y"]);
    }
    let _ = writeln!(
        s,
        "{} {} p={} q={}: best ratio {ratio:.6} after {} evaluations ({})",
        doc["verdict"].as_str().unwrap_or_default(),
        doc["spec"].as_str().unwrap_or_default(),
        doc["p"],
        doc["q"],
        doc["evaluations"],
        doc["caveat"].as_str().unwrap_or_default(),
    );
    s
}

fn human_lorch(doc: &Value) -> String {
    let mut s = String::new();
    let margin = doc["best_margin"].as_f64().unwrap_or(f64::NAN);
    if doc.get("witness").is_some() {
        let w = &doc["witness"];
        let _ = writeln!(
            s,
            "! violation: |x+y| exceeds |gx+y/g| by {margin:.6} at x={} y={} g={:.6}",
            w["x"],
            w["y"],
            w["gamma"].as_f64().unwrap_or(f64::NAN)
        );
    }
    let _ = writeln!(
        s,
        "{} {}: best margin {margin:.6} over {} pairs ({})",
        doc["verdict"].as_str().unwrap_or_default(),
        doc["spec"].as_str().unwrap_or_default(),
        doc["pairs"],
        doc["caveat"].as_str().unwrap_or_default(),
    );
    s
}

fn human_profile(profile: &extremum::FpProfile) -> String {
    let mut s = String::new();
    if profile.sign_changes != 1 {
        let _ = writeln!(s, "! {} sign changes of the derivative surrogate", profile.sign_changes);
    }
    let p0 = profile.p0.map(|p| format!("{p:.6}")).unwrap_or_else(|| "none".into());
    let _ = writeln!(
        s,
        "a={} b={}: f(0)={:.6} f(1)={:.6} p0={p0} sign_changes={}",
        profile.pair.a(),
        profile.pair.b(),
        profile.f0,
        profile.f1,
        profile.sign_changes
    );
    s
}
