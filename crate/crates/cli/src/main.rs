//! `qweb` command-line tool.
//!
//! Exit codes: 0 success, 1 replication failure, 2 input error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use qweb::analysis::{analyze_corpus, analyze_stats, AnalysisReport};
use qweb::bond::{bond_matrix, BondRow};
use qweb::corpus::{ingest, CooccurrenceStats, Tokenizer};
use qweb::replicate::{run_all, CriterionResult, DEFAULT_TOLERANCE};
use qweb::round_significant;

const DIGITS: usize = 10;

#[derive(Parser)]
#[command(name = "qweb", version, about = "Quantum meaning model of a document corpus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the inverted index of a directory of .txt files.
    Index {
        #[arg(long, value_name = "DIR")]
        corpus: PathBuf,
        /// Write the index as JSON to this file.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Full report for a concept pair A, B against a term X.
    Analyze {
        #[command(flatten)]
        source: Source,
        /// Comma-separated A,B,X (required with --corpus).
        #[arg(long, value_name = "A,B,X", value_delimiter = ',')]
        terms: Vec<String>,
        /// Target probability; defaults to n_ABX / n_AB.
        #[arg(long, value_parser = parse_probability)]
        target: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Re-derive every reference value and print a pass/fail table.
    Replicate {
        #[command(flatten)]
        output: Output,
    },
    /// Uniform-state meaning bonds for every pair of terms.
    Bond {
        #[arg(long, value_name = "DIR")]
        corpus: PathBuf,
        #[arg(long, value_name = "A,B,...", value_delimiter = ',', required = true)]
        terms: Vec<String>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    #[arg(long, value_name = "DIR")]
    corpus: Option<PathBuf>,
    /// Co-occurrence counts as JSON.
    #[arg(long, value_name = "FILE")]
    stats: Option<PathBuf>,
}

#[derive(Args)]
struct Output {
    #[arg(long)]
    json: bool,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

fn parse_probability(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !(0.0..=1.0).contains(&v) {
        return Err(format!("{v} is outside [0, 1]"));
    }
    Ok(v)
}

/// Failure carrying its exit code.
struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(2, e.to_string())
    }
}

fn num(x: f64) -> String {
    format!("{}", round_significant(x, DIGITS))
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".into(), num)
}

fn pair(p: [f64; 2]) -> String {
    format!("[{}, {}]", num(p[0]), num(p[1]))
}

fn round_json(v: &mut Value) {
    match v {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round_significant(x, DIGITS))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_json),
        Value::Object(map) => map.values_mut().for_each(round_json),
        _ => {}
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut v = serde_json::to_value(value)?;
    round_json(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure(2, format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_index(corpus: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let c = ingest(corpus, &Tokenizer::default())?;
    if let Some(path) = out {
        fs::write(path, c.index_json()?).map_err(|e| Failure(2, format!("{}: {e}", path.display())))?;
    }
    println!("n={}, vocab={}", c.n(), c.vocabulary_size());
    Ok(())
}

fn analysis_text(r: &AnalysisReport) -> String {
    let mut s = String::new();
    let w = &mut s;
    if let Some(t) = &r.terms {
        let _ = writeln!(w, "{:<24}A={} B={} X={}", "terms", t.a, t.b, t.x);
    }
    let st = &r.stats;
    let _ = writeln!(
        w,
        "{:<24}n={} n_A={} n_B={} n_AB={} n_AX={} n_BX={} n_ABX={}",
        "counts", st.n, st.n_a, st.n_b, st.n_ab, st.n_ax, st.n_bx, st.n_abx
    );
    let _ = writeln!(w, "{:<24}{}", "target", opt(r.target));
    let _ = writeln!(w, "{:<24}{}", "mu_A", opt(r.mu_a));
    let _ = writeln!(w, "{:<24}{}", "mu_B", opt(r.mu_b));
    let _ = writeln!(w, "{:<24}{}", "average", opt(r.average));
    let _ = writeln!(w, "{:<24}{}", "interference interval", r.interference_interval.map_or("-".into(), pair));
    if let Some(f) = &r.phase_fit {
        let _ = writeln!(w, "{:<24}feasible={} theta={} achieved={}", "phase fit", f.feasible, opt(f.theta), opt(f.achieved));
    }
    for (label, rep) in [("fock and", &r.fock_and), ("fock or", &r.fock_or)] {
        if let Some(f) = rep {
            let _ = writeln!(
                w,
                "{:<24}logical={} range={} covers_target={}",
                label,
                num(f.logical),
                pair(f.range),
                f.covers_target
            );
        }
    }
    if let Some(c) = &r.context_fit {
        let p = &c.params;
        let _ = writeln!(
            w,
            "{:<24}p_A={} p_B={} c={} c'={} phi={} phi'={} achieved={} residual={:.9e} path={}",
            "context fit",
            num(p.p_a),
            num(p.p_b),
            num(p.c),
            num(p.c_prime),
            num(p.phi),
            num(p.phi_prime),
            num(c.achieved),
            c.residual,
            serde_json::to_value(c.path).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
        );
    }
    for (k, e) in &r.errors {
        let _ = writeln!(w, "{:<24}{k}: {e}", "error");
    }
    s
}

fn cmd_analyze(source: &Source, terms: &[String], target: Option<f64>, output: &Output) -> Result<(), Failure> {
    let report = if let Some(dir) = &source.corpus {
        let [a, b, x] = terms else {
            return Err(Failure(2, "--terms must list exactly three terms A,B,X".into()));
        };
        let corpus = ingest(dir, &Tokenizer::default())?;
        analyze_corpus(&corpus, a, b, x, target)?
    } else {
        let path = source.stats.as_ref().expect("clap enforces one source");
        let text = fs::read_to_string(path).map_err(|e| Failure(2, format!("{}: {e}", path.display())))?;
        analyze_stats(&CooccurrenceStats::from_json_str(&text)?, target)?
    };
    let text = if output.json { to_json(&report)? } else { analysis_text(&report) };
    emit(&text, output.out.as_deref())
}

fn tolerance() -> Result<f64, Failure> {
    match std::env::var("QWEB_TOLERANCE") {
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t >= 0.0 => Ok(t),
            _ => Err(Failure(2, format!("QWEB_TOLERANCE={s:?} is not a non-negative number"))),
        },
        Err(_) => Ok(DEFAULT_TOLERANCE),
    }
}

fn replicate_text(rows: &[CriterionResult]) -> String {
    let mut s = String::new();
    for r in rows {
        let _ = writeln!(s, "{} {:>2} {:<20} {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.name, r.detail);
    }
    let passed = rows.iter().filter(|r| r.passed).count();
    let _ = writeln!(s, "{passed}/{} criteria passed", rows.len());
    s
}

fn cmd_replicate(output: &Output) -> Result<(), Failure> {
    let rows = run_all(tolerance()?);
    let text = if output.json { to_json(&rows)? } else { replicate_text(&rows) };
    emit(&text, output.out.as_deref())?;
    if rows.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure(1, "replication failed".into()))
    }
}

fn bond_text(rows: &[BondRow]) -> String {
    let wa = rows.iter().map(|r| r.a.len()).max().unwrap_or(1).max(1);
    let wb = rows.iter().map(|r| r.b.len()).max().unwrap_or(1).max(1);
    let mut s = format!("{:<wa$}  {:<wb$}  {:>16}  class\n", "A", "B", "bond");
    for r in rows {
        let _ = writeln!(s, "{:<wa$}  {:<wb$}  {:>16}  {}", r.a, r.b, opt(r.bond), r.class);
    }
    s
}

fn cmd_bond(corpus: &Path, terms: &[String], output: &Output) -> Result<(), Failure> {
    if terms.len() < 2 {
        return Err(Failure(2, "--terms needs at least two terms".into()));
    }
    let c = ingest(corpus, &Tokenizer::default())?;
    let rows = bond_matrix(&c, terms);
    let text = if output.json { to_json(&rows)? } else { bond_text(&rows) };
    emit(&text, output.out.as_deref())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Index { corpus, out } => cmd_index(corpus, out.as_deref()),
        Command::Analyze { source, terms, target, output } => cmd_analyze(source, terms, *target, output),
        Command::Replicate { output } => cmd_replicate(output),
        Command::Bond { corpus, terms, output } => cmd_bond(corpus, terms, output),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
