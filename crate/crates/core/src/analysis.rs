//! End-to-end report for one `(A, B, X)` triple.
//!
//! Each stage is computed independently. A stage that cannot be evaluated
//! (zero counts, unknown term, unreachable target) leaves its field empty and
//! records a message under the same key in `errors`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::context::{solve_context, ContextFit};
use crate::corpus::{CooccurrenceStats, Corpus};
use crate::fock::{fock_range, FockReport, LogicalMode};
use crate::interference::{fit_phases, interference_interval, PhaseFitReport};
use crate::{QwebError, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terms {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    #[serde(rename = "X")]
    pub x: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<Terms>,
    pub stats: CooccurrenceStats,
    pub target: Option<f64>,
    #[serde(rename = "mu_A")]
    pub mu_a: Option<f64>,
    #[serde(rename = "mu_B")]
    pub mu_b: Option<f64>,
    pub average: Option<f64>,
    pub interference_interval: Option<[f64; 2]>,
    pub phase_fit: Option<PhaseFitReport>,
    pub fock_and: Option<FockReport>,
    pub fock_or: Option<FockReport>,
    pub context_fit: Option<ContextFit>,
    pub errors: BTreeMap<String, String>,
}

fn keep<T>(errors: &mut BTreeMap<String, String>, key: &str, r: Result<T>) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            errors.insert(key.to_string(), e.to_string());
            None
        }
    }
}

/// Runs the full pipeline on precomputed counts. `target` defaults to
/// `n_ABX / n_AB`.
pub fn analyze_stats(stats: &CooccurrenceStats, target: Option<f64>) -> Result<AnalysisReport> {
    if let Some(t) = target {
        if !(0.0..=1.0).contains(&t) {
            return Err(QwebError::InvalidArgument(format!("target {t} outside [0, 1]")));
        }
    }
    stats.validate()?;
    let mut errors = BTreeMap::new();
    let target = match target {
        Some(t) => Some(t),
        None => keep(&mut errors, "target", stats.mu_ab_target()),
    };
    let mu_a = keep(&mut errors, "mu_A", stats.mu_a());
    let mu_b = keep(&mut errors, "mu_B", stats.mu_b());
    let interval = match (mu_a, mu_b) {
        (Some(_), Some(_)) => keep(&mut errors, "interference_interval", interference_interval(stats)),
        _ => None,
    };
    let average = interval.map(|i| i.center());

    let (mut phase_fit, mut fock_and, mut fock_or, mut context_fit) = (None, None, None, None);
    if let (Some(t), Some(_)) = (target, interval) {
        phase_fit = keep(&mut errors, "phase_fit", fit_phases(stats, t)).map(|f| f.report());
        fock_and = keep(&mut errors, "fock_and", fock_range(stats, LogicalMode::Conjunction)).map(|r| r.report(t));
        fock_or = keep(&mut errors, "fock_or", fock_range(stats, LogicalMode::Disjunction)).map(|r| r.report(t));
    }
    if let (Some(t), Some(a), Some(b)) = (target, mu_a, mu_b) {
        context_fit = keep(&mut errors, "context_fit", solve_context(a, b, t));
    }

    Ok(AnalysisReport {
        terms: None,
        stats: *stats,
        target,
        mu_a,
        mu_b,
        average,
        interference_interval: interval.map(|i| i.as_pair()),
        phase_fit,
        fock_and,
        fock_or,
        context_fit,
        errors,
    })
}

/// Counts `a`, `b`, `x` in `corpus` and runs [`analyze_stats`]. Terms that
/// occur in no document are reported under `errors`.
pub fn analyze_corpus(corpus: &Corpus, a: &str, b: &str, x: &str, target: Option<f64>) -> Result<AnalysisReport> {
    let stats = corpus.counts(a, b, x);
    let mut report = analyze_stats(&stats, target)?;
    for (key, term) in [("A", a), ("B", b), ("X", x)] {
        if corpus.posting(term).is_empty() {
            report.errors.insert(key.to_string(), format!("term {term:?} not found in corpus"));
        }
    }
    report.terms = Some(Terms { a: a.to_string(), b: b.to_string(), x: x.to_string() });
    Ok(report)
}
