//! Two-sector Fock-space probabilities.
//!
//! Sector 1 treats the combination `AB` as one emergent concept (the
//! superposition, with interference). Sector 2 treats it as two concepts in
//! the product state `|ψ_A⟩⊗|ψ_B⟩`, evaluated logically. The state weight
//! `m` mixes them: `μ_AB = m² μ_logic + (1 − m²)[½(μ_A+μ_B) + Int_AB]`.

use serde::{Deserialize, Serialize};

use crate::corpus::CooccurrenceStats;
use crate::interference::{interference_interval, InterferenceInterval};
use crate::{QwebError, Result, NORM_TOL};

/// Second-sector participation `m` and the two sector phases.
///
/// The phases `ν`, `λ` belong to the state but drop out of the probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockParams {
    pub m: f64,
    pub nu: f64,
    pub lambda: f64,
}

impl FockParams {
    pub fn new(m: f64, nu: f64, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&m) {
            return Err(QwebError::InvalidArgument(format!("Fock weight m = {m} outside [0, 1]")));
        }
        Ok(FockParams { m, nu, lambda })
    }

    /// Weight of the second sector, `m²`.
    pub fn second_sector_weight(&self) -> f64 {
        self.m * self.m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LogicalMode {
    #[serde(rename = "and")]
    Conjunction,
    #[serde(rename = "or")]
    Disjunction,
}

impl LogicalMode {
    /// Second-sector probability for this mode.
    pub fn evaluate(self, mu_a: f64, mu_b: f64) -> f64 {
        match self {
            LogicalMode::Conjunction => mu_and(mu_a, mu_b),
            LogicalMode::Disjunction => mu_or(mu_a, mu_b),
        }
    }
}

pub fn mu_and(mu_a: f64, mu_b: f64) -> f64 {
    mu_a * mu_b
}

pub fn mu_or(mu_a: f64, mu_b: f64) -> f64 {
    mu_a + mu_b - mu_a * mu_b
}

/// Convex combination of the logical (sector 2) and interference (sector 1)
/// probabilities with weights `m²` and `1 − m²`.
pub fn fock_probability(
    params: &FockParams,
    mode: LogicalMode,
    mu_a: f64,
    mu_b: f64,
    interference: f64,
) -> Result<f64> {
    for (name, v) in [("mu_A", mu_a), ("mu_B", mu_b)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(QwebError::InvalidArgument(format!("{name} = {v} outside [0, 1]")));
        }
    }
    let first = 0.5 * (mu_a + mu_b) + interference;
    if !(-NORM_TOL..=1.0 + NORM_TOL).contains(&first) {
        return Err(QwebError::InvalidFirstSector(first));
    }
    let w = params.second_sector_weight();
    Ok((w * mode.evaluate(mu_a, mu_b) + (1.0 - w) * first.clamp(0.0, 1.0)).clamp(0.0, 1.0))
}

/// Values reachable by varying both the phases and `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockRange {
    pub mode: LogicalMode,
    pub logical: f64,
    pub interference_interval: InterferenceInterval,
    pub lo: f64,
    pub hi: f64,
}

/// JSON form of a [`FockRange`] checked against a target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FockReport {
    pub mode: LogicalMode,
    pub logical: f64,
    pub interference_interval: [f64; 2],
    pub range: [f64; 2],
    pub covers_target: bool,
}

impl FockRange {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn report(&self, target: f64) -> FockReport {
        FockReport {
            mode: self.mode,
            logical: self.logical,
            interference_interval: self.interference_interval.as_pair(),
            range: [self.lo, self.hi],
            covers_target: self.contains(target),
        }
    }
}

/// Convex hull of the logical value and the interference interval.
pub fn fock_range(stats: &CooccurrenceStats, mode: LogicalMode) -> Result<FockRange> {
    let interval = interference_interval(stats)?;
    let logical = mode.evaluate(stats.mu_a()?, stats.mu_b()?);
    Ok(FockRange {
        mode,
        logical,
        interference_interval: interval,
        lo: logical.min(interval.lo).clamp(0.0, 1.0),
        hi: logical.max(interval.hi).clamp(0.0, 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn y_case() -> CooccurrenceStats {
        CooccurrenceStats { n: 140, n_a: 100, n_b: 50, n_ab: 10, n_ax: 10, n_bx: 10, n_abx: 5 }
    }

    #[test]
    fn logical_values() {
        assert!((mu_and(0.1, 0.2) - 0.02).abs() < 1e-16);
        assert!((mu_or(0.1, 0.2) - 0.28).abs() < 1e-16);
        assert_eq!(mu_and(1.0, 0.37), 0.37);
        assert_eq!(mu_and(0.0, 0.37), 0.0);
        assert_eq!(mu_or(0.0, 0.37), 0.37);
        assert_eq!(mu_or(1.0, 0.37), 1.0);
    }

    #[test]
    fn pure_sectors() {
        let full = FockParams::new(1.0, 0.3, 1.7).unwrap();
        let p = fock_probability(&full, LogicalMode::Conjunction, 0.1, 0.2, 0.05).unwrap();
        assert!((p - 0.02).abs() < 1e-16);
        let none = FockParams::new(0.0, 0.0, 0.0).unwrap();
        let p = fock_probability(&none, LogicalMode::Conjunction, 0.1, 0.2, 0.05).unwrap();
        assert!((p - 0.2).abs() < 1e-16);
    }

    #[test]
    fn half_weight_disjunction() {
        let params = FockParams::new(0.5f64.sqrt(), 0.0, 0.0).unwrap();
        let p = fock_probability(&params, LogicalMode::Disjunction, 0.1, 0.2, 0.0).unwrap();
        assert!((p - 0.215).abs() < 1e-15);
        // same value on a fine grid of the first-sector form
        let grid: f64 = (0..=10).map(|_| 0.5 * 0.28 + 0.5 * 0.15).sum::<f64>() / 11.0;
        assert!((p - grid).abs() < 1e-15);
    }

    #[test]
    fn invalid_inputs() {
        assert!(FockParams::new(1.1, 0.0, 0.0).is_err());
        let p = FockParams::new(0.5, 0.0, 0.0).unwrap();
        assert!(matches!(
            fock_probability(&p, LogicalMode::Conjunction, 0.9, 0.9, 0.5),
            Err(QwebError::InvalidFirstSector(_))
        ));
        assert!(fock_probability(&p, LogicalMode::Conjunction, 1.5, 0.9, 0.0).is_err());
    }

    #[test]
    fn y_case_ranges() {
        let and = fock_range(&y_case(), LogicalMode::Conjunction).unwrap();
        assert!((and.lo - 0.02).abs() < 1e-15);
        assert!((and.hi - 0.2207106781).abs() < 1e-9);
        assert!(!and.contains(0.5));
        let or = fock_range(&y_case(), LogicalMode::Disjunction).unwrap();
        assert!((or.lo - 0.0792893219).abs() < 1e-9);
        assert!((or.hi - 0.28).abs() < 1e-15);
        let r = or.report(0.5);
        assert!(!r.covers_target);
        let js = serde_json::to_value(&r).unwrap();
        assert_eq!(js["mode"], "or");
    }

    #[test]
    fn interior_logical_value_is_absorbed() {
        // μ_A = μ_B = 0.5: and = 0.25 lies inside [0.5 - w, 0.5 + w] only if w ≥ 0.25
        let s = CooccurrenceStats { n: 8, n_a: 4, n_b: 4, n_ab: 4, n_ax: 2, n_bx: 2, n_abx: 2 };
        let r = fock_range(&s, LogicalMode::Conjunction).unwrap();
        assert_eq!((r.lo, r.hi), (r.interference_interval.lo, r.interference_interval.hi));
    }

    #[test]
    fn grid_never_leaves_range() {
        let s = y_case();
        let (mu_a, mu_b) = (s.mu_a().unwrap(), s.mu_b().unwrap());
        let half = s.n_abx as f64 / ((s.n_a * s.n_b) as f64).sqrt();
        for mode in [LogicalMode::Conjunction, LogicalMode::Disjunction] {
            let r = fock_range(&s, mode).unwrap();
            for mi in 0..=10 {
                let params = FockParams::new(mi as f64 / 10.0, 0.0, 0.0).unwrap();
                for ti in 0..=8 {
                    let int = half * (PI * ti as f64 / 8.0).cos();
                    let v = fock_probability(&params, mode, mu_a, mu_b, int).unwrap();
                    assert!(v >= r.lo - 1e-12 && v <= r.hi + 1e-12);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn and_below_min_below_max_below_or(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
            prop_assert!(mu_and(a, b) <= a.min(b) + 1e-15);
            prop_assert!(a.max(b) <= mu_or(a, b) + 1e-15);
        }

        #[test]
        fn monotone_toward_logical_value(a in 0.0f64..=1.0, b in 0.0f64..=1.0, t in 0.0f64..PI, or in any::<bool>()) {
            let mode = if or { LogicalMode::Disjunction } else { LogicalMode::Conjunction };
            let half = 0.5 * (a + b).min(2.0 - a - b) * t.cos().abs();
            let int = half * t.cos().signum();
            let logic = mode.evaluate(a, b);
            let mut prev_gap = f64::INFINITY;
            for k in 0..=20 {
                let params = FockParams::new((k as f64 / 20.0).sqrt(), 0.0, 0.0).unwrap();
                let v = fock_probability(&params, mode, a, b, int).unwrap();
                let gap = (v - logic).abs();
                prop_assert!(gap <= prev_gap + 1e-12);
                prev_gap = gap;
            }
            prop_assert!(prev_gap < 1e-15);
        }
    }
}
