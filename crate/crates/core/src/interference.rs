//! Combined-concept probabilities from superposed characteristic states.
//!
//! With `|χ_A⟩`, `|χ_B⟩` uniform over the documents containing A and B,
//! the combination `AB` is the superposition `(|χ_A⟩ + |χ_B⟩)/√2` and its
//! probability against the documents containing X is the uniform average of
//! `μ_A`, `μ_B` plus an interference term that depends only on the phase
//! differences over the documents containing all three terms.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::corpus::CooccurrenceStats;
use crate::quantum::{IndexProjector, Projection, QState};
use crate::{IndexSet, QwebError, Result, NORM_TOL};

/// Two characteristic states over a common basis.
///
/// `phases_a[k]` is the phase of the `k`-th smallest index of `support_a`,
/// likewise for B.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferenceSetup {
    support_a: IndexSet,
    support_b: IndexSet,
    phases_a: Vec<f64>,
    phases_b: Vec<f64>,
    n: usize,
}

impl InterferenceSetup {
    pub fn new(
        support_a: IndexSet,
        phases_a: Vec<f64>,
        support_b: IndexSet,
        phases_b: Vec<f64>,
        n: usize,
    ) -> Result<Self> {
        for (support, phases, name) in [(&support_a, &phases_a, "A"), (&support_b, &phases_b, "B")] {
            if support.is_empty() {
                return Err(QwebError::InvalidArgument(format!("support of {name} is empty")));
            }
            if support.max().is_some_and(|m| m >= n) {
                return Err(QwebError::InvalidArgument(format!(
                    "support of {name} exceeds dimension {n}"
                )));
            }
            if phases.len() != support.len() {
                return Err(QwebError::DimensionMismatch {
                    expected: support.len(),
                    actual: phases.len(),
                });
            }
        }
        Ok(InterferenceSetup { support_a, support_b, phases_a, phases_b, n })
    }

    pub fn support_a(&self) -> &IndexSet {
        &self.support_a
    }

    pub fn support_b(&self) -> &IndexSet {
        &self.support_b
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn phase_a(&self, j: usize) -> Option<f64> {
        self.support_a.position(j).map(|k| self.phases_a[k])
    }

    pub fn phase_b(&self, j: usize) -> Option<f64> {
        self.support_b.position(j).map(|k| self.phases_b[k])
    }

    pub fn state_a(&self) -> Result<QState> {
        QState::characteristic(&self.support_a, &self.phases_a, self.n)
    }

    pub fn state_b(&self) -> Result<QState> {
        QState::characteristic(&self.support_b, &self.phases_b, self.n)
    }

    fn norm_factor(&self) -> f64 {
        1.0 / ((self.support_a.len() * self.support_b.len()) as f64).sqrt()
    }

    /// `⟨χ_A|χ_B⟩` from the shared support.
    pub fn overlap(&self) -> Complex64 {
        let shared = self.support_a.intersection(&self.support_b);
        let sum: Complex64 = shared
            .iter()
            .map(|j| Complex64::from_polar(1.0, self.phase_b(j).unwrap() - self.phase_a(j).unwrap()))
            .sum();
        sum * self.norm_factor()
    }
}

/// `Int_AB = Σ_{j∈J_AB,X} cos(β_j − α_j) / √(n_A n_B)`.
pub fn interference_term(setup: &InterferenceSetup, m_x: &IndexProjector) -> Result<f64> {
    if m_x.dim() != setup.n {
        return Err(QwebError::DimensionMismatch { expected: setup.n, actual: m_x.dim() });
    }
    let shared = setup
        .support_a
        .intersection(&setup.support_b)
        .intersection(m_x.indices());
    let sum: f64 = shared
        .iter()
        .map(|j| (setup.phase_b(j).unwrap() - setup.phase_a(j).unwrap()).cos())
        .sum();
    Ok(sum * setup.norm_factor())
}

/// `μ_AB = ½(μ_A + μ_B) + Int_AB` for orthogonal `χ_A`, `χ_B`, clamped to
/// `[0, 1]`.
///
/// Orthogonality does not require disjoint supports, only a vanishing
/// overlap sum. Non-orthogonal setups are rejected; see [`mu_nonorthogonal`].
pub fn mu_combined(setup: &InterferenceSetup, m_x: &IndexProjector) -> Result<f64> {
    let overlap = setup.overlap().norm();
    if overlap > NORM_TOL {
        return Err(QwebError::NotOrthogonal { overlap });
    }
    let int = interference_term(setup, m_x)?;
    let n_a = setup.support_a.len() as f64;
    let n_b = setup.support_b.len() as f64;
    let mu_a = setup.support_a.intersection(m_x.indices()).len() as f64 / n_a;
    let mu_b = setup.support_b.intersection(m_x.indices()).len() as f64 / n_b;
    Ok((0.5 * (mu_a + mu_b) + int).clamp(0.0, 1.0))
}

/// Combined probability for arbitrary (possibly overlapping) states:
/// `[½(μ_A+μ_B) + Re⟨ψ_A|M|ψ_B⟩] / [1 + Re⟨ψ_A|ψ_B⟩]`.
pub fn mu_nonorthogonal<P: Projection + ?Sized>(a: &QState, b: &QState, m: &P) -> Result<f64> {
    let n = a.dim();
    if b.dim() != n || m.dim() != n {
        return Err(QwebError::DimensionMismatch { expected: n, actual: b.dim().max(m.dim()) });
    }
    let den = 1.0 + a.inner(b)?.re;
    if den.abs() < NORM_TOL {
        return Err(QwebError::DestructiveAnnihilation);
    }
    let mu_a = m.expectation(a.amplitudes());
    let mu_b = m.expectation(b.amplitudes());
    let int = m.matrix_element(a.amplitudes(), b.amplitudes()).re;
    Ok(((0.5 * (mu_a + mu_b) + int) / den).clamp(0.0, 1.0))
}

/// Range of `μ_AB` reachable by varying phases alone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterferenceInterval {
    pub lo: f64,
    pub hi: f64,
    /// Unclamped endpoints.
    pub raw_lo: f64,
    pub raw_hi: f64,
    /// Whether either endpoint had to be clamped into `[0, 1]`.
    pub clamped: bool,
}

impl InterferenceInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.raw_lo + self.raw_hi)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.raw_hi - self.raw_lo)
    }

    pub fn as_pair(&self) -> [f64; 2] {
        [self.lo, self.hi]
    }
}

/// `½(n_AX/n_A + n_BX/n_B) ∓ n_ABX/√(n_A n_B)`.
pub fn interference_interval(stats: &CooccurrenceStats) -> Result<InterferenceInterval> {
    let avg = 0.5 * (stats.mu_a()? + stats.mu_b()?);
    let half = half_width(stats);
    let (raw_lo, raw_hi) = (avg - half, avg + half);
    let lo = raw_lo.clamp(0.0, 1.0);
    let hi = raw_hi.clamp(0.0, 1.0);
    Ok(InterferenceInterval { lo, hi, raw_lo, raw_hi, clamped: lo != raw_lo || hi != raw_hi })
}

fn half_width(stats: &CooccurrenceStats) -> f64 {
    stats.n_abx as f64 / ((stats.n_a * stats.n_b) as f64).sqrt()
}

/// Count form of the combined probability with one phase difference `θ`
/// shared by every document containing A, B and X.
pub fn mu_from_phase_difference(stats: &CooccurrenceStats, theta: f64) -> Result<f64> {
    let avg = 0.5 * (stats.mu_a()? + stats.mu_b()?);
    Ok((avg + half_width(stats) * theta.cos()).clamp(0.0, 1.0))
}

/// Outcome of fitting a uniform phase difference to a target probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhaseFit {
    Feasible {
        theta: f64,
        achieved: f64,
        interval: InterferenceInterval,
    },
    Infeasible {
        interval: InterferenceInterval,
    },
}

/// JSON form of a [`PhaseFit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseFitReport {
    pub feasible: bool,
    pub theta: Option<f64>,
    pub interval: [f64; 2],
    pub achieved: Option<f64>,
}

impl PhaseFit {
    pub fn is_feasible(&self) -> bool {
        matches!(self, PhaseFit::Feasible { .. })
    }

    pub fn interval(&self) -> &InterferenceInterval {
        match self {
            PhaseFit::Feasible { interval, .. } | PhaseFit::Infeasible { interval } => interval,
        }
    }

    pub fn report(&self) -> PhaseFitReport {
        match *self {
            PhaseFit::Feasible { theta, achieved, interval } => PhaseFitReport {
                feasible: true,
                theta: Some(theta),
                interval: interval.as_pair(),
                achieved: Some(achieved),
            },
            PhaseFit::Infeasible { interval } => PhaseFitReport {
                feasible: false,
                theta: None,
                interval: interval.as_pair(),
                achieved: None,
            },
        }
    }
}

/// Finds `θ` with `μ_AB(θ) = target`, one phase difference for all of
/// `J_AB,X` (the remaining shared documents get `π/2`).
pub fn fit_phases(stats: &CooccurrenceStats, target: f64) -> Result<PhaseFit> {
    if !(0.0..=1.0).contains(&target) {
        return Err(QwebError::InvalidArgument(format!("target {target} outside [0, 1]")));
    }
    let interval = interference_interval(stats)?;
    let avg = interval.center();
    let half = half_width(stats);
    let theta = if half == 0.0 {
        if (target - avg).abs() > NORM_TOL {
            return Ok(PhaseFit::Infeasible { interval });
        }
        FRAC_PI_2
    } else {
        let cos = (target - avg) / half;
        if cos.abs() > 1.0 + NORM_TOL {
            return Ok(PhaseFit::Infeasible { interval });
        }
        cos.clamp(-1.0, 1.0).acos()
    };
    let achieved = mu_from_phase_difference(stats, theta)?;
    Ok(PhaseFit::Feasible { theta, achieved, interval })
}

/// Builds an explicit orthogonal setup realising phase difference `θ` on
/// `J_A ∩ J_B ∩ J_X`.
///
/// `α_j = 0` on `J_A`. On the shared documents outside `J_X` the phases of
/// B are chosen so that their contribution cancels the overlap of the
/// `J_AB,X` block, which makes `⟨χ_A|χ_B⟩ = 0`. That is possible only when
/// `|J_AB \ J_X|` can balance `|J_AB,X|` unit phasors; otherwise an error is
/// returned.
pub fn realize_phase_difference(
    support_a: &IndexSet,
    support_b: &IndexSet,
    support_x: &IndexSet,
    n: usize,
    theta: f64,
) -> Result<InterferenceSetup> {
    let shared = support_a.intersection(support_b);
    let shared_x = shared.intersection(support_x);
    let rest = shared.difference(support_x);
    let k = shared_x.len();
    let m = rest.len();
    let compensation = balancing_phases(m, k as f64, theta + PI).ok_or_else(|| {
        QwebError::InvalidArgument(format!(
            "{m} shared documents outside X cannot cancel {k} in-X phasors"
        ))
    })?;

    let phases_b: Vec<f64> = support_b
        .iter()
        .map(|j| {
            if shared_x.contains(j) {
                theta
            } else if let Some(pos) = rest.position(j) {
                compensation[pos]
            } else {
                0.0
            }
        })
        .collect();
    InterferenceSetup::new(
        support_a.clone(),
        vec![0.0; support_a.len()],
        support_b.clone(),
        phases_b,
        n,
    )
}

/// Phases of `m` unit phasors summing to `magnitude · e^{i·direction}`.
fn balancing_phases(m: usize, magnitude: f64, direction: f64) -> Option<Vec<f64>> {
    if magnitude > m as f64 {
        return None;
    }
    match m {
        0 => (magnitude == 0.0).then(Vec::new),
        1 => (magnitude == 1.0).then(|| vec![direction]),
        _ => {
            // an odd count puts one phasor on the axis and pairs the rest
            let (lead, pairs) = if m.is_multiple_of(2) { (0, m) } else { (1, m - 1) };
            let spread = ((magnitude - lead as f64) / pairs as f64).clamp(-1.0, 1.0).acos();
            let mut v = vec![direction; lead];
            for i in 0..pairs {
                v.push(if i % 2 == 0 { direction + spread } else { direction - spread });
            }
            Some(v)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{born_probability, superpose};
    use proptest::prelude::*;
    use std::f64::consts::FRAC_PI_4;

    fn x_case() -> CooccurrenceStats {
        CooccurrenceStats { n: 140, n_a: 100, n_b: 50, n_ab: 10, n_ax: 80, n_bx: 15, n_abx: 5 }
    }

    fn y_case() -> CooccurrenceStats {
        CooccurrenceStats { n_ax: 10, n_bx: 10, n_abx: 5, ..x_case() }
    }

    /// Documents 0..100 contain A, 90..140 contain B; X is planted so that
    /// the counts match the X case.
    fn x_case_sets() -> (IndexSet, IndexSet, IndexSet) {
        let a: IndexSet = (0..100).collect();
        let b: IndexSet = (90..140).collect();
        let x: IndexSet = (15..95).chain(100..110).collect();
        (a, b, x)
    }

    #[test]
    fn planted_sets_match_x_case_counts() {
        let (a, b, x) = x_case_sets();
        assert_eq!(a.intersection(&b).len(), 10);
        assert_eq!(a.intersection(&x).len(), 80);
        assert_eq!(b.intersection(&x).len(), 15);
        assert_eq!(a.intersection(&b).intersection(&x).len(), 5);
    }

    #[test]
    fn interference_term_extremes() {
        let (a, b, x) = x_case_sets();
        let mx = IndexProjector::new(x.clone(), 140).unwrap();
        let quarter = InterferenceSetup::new(a.clone(), vec![0.0; 100], b.clone(), vec![FRAC_PI_2; 50], 140).unwrap();
        assert!(interference_term(&quarter, &mx).unwrap().abs() < 1e-15);
        let aligned = InterferenceSetup::new(a, vec![0.0; 100], b, vec![0.0; 50], 140).unwrap();
        let int = interference_term(&aligned, &mx).unwrap();
        assert!((int - 5.0 / 5000f64.sqrt()).abs() < 1e-15);
        assert!((int - 0.0707107).abs() < 1e-7);
    }

    #[test]
    fn interval_worked_examples() {
        let i = interference_interval(&x_case()).unwrap();
        assert!((i.lo - 0.4792893219).abs() < 1e-9);
        assert!((i.hi - 0.6207106781).abs() < 1e-9);
        assert!(!i.clamped);
        let i = interference_interval(&y_case()).unwrap();
        assert!((i.lo - 0.0792893219).abs() < 1e-9);
        assert!((i.hi - 0.2207106781).abs() < 1e-9);
    }

    #[test]
    fn interval_degenerate_and_clamped() {
        let s = CooccurrenceStats { n_abx: 0, n_ab: 0, ..x_case() };
        let i = interference_interval(&s).unwrap();
        assert_eq!(i.lo, i.hi);
        assert!((i.lo - 0.55).abs() < 1e-15);

        let s = CooccurrenceStats { n: 4, n_a: 2, n_b: 2, n_ab: 2, n_ax: 2, n_bx: 2, n_abx: 2 };
        let i = interference_interval(&s).unwrap();
        assert_eq!((i.lo, i.hi), (0.0, 1.0));
        assert_eq!((i.raw_lo, i.raw_hi), (0.0, 2.0));
        assert!(i.clamped);

        let zero = CooccurrenceStats { n_a: 0, n_ab: 0, n_ax: 0, n_abx: 0, ..x_case() };
        assert!(interference_interval(&zero).is_err());
    }

    #[test]
    fn fit_x_case() {
        let fit = fit_phases(&x_case(), 0.5).unwrap();
        let PhaseFit::Feasible { theta, achieved, .. } = fit else { panic!("infeasible") };
        // cos θ = -0.05·√5000/5
        assert!((theta.cos() + 0.05 * 5000f64.sqrt() / 5.0).abs() < 1e-12);
        assert!((theta - 3.0 * FRAC_PI_4).abs() < 1e-9);
        assert!((achieved - 0.5).abs() < 1e-12);
        assert!((mu_from_phase_difference(&x_case(), theta).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fit_y_case_is_infeasible() {
        let fit = fit_phases(&y_case(), 0.5).unwrap();
        assert!(!fit.is_feasible());
        let r = fit.report();
        assert!((r.interval[0] - 0.0793).abs() < 1e-4 && (r.interval[1] - 0.2207).abs() < 1e-4);
        assert_eq!(r.theta, None);
        let js = serde_json::to_value(&r).unwrap();
        assert_eq!(js["feasible"], false);
        assert!(js["theta"].is_null());
    }

    #[test]
    fn fit_average_gives_right_angle() {
        let PhaseFit::Feasible { theta, .. } = fit_phases(&x_case(), 0.55).unwrap() else { panic!() };
        assert!((theta - FRAC_PI_2).abs() < 1e-12);
        let none = CooccurrenceStats { n_abx: 0, ..x_case() };
        assert!(fit_phases(&none, 0.55).unwrap().is_feasible());
        assert!(!fit_phases(&none, 0.5).unwrap().is_feasible());
        assert!(fit_phases(&x_case(), 1.5).is_err());
    }

    #[test]
    fn x_case_realised_as_explicit_orthogonal_states() {
        let (a, b, x) = x_case_sets();
        let PhaseFit::Feasible { theta, .. } = fit_phases(&x_case(), 0.5).unwrap() else { panic!() };
        let setup = realize_phase_difference(&a, &b, &x, 140, theta).unwrap();
        assert!(setup.overlap().norm() < 1e-14);
        let mx = IndexProjector::new(x, 140).unwrap();
        let mu = mu_combined(&setup, &mx).unwrap();
        assert!((mu - 0.5).abs() < 1e-12);
        let oracle = born_probability(
            &superpose(&setup.state_a().unwrap(), &setup.state_b().unwrap()).unwrap(),
            &mx,
        )
        .unwrap();
        assert!((oracle - 0.5).abs() < 1e-12);
    }

    #[test]
    fn overlapping_non_orthogonal_setup_is_rejected() {
        let (a, b, x) = x_case_sets();
        let setup = InterferenceSetup::new(a, vec![0.0; 100], b, vec![0.0; 50], 140).unwrap();
        let mx = IndexProjector::new(x, 140).unwrap();
        assert!(matches!(mu_combined(&setup, &mx), Err(QwebError::NotOrthogonal { .. })));
    }

    #[test]
    fn nonorthogonal_reductions() {
        let a = QState::general(&[1.0, 2.0, 0.5, 0.0], &[0.0, 1.0, 2.0, 0.0]).unwrap();
        let m = IndexProjector::new(vec![1, 2].into(), 4).unwrap();
        let mu_a = born_probability(&a, &m).unwrap();
        assert!((mu_nonorthogonal(&a, &a, &m).unwrap() - mu_a).abs() < 1e-12);

        let b = QState::basis(4, 3).unwrap();
        let mu_b = born_probability(&b, &m).unwrap();
        let int = m.matrix_element(a.amplitudes(), b.amplitudes()).re;
        assert!((mu_nonorthogonal(&a, &b, &m).unwrap() - (0.5 * (mu_a + mu_b) + int)).abs() < 1e-15);

        let neg = a.with_global_phase(PI);
        assert!(mu_nonorthogonal(&a, &neg, &m).is_err());
    }

    #[test]
    fn sweep_is_monotone_between_the_endpoints() {
        let s = x_case();
        let i = interference_interval(&s).unwrap();
        assert!((mu_from_phase_difference(&s, 0.0).unwrap() - i.hi).abs() < 1e-15);
        assert!((mu_from_phase_difference(&s, PI).unwrap() - i.lo).abs() < 1e-15);
        let mut prev = f64::INFINITY;
        for k in 0..=200 {
            let v = mu_from_phase_difference(&s, PI * k as f64 / 200.0).unwrap();
            assert!(v <= prev + 1e-15);
            assert!(i.contains(v));
            prev = v;
        }
    }

    #[test]
    fn balancing_phases_cancel() {
        for m in 0..7usize {
            for k in 0..=m {
                let dir = 0.37;
                match balancing_phases(m, k as f64, dir) {
                    Some(ph) => {
                        let s: Complex64 = ph.iter().map(|&p| Complex64::from_polar(1.0, p)).sum();
                        assert!((s - Complex64::from_polar(k as f64, dir)).norm() < 1e-12, "m={m} k={k}");
                    }
                    None => assert!((m == 1 && k == 0) || k > m),
                }
            }
        }
    }

    fn arb_disjoint_setup() -> impl Strategy<Value = (InterferenceSetup, IndexSet)> {
        (2usize..=32)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    prop::collection::vec(0u8..3, n),
                    prop::collection::vec(0.0f64..2.0 * PI, n),
                    prop::collection::vec(0.0f64..2.0 * PI, n),
                    prop::collection::vec(any::<bool>(), n),
                )
            })
            .prop_filter_map("empty support", |(n, owner, pa, pb, xm)| {
                let a: IndexSet = (0..n).filter(|&j| owner[j] == 1).collect();
                let b: IndexSet = (0..n).filter(|&j| owner[j] == 2).collect();
                if a.is_empty() || b.is_empty() {
                    return None;
                }
                let x: IndexSet = (0..n).filter(|&j| xm[j]).collect();
                let phases_a = a.iter().map(|j| pa[j]).collect();
                let phases_b = b.iter().map(|j| pb[j]).collect();
                Some((InterferenceSetup::new(a, phases_a, b, phases_b, n).unwrap(), x))
            })
    }

    proptest! {
        #[test]
        fn closed_form_matches_superposition_oracle((setup, x) in arb_disjoint_setup()) {
            let mx = IndexProjector::new(x, setup.dim()).unwrap();
            let closed = mu_combined(&setup, &mx).unwrap();
            let oracle = born_probability(&superpose(&setup.state_a().unwrap(), &setup.state_b().unwrap()).unwrap(), &mx).unwrap();
            prop_assert!((closed - oracle).abs() < 1e-12);
        }

        #[test]
        fn interference_term_matches_inner_product(
            n in 2usize..20,
            seed in prop::collection::vec((any::<bool>(), any::<bool>(), any::<bool>(), 0.0f64..6.3, 0.0f64..6.3), 20),
        ) {
            let a: IndexSet = (0..n).filter(|&j| seed[j].0).collect();
            let b: IndexSet = (0..n).filter(|&j| seed[j].1).collect();
            prop_assume!(!a.is_empty() && !b.is_empty());
            let x: IndexSet = (0..n).filter(|&j| seed[j].2).collect();
            let setup = InterferenceSetup::new(
                a.clone(), a.iter().map(|j| seed[j].3).collect(),
                b.clone(), b.iter().map(|j| seed[j].4).collect(), n).unwrap();
            let mx = IndexProjector::new(x, n).unwrap();
            let direct = mx.matrix_element(setup.state_a().unwrap().amplitudes(), setup.state_b().unwrap().amplitudes()).re;
            prop_assert!((interference_term(&setup, &mx).unwrap() - direct).abs() < 1e-12);
            let bound = a.intersection(&b).intersection(mx.indices()).len() as f64 / ((a.len() * b.len()) as f64).sqrt();
            prop_assert!(interference_term(&setup, &mx).unwrap().abs() <= bound + 1e-12);
        }

        #[test]
        fn marginals_ignore_phases((setup, x) in arb_disjoint_setup(), shift in 0.0f64..6.3) {
            let mx = IndexProjector::new(x, setup.dim()).unwrap();
            let a = setup.state_a().unwrap();
            let shifted = InterferenceSetup::new(
                setup.support_a().clone(),
                setup.support_a().iter().map(|j| setup.phase_a(j).unwrap() + shift * j as f64).collect(),
                setup.support_b().clone(),
                setup.support_b().iter().map(|j| setup.phase_b(j).unwrap()).collect(),
                setup.dim(),
            ).unwrap();
            prop_assert!((born_probability(&a, &mx).unwrap() - born_probability(&shifted.state_a().unwrap(), &mx).unwrap()).abs() < 1e-12);
        }

        #[test]
        fn fit_round_trip(n_a in 1u64..60, n_b in 1u64..60, frac in prop::array::uniform4(0.0f64..1.0), t in 0.0f64..1.0) {
            let n_ab = (frac[0] * n_a.min(n_b) as f64) as u64;
            let n_abx = (frac[1] * n_ab as f64) as u64;
            let n_ax = n_abx + (frac[2] * (n_a - n_ab) as f64) as u64;
            let n_bx = n_abx + (frac[3] * (n_b - n_ab) as f64) as u64;
            let s = CooccurrenceStats { n: n_a + n_b, n_a, n_b, n_ab, n_ax, n_bx, n_abx };
            prop_assert!(s.validate().is_ok());
            let fit = fit_phases(&s, t).unwrap();
            let interval = fit.interval();
            if let PhaseFit::Feasible { theta, .. } = fit {
                prop_assert!((mu_from_phase_difference(&s, theta).unwrap() - t).abs() < 1e-12);
            } else {
                prop_assert!(t < interval.raw_lo - 1e-12 || t > interval.raw_hi + 1e-12 || (interval.raw_lo == interval.raw_hi));
            }
        }
    }
}
