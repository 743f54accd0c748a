//! Reference values and property checks, reproduced at desk scale.
//!
//! [`run_all`] evaluates the eleven replication criteria with fixed seeds so
//! its output is identical across runs. The `tolerance` argument governs the
//! solver residual and oracle-equivalence checks; all other rows use their
//! own fixed tolerances.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bond::{conditional_probability, meaning_bond, uniform_bond};
use crate::context::{context_coordinates, general_context_probability, mu_with_context, solve_context, ContextParams};
use crate::corpus::{CooccurrenceStats, Corpus, Tokenizer};
use crate::fock::{fock_range, LogicalMode};
use crate::interference::{
    fit_phases, interference_interval, mu_combined, mu_from_phase_difference, mu_nonorthogonal,
    realize_phase_difference, InterferenceSetup, PhaseFit,
};
use crate::quantum::{
    born_probability, collapse, empirical_probabilities, superpose, DenseProjector, ImpactRecord, IndexProjector,
    Projector, QState,
};
use crate::{Complex64, IndexSet, QwebError, Result};

/// Default tolerance for residual and oracle checks.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Random instances per oracle pair.
pub const ORACLE_INSTANCES: usize = 1000;

/// Impact counts of the 21-cell detection screen, row by row. Cells 1, 2, 4
/// and the central column are the reference values; the remaining cells are
/// filled consistently with a total of 54.
pub const SCREEN_COUNTS: [u64; 21] = [2, 2, 1, 7, 1, 2, 3, 3, 1, 2, 8, 2, 1, 3, 3, 3, 4, 3, 2, 1, 0];

/// Zero-based cells of the central screen column.
pub const SCREEN_CENTRAL: [usize; 3] = [3, 10, 17];

/// Counts for the combination with a reachable target.
pub fn x_case() -> CooccurrenceStats {
    CooccurrenceStats { n: 140, n_a: 100, n_b: 50, n_ab: 10, n_ax: 80, n_bx: 15, n_abx: 5 }
}

/// Counts for the combination whose target lies outside the interval.
pub fn y_case() -> CooccurrenceStats {
    CooccurrenceStats { n: 140, n_a: 100, n_b: 50, n_ab: 10, n_ax: 10, n_bx: 10, n_abx: 5 }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

type Check = fn(f64) -> Result<(bool, String)>;

const CRITERIA: [(u8, &str, Check); 11] = [
    (1, "x-case interval", x_case_interval),
    (2, "x-case phase fit", x_case_fit),
    (3, "y-case infeasible", y_case_infeasible),
    (4, "fock ranges", fock_ranges),
    (5, "context solver", context_solver),
    (6, "impact screen", impact_screen),
    (7, "uniform born", uniform_born),
    (8, "oracle equivalence", oracle_equivalence),
    (9, "monotonicity grid", monotonicity_grid),
    (10, "meaning bonds", meaning_bonds),
    (11, "range completeness", range_completeness),
];

/// Evaluates all criteria in order.
pub fn run_all(tolerance: f64) -> Vec<CriterionResult> {
    CRITERIA
        .iter()
        .map(|&(id, name, check)| {
            let (passed, detail) = check(tolerance).unwrap_or_else(|e| (false, format!("error: {e}")));
            CriterionResult { id, name: name.to_string(), passed, detail }
        })
        .collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn sig(x: f64) -> f64 {
    crate::round_significant(x, 10)
}

fn x_case_interval(_: f64) -> Result<(bool, String)> {
    let s = x_case();
    let iv = interference_interval(&s)?;
    let ok = close(s.mu_a()?, 0.8, 1e-12)
        && close(s.mu_b()?, 0.3, 1e-12)
        && close(iv.center(), 0.55, 1e-12)
        && close(iv.half_width(), 5.0 / 5000f64.sqrt(), 1e-9)
        && close(iv.lo, 0.4792893219, 1e-9)
        && close(iv.hi, 0.6207106781, 1e-9);
    Ok((
        ok,
        format!(
            "mu_A={} mu_B={} avg={} interval=[{}, {}] expected [0.4792893219, 0.6207106781]",
            sig(s.mu_a()?),
            sig(s.mu_b()?),
            sig(iv.center()),
            sig(iv.lo),
            sig(iv.hi)
        ),
    ))
}

fn x_case_fit(_: f64) -> Result<(bool, String)> {
    let s = x_case();
    let PhaseFit::Feasible { theta, .. } = fit_phases(&s, 0.5)? else {
        return Ok((false, "target 0.5 reported infeasible".into()));
    };
    let achieved = mu_from_phase_difference(&s, theta)?;
    // explicit documents with these counts, evaluated by superposition
    let a: IndexSet = (0..100).collect();
    let b: IndexSet = (90..140).collect();
    let x: IndexSet = (15..95).chain(100..110).collect();
    let setup = realize_phase_difference(&a, &b, &x, 140, theta)?;
    let m_x = IndexProjector::new(x, 140)?;
    let explicit = born_probability(&superpose(&setup.state_a()?, &setup.state_b()?)?, &m_x)?;
    let ok = close(achieved, 0.5, 1e-12) && close(explicit, 0.5, 1e-12) && close(theta, 3.0 * PI / 4.0, 1e-9);
    Ok((
        ok,
        format!("theta={} expected {} achieved={} explicit={}", sig(theta), sig(3.0 * PI / 4.0), sig(achieved), sig(explicit)),
    ))
}

fn y_case_infeasible(_: f64) -> Result<(bool, String)> {
    let s = y_case();
    let iv = interference_interval(&s)?;
    let fit = fit_phases(&s, 0.5)?;
    let ok = close(s.mu_a()?, 0.1, 1e-12)
        && close(s.mu_b()?, 0.2, 1e-12)
        && close(iv.lo, 0.0792893219, 1e-9)
        && close(iv.hi, 0.2207106781, 1e-9)
        && !fit.is_feasible();
    Ok((
        ok,
        format!("interval=[{}, {}] expected [0.0792893219, 0.2207106781] feasible={}", sig(iv.lo), sig(iv.hi), fit.is_feasible()),
    ))
}

fn fock_ranges(_: f64) -> Result<(bool, String)> {
    let s = y_case();
    let and = fock_range(&s, LogicalMode::Conjunction)?;
    let or = fock_range(&s, LogicalMode::Disjunction)?;
    let ok = close(and.lo, 0.02, 1e-12)
        && close(and.hi, 0.2207106781, 1e-9)
        && close(or.lo, 0.0792893219, 1e-9)
        && close(or.hi, 0.28, 1e-12)
        && !and.contains(0.5)
        && !or.contains(0.5);
    Ok((
        ok,
        format!("and=[{}, {}] or=[{}, {}] expected [0.02, 0.2207106781] [0.0792893219, 0.28]", sig(and.lo), sig(and.hi), sig(or.lo), sig(or.hi)),
    ))
}

fn context_solver(tol: f64) -> Result<(bool, String)> {
    let fit = solve_context(0.1, 0.2, 0.5)?;
    let check = mu_with_context(&fit.params, 0.1, 0.2)?.raw;
    let zero = mu_with_context(&ContextParams::new(1.0, 0.5, 1.0, 1.0, PI, FRAC_PI_2)?, 0.1, 0.2)?.raw;
    let one = mu_with_context(&ContextParams::new(0.8, 0.9, 1.0, 1.0, FRAC_PI_2, PI)?, 0.1, 0.2)?.raw;
    let residual = (check - 0.5).abs();
    let ok = residual <= tol && close(zero, 0.0, 1e-12) && close(one, 1.0, 1e-12);
    Ok((ok, format!("residual={residual:.9e} (tolerance {tol:.9e}) zero-limit={zero:.9e} one-limit={}", sig(one))))
}

fn impact_screen(_: f64) -> Result<(bool, String)> {
    let rec = ImpactRecord::new(SCREEN_COUNTS.to_vec());
    let p = empirical_probabilities(&rec)?;
    let central = rec.count_in(&SCREEN_CENTRAL.into_iter().collect()) as f64 / rec.total() as f64;
    let ok = rec.total() == 54 && p[0] == 2.0 / 54.0 && p[1] == 2.0 / 54.0 && p[3] == 7.0 / 54.0 && central == 1.0 / 3.0;
    Ok((ok, format!("m={} mu(C1)={} mu(C4)={} central={}", rec.total(), sig(p[0]), sig(p[3]), sig(central))))
}

fn uniform_born(_: f64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for n in 1..=64 {
        let phases: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
        let psi = QState::uniform(n, &phases)?;
        for i in 0..n {
            let p = born_probability(&psi, &IndexProjector::new(IndexSet::from(vec![i]), n)?)?;
            worst = worst.max((p - 1.0 / n as f64).abs());
        }
        let support: IndexSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if support.is_empty() {
            continue;
        }
        let local_phases: Vec<f64> = (0..support.len()).map(|_| rng.gen_range(0.0..TAU)).collect();
        let chi = QState::characteristic(&support, &local_phases, n)?;
        for i in 0..n {
            let p = born_probability(&chi, &IndexProjector::new(IndexSet::from(vec![i]), n)?)?;
            let expected = if support.contains(i) { 1.0 / support.len() as f64 } else { 0.0 };
            worst = worst.max((p - expected).abs());
        }
    }
    Ok((worst <= 1e-12, format!("max deviation {worst:.9e} over n=1..64")))
}

fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Result<QState> {
    let r: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
    let p: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
    QState::general(&r, &p)
}

fn random_set(rng: &mut ChaCha8Rng, n: usize, p: f64) -> IndexSet {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

fn random_projector(rng: &mut ChaCha8Rng, n: usize) -> Result<Projector> {
    if rng.gen_bool(0.5) {
        Ok(IndexProjector::new(random_set(rng, n, 0.5), n)?.into())
    } else {
        let rank = rng.gen_range(1..=n);
        Ok(DenseProjector::random(n, rank, rng)?.into())
    }
}

/// Two projectors diagonal in a common random orthonormal basis.
fn commuting_pair(rng: &mut ChaCha8Rng, n: usize) -> Result<(Projector, Projector)> {
    if rng.gen_bool(0.5) {
        return Ok((
            IndexProjector::new(random_set(rng, n, 0.6), n)?.into(),
            IndexProjector::new(random_set(rng, n, 0.5), n)?.into(),
        ));
    }
    let raw = DMatrix::from_fn(n, n, |_, _| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
    let q = raw.qr().q();
    let span = |cols: &IndexSet| -> Result<Projector> {
        let vectors: Vec<Vec<Complex64>> = cols.iter().map(|c| q.column(c).iter().copied().collect()).collect();
        Ok(DenseProjector::from_span(&vectors, n)?.into())
    };
    Ok((span(&random_set(rng, n, 0.6))?, span(&random_set(rng, n, 0.5))?))
}

/// Orthogonal characteristic states with a common phase difference on
/// `J_AB,X`, then scrambled by per-document phases shared by A and B.
fn random_orthogonal_setup(rng: &mut ChaCha8Rng) -> Option<(InterferenceSetup, IndexProjector, f64)> {
    let n = rng.gen_range(2..=32);
    let a = random_set(rng, n, 0.5);
    let b = random_set(rng, n, 0.5);
    let x = random_set(rng, n, 0.35);
    if a.is_empty() || b.is_empty() {
        return None;
    }
    let theta = rng.gen_range(0.0..TAU);
    let base = realize_phase_difference(&a, &b, &x, n, theta).ok()?;
    let gamma: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
    let pa = a.iter().map(|j| base.phase_a(j).unwrap() + gamma[j]).collect();
    let pb = b.iter().map(|j| base.phase_b(j).unwrap() + gamma[j]).collect();
    let setup = InterferenceSetup::new(a, pa, b, pb, n).ok()?;
    Some((setup, IndexProjector::new(x, n).ok()?, theta))
}

fn stats_of(setup: &InterferenceSetup, x: &IndexProjector) -> CooccurrenceStats {
    let (a, b, x) = (setup.support_a(), setup.support_b(), x.indices());
    let ab = a.intersection(b);
    CooccurrenceStats {
        n: setup.dim() as u64,
        n_a: a.len() as u64,
        n_b: b.len() as u64,
        n_ab: ab.len() as u64,
        n_ax: a.intersection(x).len() as u64,
        n_bx: b.intersection(x).len() as u64,
        n_abx: ab.intersection(x).len() as u64,
    }
}

fn oracle_equivalence(tol: f64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = [0.0f64; 4];
    let mut done = [0usize; 4];

    while done[0] < ORACLE_INSTANCES {
        let Some((setup, m_x, theta)) = random_orthogonal_setup(&mut rng) else { continue };
        let closed = mu_combined(&setup, &m_x)?;
        let counts = mu_from_phase_difference(&stats_of(&setup, &m_x), theta)?;
        let oracle = born_probability(&superpose(&setup.state_a()?, &setup.state_b()?)?, &m_x)?;
        worst[0] = worst[0].max((closed - oracle).abs()).max((counts - oracle).abs());
        done[0] += 1;
    }

    while done[1] < ORACLE_INSTANCES {
        let n = rng.gen_range(1..=32);
        let (a, b) = (random_state(&mut rng, n)?, random_state(&mut rng, n)?);
        let m = random_projector(&mut rng, n)?;
        let Ok(sum) = superpose(&a, &b) else { continue };
        let oracle = born_probability(&sum, &m)?;
        worst[1] = worst[1].max((mu_nonorthogonal(&a, &b, &m)? - oracle).abs());
        done[1] += 1;
    }

    while done[2] < ORACLE_INSTANCES {
        let n = rng.gen_range(1..=32);
        let (a, b) = (random_state(&mut rng, n)?, random_state(&mut rng, n)?);
        let (ctx, m) = commuting_pair(&mut rng, n)?;
        let Ok(sum) = superpose(&a, &b) else { continue };
        let Ok((post, _)) = collapse(&ctx, &sum) else { continue };
        let Ok(coords) = context_coordinates(&a, &b, &ctx, &m) else { continue };
        let Ok(closed) = mu_with_context(&coords.params, coords.mu_a, coords.mu_b) else { continue };
        let oracle = born_probability(&post, &m)?;
        let expanded = general_context_probability(&a, &b, &ctx, &m)?;
        worst[2] = worst[2].max((closed.raw - expanded).abs()).max((expanded - oracle).abs());
        done[2] += 1;
    }

    while done[3] < ORACLE_INSTANCES {
        let n = rng.gen_range(1..=32);
        let psi = random_state(&mut rng, n)?;
        let (m_a, m_b) = (random_projector(&mut rng, n)?, random_projector(&mut rng, n)?);
        let Ok((post, _)) = collapse(&m_a, &psi) else { continue };
        let Ok(cond) = conditional_probability(&psi, &m_a, &m_b) else { continue };
        worst[3] = worst[3].max((cond - born_probability(&post, &m_b)?).abs());
        done[3] += 1;
    }

    let ok = worst.iter().all(|&w| w <= tol);
    Ok((
        ok,
        format!(
            "{} instances each; max deviation combined={:.9e} nonorthogonal={:.9e} context={:.9e} conditional={:.9e} (tolerance {tol:.9e})",
            ORACLE_INSTANCES, worst[0], worst[1], worst[2], worst[3]
        ),
    ))
}

fn monotonicity_grid(_: f64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let grid: Vec<f64> = (0..21).map(|k| -1.0 + k as f64 / 10.0).collect();
    let mut violations = 0usize;
    for _ in 0..100 {
        let p = ContextParams::new(
            rng.gen_range(0.05..=1.0),
            rng.gen_range(0.05..=1.0),
            rng.gen_range(0.0..=1.0),
            rng.gen_range(0.0..=1.0),
            0.0,
            0.0,
        )?;
        let (mu_a, mu_b) = (rng.gen_range(0.01..0.99), rng.gen_range(0.01..0.99));
        let eval = |x: f64, xp: f64| -> Result<f64> {
            let q = ContextParams { phi: x.clamp(-1.0, 1.0).acos(), phi_prime: xp.clamp(-1.0, 1.0).acos(), ..p };
            Ok(mu_with_context(&q, mu_a, mu_b)?.raw)
        };
        for &x in &grid {
            for w in grid.windows(2) {
                if eval(x, w[1])? > eval(x, w[0])? + 1e-12 {
                    violations += 1;
                }
            }
        }
        for xp in [-1.0, 1.0] {
            for w in grid.windows(2) {
                if eval(w[1], xp)? < eval(w[0], xp)? - 1e-12 {
                    violations += 1;
                }
            }
        }
    }
    Ok((violations == 0, format!("{violations} violations over 100 draws on a 21x21 grid")))
}

/// Corpus of `n` documents where `alpha` occurs in `n_a`, `beta` in `n_b`,
/// and both in `n_ab`.
pub fn planted_corpus(n: usize, n_a: usize, n_b: usize, n_ab: usize) -> Result<Corpus> {
    if n_ab > n_a.min(n_b) || n_a + n_b - n_ab > n {
        return Err(QwebError::InvalidStats(format!("cannot plant {n_a}/{n_b}/{n_ab} in {n} documents")));
    }
    let b_start = n_a - n_ab;
    let texts = (0..n).map(|i| {
        let mut words = vec![format!("filler{}", i % 3)];
        if i < n_a {
            words.push("alpha".into());
        }
        if (b_start..b_start + n_b).contains(&i) {
            words.push("beta".into());
        }
        (format!("doc{i:03}"), words.join(" "))
    });
    Corpus::from_texts(texts, Tokenizer::default())
}

fn meaning_bonds(_: f64) -> Result<(bool, String)> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut self_ok = true;
    let mut tried = 0;
    while tried < 200 {
        let n = rng.gen_range(1..=16);
        let psi = random_state(&mut rng, n)?;
        let m = random_projector(&mut rng, n)?;
        let Ok(rep) = meaning_bond(&psi, &m, &m) else { continue };
        self_ok &= (rep.bond * rep.p_b - 1.0).abs() <= 1e-12 && rep.bond >= 1.0 - 1e-12;
        tried += 1;
    }

    let mut planted_worst: f64 = 0.0;
    for &(n, n_a, n_b, n_ab) in &[(10, 4, 5, 2), (10, 4, 5, 0), (20, 7, 7, 7), (30, 12, 9, 5), (64, 40, 30, 20), (5, 5, 5, 5)] {
        let corpus = planted_corpus(n, n_a, n_b, n_ab)?;
        let stats = corpus.counts("alpha", "beta", "beta");
        let count = uniform_bond(&stats)?;
        let psi = QState::uniform_real(corpus.n())?;
        let path = meaning_bond(
            &psi,
            &IndexProjector::new(corpus.posting("alpha"), n)?,
            &IndexProjector::new(corpus.posting("beta"), n)?,
        )?
        .bond;
        let planted = n as f64 * n_ab as f64 / (n_a * n_b) as f64;
        planted_worst = planted_worst.max((count - path).abs()).max((count - planted).abs());
    }

    let s = std::f64::consts::FRAC_1_SQRT_2;
    let plus = DenseProjector::from_span(&[vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)]], 2)?;
    let zero = IndexProjector::new(IndexSet::from(vec![0]), 2)?;
    let psi = QState::general(&[0.6f64.cos(), 0.6f64.sin()], &[0.0, 0.0])?;
    let b_given_a = meaning_bond(&psi, &zero, &plus)?.bond;
    let a_given_b = meaning_bond(&psi, &plus, &zero)?.bond;
    let asymmetric = (b_given_a - a_given_b).abs() > 1e-3;

    Ok((
        self_ok && planted_worst <= 1e-12 && asymmetric,
        format!(
            "self-bond ok={self_ok} planted max deviation={planted_worst:.9e} bond(B|A)={} bond(A|B)={}",
            sig(b_given_a),
            sig(a_given_b)
        ),
    ))
}

fn range_completeness(tol: f64) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    let mut failures = 0usize;
    for i in 1..=9 {
        for j in 1..=9 {
            let (mu_a, mu_b) = (i as f64 / 10.0, j as f64 / 10.0);
            for k in 0..=20 {
                let t = k as f64 / 20.0;
                let achieved = solve_context(mu_a, mu_b, t)
                    .and_then(|fit| mu_with_context(&fit.params, mu_a, mu_b))
                    .map(|v| v.raw);
                match achieved {
                    Ok(v) => {
                        let r = (v - t).abs();
                        worst = worst.max(r);
                        if r > tol {
                            failures += 1;
                        }
                    }
                    Err(_) => failures += 1,
                }
            }
        }
    }
    Ok((failures == 0, format!("{failures} of 1701 cells failed; max residual {worst:.9e} (tolerance {tol:.9e})")))
}
