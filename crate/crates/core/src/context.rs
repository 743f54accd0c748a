//! Interference plus context.
//!
//! A context projector `N` acts on the states before measurement. Assuming
//! `N` commutes with the measured projector `M`, the combined probability
//! depends only on
//!
//! ```text
//!            p_A μ_A + p_B μ_B + 2√(p_A p_B) √(μ_A μ_B) c cos φ
//! μ_AB = ──────────────────────────────────────────────────────────────────────
//!        p_A + p_B + 2√(p_A p_B) (√(μ_A μ_B) c cos φ + √(μ̄_A μ̄_B) c′ cos φ′)
//! ```
//!
//! where `p_A = ⟨ψ_A|N|ψ_A⟩`, `μ̄ = 1 − μ`, and `c e^{iγ}`, `c′ e^{iγ′}` are
//! the overlaps of the components of `ψ_A`, `ψ_B` in `MN` and `(I−M)N`.
//! [`solve_context`] finds parameters reproducing any target in `[0, 1]`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::corpus::CooccurrenceStats;
use crate::quantum::{commute, inner, norm_sqr, Projection, QState};
use crate::{QwebError, Result, NORM_TOL};

/// Residual accepted by [`solve_context`].
pub const FIT_TOL: f64 = 1e-10;

/// Denominators at or below this are treated as degenerate.
const DEGENERATE_DEN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContextParams {
    #[serde(rename = "p_A")]
    pub p_a: f64,
    #[serde(rename = "p_B")]
    pub p_b: f64,
    pub c: f64,
    pub c_prime: f64,
    pub phi: f64,
    pub phi_prime: f64,
}

impl ContextParams {
    pub fn new(p_a: f64, p_b: f64, c: f64, c_prime: f64, phi: f64, phi_prime: f64) -> Result<Self> {
        let p = ContextParams { p_a, p_b, c, c_prime, phi, phi_prime };
        p.validate()?;
        Ok(p)
    }

    /// Both states are eigenstates of the context and nothing interferes.
    pub fn eigenstate() -> Self {
        ContextParams { p_a: 1.0, p_b: 1.0, c: 0.0, c_prime: 0.0, phi: FRAC_PI_2, phi_prime: FRAC_PI_2 }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(QwebError::InvalidArgument(m));
        for (name, p) in [("p_A", self.p_a), ("p_B", self.p_b)] {
            if !(p > 0.0 && p <= 1.0) {
                return bad(format!("{name} = {p} outside (0, 1]"));
            }
        }
        for (name, c) in [("c", self.c), ("c_prime", self.c_prime)] {
            if !(0.0..=1.0).contains(&c) {
                return bad(format!("{name} = {c} outside [0, 1]"));
            }
        }
        for (name, phi) in [("phi", self.phi), ("phi_prime", self.phi_prime)] {
            if !(0.0..=TAU).contains(&phi) {
                return bad(format!("{name} = {phi} outside [0, 2π]"));
            }
        }
        Ok(())
    }
}

/// A probability together with its unclamped value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContextValue {
    pub value: f64,
    pub raw: f64,
}

impl ContextValue {
    fn from_ratio(num: f64, den: f64) -> Result<Self> {
        if !(den > DEGENERATE_DEN) {
            return Err(QwebError::DegenerateContext { denominator: den });
        }
        let raw = num / den;
        Ok(ContextValue { value: raw.clamp(0.0, 1.0), raw })
    }
}

fn check_probability(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(QwebError::InvalidArgument(format!("{name} = {v} outside [0, 1]")));
    }
    Ok(())
}

/// Numerator and denominator with `x = cos φ`, `x′ = cos φ′` passed directly.
fn ratio_parts(p: &ContextParams, mu_a: f64, mu_b: f64, x: f64, x_prime: f64) -> (f64, f64) {
    let w = 2.0 * (p.p_a * p.p_b).sqrt();
    let inside = (mu_a * mu_b).sqrt() * p.c * x;
    let outside = ((1.0 - mu_a) * (1.0 - mu_b)).sqrt() * p.c_prime * x_prime;
    let num = p.p_a * mu_a + p.p_b * mu_b + w * inside;
    let den = p.p_a + p.p_b + w * (inside + outside);
    (num, den)
}

/// Combined probability under context, from `μ_A`, `μ_B`.
pub fn mu_with_context(params: &ContextParams, mu_a: f64, mu_b: f64) -> Result<ContextValue> {
    params.validate()?;
    check_probability("mu_A", mu_a)?;
    check_probability("mu_B", mu_b)?;
    let (num, den) = ratio_parts(params, mu_a, mu_b, params.phi.cos(), params.phi_prime.cos());
    ContextValue::from_ratio(num, den)
}

/// Same quantity written with document counts, taking the post-context
/// states to be characteristic states of A and B.
pub fn mu_with_context_counts(params: &ContextParams, stats: &CooccurrenceStats) -> Result<ContextValue> {
    params.validate()?;
    if stats.n_a == 0 {
        return Err(QwebError::UndefinedFrequency("n_A"));
    }
    if stats.n_b == 0 {
        return Err(QwebError::UndefinedFrequency("n_B"));
    }
    let (n_a, n_b) = (stats.n_a as f64, stats.n_b as f64);
    let (n_ax, n_bx) = (stats.n_ax as f64, stats.n_bx as f64);
    let (n_axp, n_bxp) = (stats.n_axp() as f64, stats.n_bxp() as f64);
    let w = 2.0 * (params.p_a * params.p_b).sqrt();
    let inside = (n_ax * n_bx / (n_a * n_b)).sqrt() * params.c * params.phi.cos();
    let outside = (n_axp * n_bxp / (n_a * n_b)).sqrt() * params.c_prime * params.phi_prime.cos();
    let num = params.p_a * n_ax / n_a + params.p_b * n_bx / n_b + w * inside;
    let den = params.p_a + params.p_b + w * (inside + outside);
    ContextValue::from_ratio(num, den)
}

/// Context without interference: `(p_A μ_A + p_B μ_B) / (p_A + p_B)`.
pub fn convex_combination(p_a: f64, p_b: f64, mu_a: f64, mu_b: f64) -> Result<f64> {
    if p_a < 0.0 || p_b < 0.0 || p_a + p_b <= 0.0 {
        return Err(QwebError::InvalidArgument(format!(
            "weights p_A = {p_a}, p_B = {p_b} must be non-negative with positive sum"
        )));
    }
    Ok((p_a * mu_a + p_b * mu_b) / (p_a + p_b))
}

/// How [`solve_context`] reached its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitPath {
    /// `c = 1`, `φ = π`: vanishing numerator.
    Limit0,
    /// `c′ = 1`, `φ′ = π`: numerator equals denominator.
    Limit1,
    /// `φ = φ′ = π/2`, weights only.
    Convex,
    /// One-dimensional root find on `cos φ` or `cos φ′`.
    Bisection,
}

/// Fit report; serialises to the documented JSON shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContextFit {
    pub target: f64,
    pub params: ContextParams,
    pub achieved: f64,
    pub residual: f64,
    pub path: FitPath,
}

/// `(p_A, p_B)` with the given ratio `p_A/p_B`, scaled so the larger is 1.
fn weights_for_ratio(num: f64, den: f64) -> (f64, f64) {
    if num >= den {
        (1.0, den / num)
    } else {
        (num / den, 1.0)
    }
}

/// Bisection for an increasing-or-decreasing continuous `f` with
/// `f(lo) ≤ 0 ≤ f(hi)` or the reverse. Returns the endpoint with the smaller
/// `|f|` once the bracket is narrower than `1e-15`.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return lo;
    }
    if f_hi == 0.0 {
        return hi;
    }
    for _ in 0..200 {
        if hi - lo <= 1e-15 {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Finds context parameters whose combined probability equals `target`.
///
/// Targets between `μ_A` and `μ_B` use context weights alone. The extremes 0
/// and 1 have exact constructions. Below `min(μ_A, μ_B)` the solver fixes
/// `c = 1`, `φ′ = π/2` and the zero-reaching weight ratio, then bisects on
/// `cos φ ∈ [−1, 0]`. Above `max(μ_A, μ_B)` it fixes `c′ = 1`, `φ = π/2` and
/// the one-reaching ratio and bisects on `cos φ′ ∈ [−1, 0]`.
pub fn solve_context(mu_a: f64, mu_b: f64, target: f64) -> Result<ContextFit> {
    check_probability("mu_A", mu_a)?;
    check_probability("mu_B", mu_b)?;
    check_probability("target", target)?;
    let (lo, hi) = (mu_a.min(mu_b), mu_a.max(mu_b));
    let (bar_a, bar_b) = (1.0 - mu_a, 1.0 - mu_b);

    let candidate: Option<(ContextParams, FitPath)> = if lo <= target && target <= hi && (lo == hi || (lo < target && target < hi)) {
        let (p_a, p_b) = if lo == hi {
            (1.0, 1.0)
        } else {
            weights_for_ratio((mu_b - target).abs(), (target - mu_a).abs())
        };
        Some((ContextParams { p_a, p_b, c: 0.0, c_prime: 0.0, phi: FRAC_PI_2, phi_prime: FRAC_PI_2 }, FitPath::Convex))
    } else if target == 0.0 && lo > 0.0 {
        let (p_a, p_b) = weights_for_ratio(mu_b, mu_a);
        Some((ContextParams { p_a, p_b, c: 1.0, c_prime: 1.0, phi: PI, phi_prime: FRAC_PI_2 }, FitPath::Limit0))
    } else if target == 1.0 && hi < 1.0 {
        let (p_a, p_b) = weights_for_ratio(bar_b, bar_a);
        Some((ContextParams { p_a, p_b, c: 1.0, c_prime: 1.0, phi: FRAC_PI_2, phi_prime: PI }, FitPath::Limit1))
    } else if target <= lo && lo > 0.0 && lo < 1.0 {
        let (p_a, p_b) = weights_for_ratio(mu_b, mu_a);
        let base = ContextParams { p_a, p_b, c: 1.0, c_prime: 1.0, phi: 0.0, phi_prime: FRAC_PI_2 };
        let f = |x: f64| {
            let (num, den) = ratio_parts(&base, mu_a, mu_b, x, 0.0);
            num / den - target
        };
        let x = bisect(f, -1.0, 0.0);
        Some((ContextParams { phi: x.acos(), ..base }, FitPath::Bisection))
    } else if target >= hi && hi < 1.0 && hi > 0.0 {
        let (p_a, p_b) = weights_for_ratio(bar_b, bar_a);
        let base = ContextParams { p_a, p_b, c: 1.0, c_prime: 1.0, phi: FRAC_PI_2, phi_prime: 0.0 };
        let f = |xp: f64| {
            let (num, den) = ratio_parts(&base, mu_a, mu_b, 0.0, xp);
            num / den - target
        };
        let xp = bisect(f, -1.0, 0.0);
        Some((ContextParams { phi_prime: xp.acos(), ..base }, FitPath::Bisection))
    } else {
        None
    };

    let degenerate = || {
        QwebError::BoundaryDegeneracy(format!(
            "no context parameters reach {target} from mu_A = {mu_a}, mu_B = {mu_b}"
        ))
    };
    let (params, path) = candidate.ok_or_else(degenerate)?;
    let achieved = match mu_with_context(&params, mu_a, mu_b) {
        Ok(v) => v.raw,
        Err(QwebError::DegenerateContext { .. }) => return Err(degenerate()),
        Err(e) => return Err(e),
    };
    let residual = (achieved - target).abs();
    if !(residual <= FIT_TOL) {
        return Err(degenerate());
    }
    Ok(ContextFit { target, params, achieved, residual, path })
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if let Some(&d) = dims.iter().find(|&&d| d != dims[0]) {
        return Err(QwebError::DimensionMismatch { expected: dims[0], actual: d });
    }
    Ok(())
}

/// Combined probability of `(ψ_A + ψ_B)` after the context `N`, measured
/// with `M`, expanded term by term:
/// `[p_A μ_A + p_B μ_B + 2Re⟨ψ_A|NMN|ψ_B⟩] / [p_A + p_B + 2Re⟨ψ_A|N|ψ_B⟩]`.
pub fn general_context_probability<N, M>(a: &QState, b: &QState, n: &N, m: &M) -> Result<f64>
where
    N: Projection + ?Sized,
    M: Projection + ?Sized,
{
    check_dims(&[a.dim(), b.dim(), n.dim(), m.dim()])?;
    let na = n.apply(a.amplitudes());
    let nb = n.apply(b.amplitudes());
    let p_a = norm_sqr(&na);
    let p_b = norm_sqr(&nb);
    let pmu_a = m.expectation(&na);
    let pmu_b = m.expectation(&nb);
    let cross = m.matrix_element(&na, &nb).re;
    let overlap = n.matrix_element(a.amplitudes(), b.amplitudes()).re;
    let den = p_a + p_b + 2.0 * overlap;
    if den < NORM_TOL * NORM_TOL {
        return Err(QwebError::Annihilated { norm: den.max(0.0).sqrt() });
    }
    Ok(((pmu_a + pmu_b + 2.0 * cross) / den).clamp(0.0, 1.0))
}

/// Parameters of the closed form extracted from explicit states and
/// commuting projectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContextCoordinates {
    pub params: ContextParams,
    pub mu_a: f64,
    pub mu_b: f64,
}

/// Decomposes `ψ_A`, `ψ_B` along `P₁ = MN`, `P₂ = (I−M)N` and reads off
/// `p_A, p_B, c, c′, φ, φ′` together with the post-context `μ_A`, `μ_B`.
pub fn context_coordinates<N, M>(a: &QState, b: &QState, n: &N, m: &M) -> Result<ContextCoordinates>
where
    N: Projection + ?Sized,
    M: Projection + ?Sized,
{
    check_dims(&[a.dim(), b.dim(), n.dim(), m.dim()])?;
    if !commute(n, m) {
        return Err(QwebError::NonCommuting);
    }
    let split = |s: &QState| {
        let ns = n.apply(s.amplitudes());
        let p1 = m.apply(&ns);
        let p2: Vec<_> = ns.iter().zip(&p1).map(|(x, y)| x - y).collect();
        (p1, p2)
    };
    let (a1, a2) = split(a);
    let (b1, b2) = split(b);
    let (ra, ra2) = (norm_sqr(&a1).sqrt(), norm_sqr(&a2).sqrt());
    let (rb, rb2) = (norm_sqr(&b1).sqrt(), norm_sqr(&b2).sqrt());
    let p_a = ra * ra + ra2 * ra2;
    let p_b = rb * rb + rb2 * rb2;
    if p_a < NORM_TOL || p_b < NORM_TOL {
        return Err(QwebError::Annihilated { norm: p_a.min(p_b).sqrt() });
    }
    let polar = |z: num_complex::Complex64, scale: f64| {
        if scale > 0.0 {
            ((z.norm() / scale).min(1.0), z.arg().rem_euclid(TAU))
        } else {
            (0.0, FRAC_PI_2)
        }
    };
    let (c, phi) = polar(inner(&a1, &b1), ra * rb);
    let (c_prime, phi_prime) = polar(inner(&a2, &b2), ra2 * rb2);
    Ok(ContextCoordinates {
        params: ContextParams { p_a: p_a.min(1.0), p_b: p_b.min(1.0), c, c_prime, phi, phi_prime },
        mu_a: (ra * ra / p_a).clamp(0.0, 1.0),
        mu_b: (rb * rb / p_b).clamp(0.0, 1.0),
    })
}
