use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{inner, norm_sqr};
use crate::{IndexSet, QwebError, Result, NORM_TOL};

/// Unit vector `Σ_j r_j e^{iρ_j} |e_j⟩` over the document basis.
#[derive(Debug, Clone, PartialEq)]
pub struct QState {
    amplitudes: Vec<Complex64>,
}

impl QState {
    /// Normalises `amplitudes`. Fails for an empty or all-zero vector.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(QwebError::InvalidState("dimension must be at least 1".into()));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QwebError::InvalidState("non-finite amplitude".into()));
        }
        let norm = norm_sqr(&amplitudes).sqrt();
        if norm == 0.0 {
            return Err(QwebError::InvalidState("all amplitudes are zero".into()));
        }
        Ok(QState {
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub(crate) fn from_normalized_unchecked(amplitudes: Vec<Complex64>) -> Self {
        debug_assert!((norm_sqr(&amplitudes) - 1.0).abs() < 1e-9);
        QState { amplitudes }
    }

    /// General state from moduli `r_j ≥ 0` and phases `ρ_j`. The moduli are
    /// rescaled so that `Σ r_j² = 1`.
    pub fn general(moduli: &[f64], phases: &[f64]) -> Result<Self> {
        if moduli.len() != phases.len() {
            return Err(QwebError::DimensionMismatch {
                expected: moduli.len(),
                actual: phases.len(),
            });
        }
        if let Some(r) = moduli.iter().find(|r| !(**r >= 0.0)) {
            return Err(QwebError::InvalidState(format!("negative modulus {r}")));
        }
        Self::from_amplitudes(
            moduli
                .iter()
                .zip(phases)
                .map(|(&r, &p)| Complex64::from_polar(r, p))
                .collect(),
        )
    }

    /// `|e_j⟩` in dimension `n`.
    pub fn basis(n: usize, j: usize) -> Result<Self> {
        if j >= n {
            return Err(QwebError::InvalidArgument(format!("basis index {j} out of range 0..{n}")));
        }
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[j] = Complex64::new(1.0, 0.0);
        Ok(QState { amplitudes: v })
    }

    /// Uniform state `n^{-1/2} Σ_j e^{iρ_j}|e_j⟩`.
    pub fn uniform(n: usize, phases: &[f64]) -> Result<Self> {
        if n == 0 {
            return Err(QwebError::InvalidState("uniform state needs n >= 1".into()));
        }
        if phases.len() != n {
            return Err(QwebError::DimensionMismatch { expected: n, actual: phases.len() });
        }
        let r = 1.0 / (n as f64).sqrt();
        Ok(QState {
            amplitudes: phases.iter().map(|&p| Complex64::from_polar(r, p)).collect(),
        })
    }

    /// Uniform state with all phases zero.
    pub fn uniform_real(n: usize) -> Result<Self> {
        Self::uniform(n, &vec![0.0; n])
    }

    /// Characteristic-function state `|J|^{-1/2} Σ_{j∈J} e^{iα_j}|e_j⟩`.
    ///
    /// `phases[k]` belongs to the `k`-th smallest index of `support`.
    pub fn characteristic(support: &IndexSet, phases: &[f64], n: usize) -> Result<Self> {
        if support.is_empty() {
            return Err(QwebError::InvalidState("characteristic state needs a non-empty support".into()));
        }
        check_support(support, n)?;
        if phases.len() != support.len() {
            return Err(QwebError::DimensionMismatch { expected: support.len(), actual: phases.len() });
        }
        let r = 1.0 / (support.len() as f64).sqrt();
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for (j, &p) in support.iter().zip(phases) {
            v[j] = Complex64::from_polar(r, p);
        }
        Ok(QState { amplitudes: v })
    }

    /// Step-function state `a|χ_J⟩ + ā|χ_{J^c}⟩` with `ā = √(1-|a|²)`.
    ///
    /// `phases_in` runs over `support`, `phases_out` over its complement,
    /// both in increasing index order.
    pub fn step(
        a: Complex64,
        support: &IndexSet,
        phases_in: &[f64],
        phases_out: &[f64],
        n: usize,
    ) -> Result<Self> {
        check_support(support, n)?;
        if support.is_empty() || support.len() == n {
            return Err(QwebError::InvalidState(
                "step state needs a proper non-empty support".into(),
            ));
        }
        let a_sq = a.norm_sqr();
        if !(a_sq <= 1.0 + NORM_TOL) {
            return Err(QwebError::InvalidArgument(format!("|a| = {} exceeds 1", a.norm())));
        }
        let complement = support.complement(n);
        if phases_in.len() != support.len() {
            return Err(QwebError::DimensionMismatch { expected: support.len(), actual: phases_in.len() });
        }
        if phases_out.len() != complement.len() {
            return Err(QwebError::DimensionMismatch { expected: complement.len(), actual: phases_out.len() });
        }
        let a_bar = (1.0 - a_sq).max(0.0).sqrt();
        let r_in = 1.0 / (support.len() as f64).sqrt();
        let r_out = 1.0 / (complement.len() as f64).sqrt();
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        for (j, &p) in support.iter().zip(phases_in) {
            v[j] = a * Complex64::from_polar(r_in, p);
        }
        for (j, &p) in complement.iter().zip(phases_out) {
            v[j] = Complex64::from_polar(a_bar * r_out, p);
        }
        Self::from_amplitudes(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &QState) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(QwebError::DimensionMismatch { expected: self.dim(), actual: other.dim() });
        }
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> QState {
        let f = Complex64::from_polar(1.0, theta);
        QState {
            amplitudes: self.amplitudes.iter().map(|a| a * f).collect(),
        }
    }

    /// Euclidean distance between amplitude vectors (phase sensitive).
    pub fn distance(&self, other: &QState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Support of the state: indices with non-zero amplitude.
    pub fn support(&self) -> IndexSet {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(j, _)| j)
            .collect()
    }
}

fn check_support(support: &IndexSet, n: usize) -> Result<()> {
    match support.max() {
        Some(m) if m >= n => Err(QwebError::InvalidArgument(format!(
            "index {m} outside dimension {n}"
        ))),
        _ => Ok(()),
    }
}

/// Serialised as an array of `[re, im]` pairs.
impl Serialize for QState {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.amplitudes.iter().map(|a| [a.re, a.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QState {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        QState::from_amplitudes(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}
