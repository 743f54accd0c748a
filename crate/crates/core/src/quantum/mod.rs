//! States over the document basis, projectors and the Born rule.
//!
//! Amplitudes are kept in Cartesian form. Constructors accept moduli and
//! phases because that is how concept states are naturally specified.

mod impact;
mod projector;
mod state;

pub use impact::{classical_average, empirical_probabilities, ImpactRecord};
pub use projector::{commute, DenseProjector, IndexProjector, Projection, Projector, MAX_DENSE_DIM};
pub use state::QState;

use num_complex::Complex64;

use crate::{QwebError, Result, NORM_TOL};

/// `⟨u|v⟩`, antilinear in the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

fn check_dim(expected: usize, actual: usize) -> Result<()> {
    if expected != actual {
        return Err(QwebError::DimensionMismatch { expected, actual });
    }
    Ok(())
}

/// Born probability `⟨ψ|M|ψ⟩`, clamped to `[0, 1]`.
pub fn born_probability<P: Projection + ?Sized>(state: &QState, m: &P) -> Result<f64> {
    check_dim(m.dim(), state.dim())?;
    Ok(m.expectation(state.amplitudes()).clamp(0.0, 1.0))
}

/// Normalised superposition `(|a⟩ + |b⟩) / ‖|a⟩ + |b⟩‖`.
pub fn superpose(a: &QState, b: &QState) -> Result<QState> {
    check_dim(a.dim(), b.dim())?;
    let sum: Vec<Complex64> = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| x + y)
        .collect();
    if norm_sqr(&sum).sqrt() < NORM_TOL {
        return Err(QwebError::DestructiveAnnihilation);
    }
    QState::from_amplitudes(sum)
}

/// Projection postulate: returns `N|ψ⟩/‖N|ψ⟩‖` and `p = ⟨ψ|N|ψ⟩`.
pub fn collapse<P: Projection + ?Sized>(n: &P, state: &QState) -> Result<(QState, f64)> {
    check_dim(n.dim(), state.dim())?;
    let projected = n.apply(state.amplitudes());
    let norm = norm_sqr(&projected).sqrt();
    if norm < NORM_TOL {
        return Err(QwebError::Annihilated { norm });
    }
    let p = (norm * norm).clamp(0.0, 1.0);
    let out = projected.into_iter().map(|a| a / norm).collect();
    Ok((QState::from_normalized_unchecked(out), p))
}
