//! Meaning content of a document corpus modelled as a complex state space
//! over its documents.
//!
//! Every document is a basis state `|e_j⟩`. Concepts are states over that
//! basis (usually uniform over the documents that mention the concept), and
//! the probability that a concept is "well represented" by the documents
//! about some other term is a Born-rule expectation `⟨ψ|M|ψ⟩`.
//!
//! The crate is organised bottom-up:
//!
//! - [`corpus`]: tokenisation, inverted index and co-occurrence counts.
//! - [`quantum`]: states, projectors, the Born rule, collapse and superposition.
//! - [`interference`]: combined-concept probabilities and the interference interval.
//! - [`fock`]: two-sector conjunction/disjunction probabilities.
//! - [`context`]: the interference-plus-context parametrisation and its solver.
//! - [`bond`]: conditional probabilities and meaning bonds.
//! - [`analysis`] and [`replicate`]: end-to-end reports used by the CLI.

// `!(x > tol)` deliberately rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod bond;
pub mod context;
pub mod corpus;
mod error;
pub mod fock;
mod index_set;
pub mod interference;
pub mod quantum;
pub mod replicate;

pub use error::{QwebError, Result};
pub use index_set::IndexSet;
pub use num_complex::Complex64;

/// Tolerance used when checking that a state has unit norm.
pub const NORM_TOL: f64 = 1e-12;

/// Tolerance used for matrix identities (hermiticity, idempotence, commutation).
pub const MATRIX_TOL: f64 = 1e-10;

/// Rounds `x` to `digits` significant decimal digits.
pub fn round_significant(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 || digits == 0 {
        return x;
    }
    format!("{:.*e}", digits - 1, x).parse().unwrap_or(x)
}

#[cfg(test)]
mod tests {
    use super::round_significant;

    #[test]
    fn significant_digits() {
        assert_eq!(round_significant(0.47928932188134524, 10), 0.4792893219);
        assert_eq!(round_significant(2.356194490192345, 10), 2.356194490);
        assert_eq!(round_significant(-1234.56789, 3), -1230.0);
        assert_eq!(round_significant(0.0, 10), 0.0);
        assert!(round_significant(f64::NAN, 10).is_nan());
    }
}
