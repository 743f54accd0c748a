//! Meaning bonds between concepts.
//!
//! Conditioning `ψ` on `A` means collapsing it with `M_A`. The bond of `B`
//! towards `A` is `p_ψ(B|A) / p_ψ(B)`. A bond above 1 is attractive, below 1
//! repulsive.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::corpus::{CooccurrenceStats, Corpus};
use crate::quantum::{born_probability, collapse, inner, Projection, QState};
use crate::{QwebError, Result};

/// `|bond − 1|` at or below this is classified neutral.
pub const NEUTRAL_BAND: f64 = 1e-9;

const NULL_EVENT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BondClass {
    Attractive,
    Repulsive,
    Neutral,
}

impl BondClass {
    pub fn of(bond: f64) -> Self {
        if (bond - 1.0).abs() <= NEUTRAL_BAND {
            BondClass::Neutral
        } else if bond > 1.0 {
            BondClass::Attractive
        } else {
            BondClass::Repulsive
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            BondClass::Attractive => "attractive",
            BondClass::Repulsive => "repulsive",
            BondClass::Neutral => "neutral",
        }
    }
}

impl fmt::Display for BondClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BondReport {
    #[serde(rename = "p_B")]
    pub p_b: f64,
    #[serde(rename = "p_B_given_A")]
    pub p_b_given_a: f64,
    pub bond: f64,
    pub classification: BondClass,
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if let Some(&d) = dims.iter().find(|&&d| d != dims[0]) {
        return Err(QwebError::DimensionMismatch { expected: dims[0], actual: d });
    }
    Ok(())
}

/// `⟨ψ|M_A M_B M_A|ψ⟩ / ⟨ψ|M_A|ψ⟩`.
pub fn conditional_probability<A, B>(state: &QState, m_a: &A, m_b: &B) -> Result<f64>
where
    A: Projection + ?Sized,
    B: Projection + ?Sized,
{
    check_dims(&[state.dim(), m_a.dim(), m_b.dim()])?;
    let v = m_a.apply(state.amplitudes());
    let p_a = inner(state.amplitudes(), &v).re;
    if !(p_a > NULL_EVENT) {
        return Err(QwebError::NullConditioning(p_a));
    }
    Ok((m_b.expectation(&v) / p_a).clamp(0.0, 1.0))
}

pub fn meaning_bond<A, B>(state: &QState, m_a: &A, m_b: &B) -> Result<BondReport>
where
    A: Projection + ?Sized,
    B: Projection + ?Sized,
{
    let p_b_given_a = conditional_probability(state, m_a, m_b)?;
    let p_b = born_probability(state, m_b)?;
    if !(p_b > NULL_EVENT) {
        return Err(QwebError::NullProbability(p_b));
    }
    let bond = p_b_given_a / p_b;
    Ok(BondReport { p_b, p_b_given_a, bond, classification: BondClass::of(bond) })
}

/// Bond for the uniform state and index projectors: `n·n_AB / (n_A n_B)`.
pub fn uniform_bond(stats: &CooccurrenceStats) -> Result<f64> {
    if stats.n_a == 0 {
        return Err(QwebError::UndefinedFrequency("n_A"));
    }
    if stats.n_b == 0 {
        return Err(QwebError::UndefinedFrequency("n_B"));
    }
    Ok(stats.n as f64 * stats.n_ab as f64 / (stats.n_a as f64 * stats.n_b as f64))
}

/// Component `j` of the state conditioned on `A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCoefficient {
    pub modulus: f64,
    pub phase: f64,
    /// `√(p_ψ(W_j) · M_ψ(W_j|A))`, or `None` when `p_ψ(W_j) = 0` and the
    /// bond is undefined.
    pub bond_form: Option<f64>,
}

/// `⟨e_j|ψ_A⟩` with `ψ_A` the state collapsed on `M_A`.
pub fn expansion_coefficient<A>(state: &QState, m_a: &A, j: usize) -> Result<ExpansionCoefficient>
where
    A: Projection + ?Sized,
{
    check_dims(&[state.dim(), m_a.dim()])?;
    if j >= state.dim() {
        return Err(QwebError::InvalidArgument(format!("index {j} outside dimension {}", state.dim())));
    }
    let (psi_a, p_a) = match collapse(m_a, state) {
        Ok(r) => r,
        Err(QwebError::Annihilated { norm }) => return Err(QwebError::NullConditioning(norm * norm)),
        Err(e) => return Err(e),
    };
    if !(p_a > NULL_EVENT) {
        return Err(QwebError::NullConditioning(p_a));
    }
    let amp: Complex64 = psi_a.amplitudes()[j];
    let p_w = state.amplitudes()[j].norm_sqr();
    let bond_form = if p_w > 0.0 {
        // W_j projects on e_j
        let p_w_given_a = amp.norm_sqr();
        Some((p_w * (p_w_given_a / p_w)).sqrt())
    } else {
        None
    };
    Ok(ExpansionCoefficient { modulus: amp.norm(), phase: amp.arg(), bond_form })
}

/// Row of a bond matrix export. `bond` is `None` when a term is absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BondRow {
    #[serde(rename = "A")]
    pub a: String,
    #[serde(rename = "B")]
    pub b: String,
    pub bond: Option<f64>,
    pub class: String,
}

/// Uniform-state bonds for every unordered pair of `terms`, sorted by
/// `(A, B)`. Repeating a term yields its self pair.
pub fn bond_matrix<S: AsRef<str>>(corpus: &Corpus, terms: &[S]) -> Vec<BondRow> {
    let pairs: Vec<(usize, usize)> =
        (0..terms.len()).flat_map(|i| (i + 1..terms.len()).map(move |j| (i, j))).collect();
    let mut rows: Vec<BondRow> = pairs
        .iter()
        .map(|&(i, j)| {
            let (mut a, mut b) = (terms[i].as_ref(), terms[j].as_ref());
            if b < a {
                std::mem::swap(&mut a, &mut b);
            }
            let stats = corpus.counts(a, b, b);
            let bond = uniform_bond(&stats).ok();
            let class = bond.map_or("undefined", |v| BondClass::of(v).as_str()).to_string();
            BondRow { a: a.to_string(), b: b.to_string(), bond, class }
        })
        .collect();
    rows.sort_by(|x, y| (&x.a, &x.b).cmp(&(&y.a, &y.b)));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Tokenizer;
    use crate::quantum::{DenseProjector, IndexProjector};
    use crate::IndexSet;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn proj(ix: impl IntoIterator<Item = usize>, n: usize) -> IndexProjector {
        IndexProjector::new(ix.into_iter().collect(), n).unwrap()
    }

    #[test]
    fn idempotent_conditioning() {
        let psi = QState::uniform_real(6).unwrap();
        let m = proj([1, 2, 4], 6);
        assert!((conditional_probability(&psi, &m, &m).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_conditioning_is_a_count_ratio() {
        let psi = QState::uniform_real(10).unwrap();
        let (a, b) = (proj(0..4, 10), proj(2..7, 10));
        assert!((conditional_probability(&psi, &a, &b).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn null_events() {
        let psi = QState::basis(4, 0).unwrap();
        let off = proj([1, 2], 4);
        assert!(matches!(conditional_probability(&psi, &off, &off), Err(QwebError::NullConditioning(_))));
        assert!(matches!(meaning_bond(&psi, &proj([0], 4), &off), Err(QwebError::NullProbability(_))));
        assert!(expansion_coefficient(&psi, &off, 0).is_err());
    }

    #[test]
    fn uniform_bond_examples() {
        let psi = QState::uniform_real(10).unwrap();
        let r = meaning_bond(&psi, &proj(0..4, 10), &proj(4..9, 10)).unwrap();
        assert_eq!(r.bond, 0.0);
        assert_eq!(r.classification, BondClass::Repulsive);

        let r = meaning_bond(&psi, &proj(0..4, 10), &proj(2..7, 10)).unwrap();
        assert!((r.bond - 1.0).abs() < 1e-12);
        assert_eq!(r.classification, BondClass::Neutral);

        let s = CooccurrenceStats { n: 10, n_a: 4, n_b: 5, n_ab: 2, n_ax: 0, n_bx: 0, n_abx: 0 };
        assert!((uniform_bond(&s).unwrap() - r.bond).abs() < 1e-12);
        assert_eq!(uniform_bond(&CooccurrenceStats { n_ab: 0, ..s }).unwrap(), 0.0);
        let all = CooccurrenceStats { n: 7, n_a: 7, n_b: 7, n_ab: 7, ..s };
        assert_eq!(uniform_bond(&all).unwrap(), 1.0);
        assert!(uniform_bond(&CooccurrenceStats { n_a: 0, n_ab: 0, ..s }).is_err());
    }

    #[test]
    fn classification_band() {
        assert_eq!(BondClass::of(1.0 + 5e-10), BondClass::Neutral);
        assert_eq!(BondClass::of(1.0 + 2e-9), BondClass::Attractive);
        assert_eq!(BondClass::of(1.0 - 2e-9), BondClass::Repulsive);
        assert_eq!(serde_json::to_string(&BondClass::Attractive).unwrap(), "\"attractive\"");
    }

    #[test]
    fn non_commuting_bonds_are_asymmetric() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = vec![Complex64::new(s, 0.0), Complex64::new(s, 0.0)];
        let m_a = proj([0], 2);
        let m_b = DenseProjector::from_span(&[plus], 2).unwrap();
        let t: f64 = 0.6;
        let psi = QState::general(&[t.cos(), t.sin()], &[0.0, 0.0]).unwrap();
        let ba = meaning_bond(&psi, &m_a, &m_b).unwrap().bond;
        let ab = meaning_bond(&psi, &m_b, &m_a).unwrap().bond;
        assert!((ba - 1.0 / (t.cos() + t.sin()).powi(2)).abs() < 1e-12);
        assert!((ab - 0.5 / t.cos().powi(2)).abs() < 1e-12);
        assert!((ba - ab).abs() > 0.1);
    }

    #[test]
    fn dense_conditioning_matches_collapse() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let a = DenseProjector::random(4, 2, &mut rng).unwrap();
            let b = DenseProjector::random(4, 2, &mut rng).unwrap();
            let r: Vec<f64> = (0..4).map(|_| rng.gen()).collect();
            let p: Vec<f64> = (0..4).map(|_| rng.gen_range(0.0..TAU)).collect();
            let psi = QState::general(&r, &p).unwrap();
            let oracle = born_probability(&collapse(&a, &psi).unwrap().0, &b).unwrap();
            assert!((conditional_probability(&psi, &a, &b).unwrap() - oracle).abs() < 1e-12);
        }
    }

    #[test]
    fn expansion_examples() {
        let psi = QState::uniform_real(8).unwrap();
        let m = proj([1, 3, 6], 8);
        let e = expansion_coefficient(&psi, &m, 3).unwrap();
        assert!((e.modulus - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((e.bond_form.unwrap() - e.modulus).abs() < 1e-12);
        assert_eq!(expansion_coefficient(&psi, &m, 2).unwrap().modulus, 0.0);
        assert!(expansion_coefficient(&psi, &m, 8).is_err());

        let psi = QState::general(&[1.0, 0.0, 1.0], &[0.0, 0.0, 0.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let dense = DenseProjector::random(3, 2, &mut rng).unwrap();
        let e = expansion_coefficient(&psi, &dense, 1).unwrap();
        assert!(e.bond_form.is_none());
        assert!(e.modulus > 0.0);
    }

    #[test]
    fn dense_expansion_dual_path() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let m = DenseProjector::random(6, 3, &mut rng).unwrap();
            let r: Vec<f64> = (0..6).map(|_| rng.gen_range(0.1..1.0)).collect();
            let p: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..TAU)).collect();
            let psi = QState::general(&r, &p).unwrap();
            let mut total = 0.0;
            for j in 0..6 {
                let e = expansion_coefficient(&psi, &m, j).unwrap();
                assert!((e.bond_form.unwrap() - e.modulus).abs() < 1e-12);
                total += e.modulus * e.modulus;
            }
            assert!((total - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn matrix_rows() {
        let corpus = Corpus::from_texts(
            [("d0", "red fish"), ("d1", "red blue"), ("d2", "blue"), ("d3", "fish cat")],
            Tokenizer::default(),
        )
        .unwrap();
        let rows = bond_matrix(&corpus, &["red", "blue", "fish", "zebra", "red"]);
        assert_eq!(rows.len(), 10);
        assert!(rows.windows(2).all(|w| (&w[0].a, &w[0].b) <= (&w[1].a, &w[1].b)));
        let find = |a: &str, b: &str| rows.iter().find(|r| r.a == a && r.b == b).unwrap();
        assert_eq!(find("blue", "red").bond, Some(4.0 * 1.0 / 4.0));
        assert_eq!(find("blue", "fish").bond, Some(0.0));
        assert_eq!(find("blue", "fish").class, "repulsive");
        assert_eq!(find("red", "red").bond, Some(2.0));
        assert_eq!(find("red", "zebra").class, "undefined");
        assert_eq!(serde_json::to_value(find("red", "zebra")).unwrap()["bond"], serde_json::Value::Null);
    }

    proptest! {
        #[test]
        fn no_self_repulsion(
            r in prop::collection::vec(0.0f64..1.0, 8),
            p in prop::collection::vec(0.0f64..TAU, 8),
            mask in prop::collection::vec(any::<bool>(), 8),
        ) {
            let Ok(psi) = QState::general(&r, &p) else { return Ok(()) };
            let ix: IndexSet = (0..8).filter(|&i| mask[i]).collect();
            let m = IndexProjector::new(ix, 8).unwrap();
            let Ok(rep) = meaning_bond(&psi, &m, &m) else { return Ok(()) };
            prop_assert!((rep.bond - 1.0 / rep.p_b).abs() <= 1e-9 * rep.bond);
            prop_assert!(rep.bond >= 1.0 - 1e-12);
            prop_assert!(rep.classification != BondClass::Repulsive);
        }

        #[test]
        fn commuting_uniform_bonds_are_symmetric(
            n in 2usize..24,
            a in prop::collection::vec(any::<bool>(), 24),
            b in prop::collection::vec(any::<bool>(), 24),
        ) {
            let ja: IndexSet = (0..n).filter(|&i| a[i]).collect();
            let jb: IndexSet = (0..n).filter(|&i| b[i]).collect();
            prop_assume!(!ja.is_empty() && !jb.is_empty());
            let psi = QState::uniform_real(n).unwrap();
            let (ma, mb) = (IndexProjector::new(ja.clone(), n).unwrap(), IndexProjector::new(jb.clone(), n).unwrap());
            let ab = meaning_bond(&psi, &ma, &mb).unwrap().bond;
            let ba = meaning_bond(&psi, &mb, &ma).unwrap().bond;
            let count = n as f64 * ja.intersection(&jb).len() as f64 / (ja.len() * jb.len()) as f64;
            prop_assert!((ab - count).abs() < 1e-12 && (ba - count).abs() < 1e-12);
        }
    }
}
