use crate::{IndexSet, QwebError, Result};

/// Per-cell impact counts of a detection screen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImpactRecord {
    cell_counts: Vec<u64>,
}

impl ImpactRecord {
    pub fn new(cell_counts: Vec<u64>) -> Self {
        ImpactRecord { cell_counts }
    }

    pub fn cell_counts(&self) -> &[u64] {
        &self.cell_counts
    }

    /// Total number of impacts.
    pub fn total(&self) -> u64 {
        self.cell_counts.iter().sum()
    }

    /// Impacts falling in the cells of `cells`.
    pub fn count_in(&self, cells: &IndexSet) -> u64 {
        cells.iter().filter_map(|i| self.cell_counts.get(i)).sum()
    }
}

/// Relative frequency of impacts per cell.
pub fn empirical_probabilities(rec: &ImpactRecord) -> Result<Vec<f64>> {
    let m = rec.total();
    if m == 0 {
        return Err(QwebError::InvalidArgument("impact record has no impacts".into()));
    }
    Ok(rec.cell_counts.iter().map(|&c| c as f64 / m as f64).collect())
}

/// Pointwise uniform average `(μ_A + μ_B) / 2`.
pub fn classical_average(mu_a: &[f64], mu_b: &[f64]) -> Result<Vec<f64>> {
    if mu_a.len() != mu_b.len() {
        return Err(QwebError::DimensionMismatch { expected: mu_a.len(), actual: mu_b.len() });
    }
    Ok(mu_a.iter().zip(mu_b).map(|(a, b)| 0.5 * (a + b)).collect())
}
