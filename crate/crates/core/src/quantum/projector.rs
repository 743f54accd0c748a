use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use super::{inner, norm_sqr};
use crate::{IndexSet, QwebError, Result, MATRIX_TOL};

/// Largest dimension accepted for dense projectors.
pub const MAX_DENSE_DIM: usize = 2048;

/// An orthogonal projection operator on `C^n`.
pub trait Projection {
    fn dim(&self) -> usize;

    /// `P|v⟩`.
    fn apply(&self, v: &[Complex64]) -> Vec<Complex64>;

    /// `⟨u|P|v⟩`.
    fn matrix_element(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        inner(u, &self.apply(v))
    }

    /// `⟨v|P|v⟩`, unclamped.
    fn expectation(&self, v: &[Complex64]) -> f64 {
        self.matrix_element(v, v).re
    }

    fn to_dense(&self) -> DMatrix<Complex64> {
        let n = self.dim();
        let mut m = DMatrix::zeros(n, n);
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            e[j] = Complex64::new(1.0, 0.0);
            for (i, x) in self.apply(&e).into_iter().enumerate() {
                m[(i, j)] = x;
            }
            e[j] = Complex64::new(0.0, 0.0);
        }
        m
    }
}

/// Diagonal projector `Σ_{i∈I} |e_i⟩⟨e_i|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexProjector {
    indices: IndexSet,
    dim: usize,
}

impl IndexProjector {
    pub fn new(indices: IndexSet, dim: usize) -> Result<Self> {
        if let Some(m) = indices.max() {
            if m >= dim {
                return Err(QwebError::InvalidProjector(format!(
                    "index {m} outside dimension {dim}"
                )));
            }
        }
        Ok(IndexProjector { indices, dim })
    }

    pub fn identity(dim: usize) -> Self {
        IndexProjector { indices: IndexSet::full(dim), dim }
    }

    pub fn indices(&self) -> &IndexSet {
        &self.indices
    }

    /// `I - P`.
    pub fn complement(&self) -> IndexProjector {
        IndexProjector { indices: self.indices.complement(self.dim), dim: self.dim }
    }

    /// Product of two diagonal projectors, itself a projector.
    pub fn product(&self, other: &IndexProjector) -> Result<IndexProjector> {
        if self.dim != other.dim {
            return Err(QwebError::DimensionMismatch { expected: self.dim, actual: other.dim });
        }
        Ok(IndexProjector { indices: self.indices.intersection(&other.indices), dim: self.dim })
    }
}

impl Projection for IndexProjector {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for i in self.indices.iter() {
            out[i] = v[i];
        }
        out
    }

    fn matrix_element(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        self.indices.iter().map(|i| u[i].conj() * v[i]).sum()
    }

    fn expectation(&self, v: &[Complex64]) -> f64 {
        self.indices.iter().map(|i| v[i].norm_sqr()).sum()
    }
}

/// General projector stored as a dense Hermitian idempotent matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseProjector {
    matrix: DMatrix<Complex64>,
}

impl DenseProjector {
    /// Validates `M = M†` and `M² = M` within [`MATRIX_TOL`].
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let n = matrix.nrows();
        if matrix.ncols() != n {
            return Err(QwebError::InvalidProjector(format!(
                "matrix is {}x{}, not square",
                n,
                matrix.ncols()
            )));
        }
        if n == 0 || n > MAX_DENSE_DIM {
            return Err(QwebError::InvalidProjector(format!(
                "dimension {n} outside 1..={MAX_DENSE_DIM}"
            )));
        }
        let herm = max_abs_diff(&matrix, &matrix.adjoint());
        if herm > MATRIX_TOL {
            return Err(QwebError::InvalidProjector(format!("not self-adjoint (deviation {herm:e})")));
        }
        let idem = max_abs_diff(&(&matrix * &matrix), &matrix);
        if idem > MATRIX_TOL {
            return Err(QwebError::InvalidProjector(format!("not idempotent (deviation {idem:e})")));
        }
        Ok(DenseProjector { matrix })
    }

    /// Projector onto the span of `vectors` (Gram–Schmidt; linearly
    /// dependent vectors are dropped).
    pub fn from_span(vectors: &[Vec<Complex64>], n: usize) -> Result<Self> {
        if n == 0 || n > MAX_DENSE_DIM {
            return Err(QwebError::InvalidProjector(format!(
                "dimension {n} outside 1..={MAX_DENSE_DIM}"
            )));
        }
        let mut basis: Vec<Vec<Complex64>> = Vec::new();
        for v in vectors {
            if v.len() != n {
                return Err(QwebError::DimensionMismatch { expected: n, actual: v.len() });
            }
            let mut w = v.clone();
            // two passes of modified Gram–Schmidt
            for _ in 0..2 {
                for q in &basis {
                    let c = inner(q, &w);
                    for (wi, qi) in w.iter_mut().zip(q) {
                        *wi -= c * qi;
                    }
                }
            }
            let norm = norm_sqr(&w).sqrt();
            if norm > 1e-8 {
                basis.push(w.into_iter().map(|x| x / norm).collect());
            }
        }
        let mut m = DMatrix::zeros(n, n);
        for q in &basis {
            let col = DVector::from_column_slice(q);
            m += &col * col.adjoint();
        }
        Self::new(m)
    }

    /// Random projector of the given rank.
    pub fn random<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> Result<Self> {
        if rank > n {
            return Err(QwebError::InvalidProjector(format!("rank {rank} exceeds dimension {n}")));
        }
        let vectors: Vec<Vec<Complex64>> = (0..rank)
            .map(|_| {
                (0..n)
                    .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                    .collect()
            })
            .collect();
        Self::from_span(&vectors, n)
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Trace, i.e. the rank, rounded.
    pub fn rank(&self) -> usize {
        self.matrix.trace().re.round() as usize
    }
}

impl Projection for DenseProjector {
    fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let x = DVector::from_column_slice(v);
        (&self.matrix * x).iter().copied().collect()
    }

    fn to_dense(&self) -> DMatrix<Complex64> {
        self.matrix.clone()
    }
}

/// Either kind of projector.
#[derive(Debug, Clone, PartialEq)]
pub enum Projector {
    Index(IndexProjector),
    Dense(DenseProjector),
}

impl From<IndexProjector> for Projector {
    fn from(p: IndexProjector) -> Self {
        Projector::Index(p)
    }
}

impl From<DenseProjector> for Projector {
    fn from(p: DenseProjector) -> Self {
        Projector::Dense(p)
    }
}

impl Projector {
    fn inner_ref(&self) -> &dyn Projection {
        match self {
            Projector::Index(p) => p,
            Projector::Dense(p) => p,
        }
    }
}

impl Projection for Projector {
    fn dim(&self) -> usize {
        self.inner_ref().dim()
    }

    fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.inner_ref().apply(v)
    }

    fn matrix_element(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        self.inner_ref().matrix_element(u, v)
    }

    fn expectation(&self, v: &[Complex64]) -> f64 {
        self.inner_ref().expectation(v)
    }

    fn to_dense(&self) -> DMatrix<Complex64> {
        self.inner_ref().to_dense()
    }
}

/// Whether `a b = b a` within [`MATRIX_TOL`].
pub fn commute<A: Projection + ?Sized, B: Projection + ?Sized>(a: &A, b: &B) -> bool {
    if a.dim() != b.dim() {
        return false;
    }
    let (ma, mb) = (a.to_dense(), b.to_dense());
    max_abs_diff(&(&ma * &mb), &(&mb * &ma)) <= MATRIX_TOL
}

fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
