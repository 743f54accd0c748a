use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = QwebError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum QwebError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path} is not valid UTF-8")]
    NotUtf8 { path: PathBuf },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("invalid co-occurrence stats: {0}")]
    InvalidStats(String),

    #[error("undefined frequency: denominator {0} is zero")]
    UndefinedFrequency(&'static str),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid projector: {0}")]
    InvalidProjector(String),

    #[error("destructive annihilation: superposition has zero norm")]
    DestructiveAnnihilation,

    #[error("state annihilated by context (norm {norm:e})")]
    Annihilated { norm: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "states are not orthogonal (|<A|B>| = {overlap:e}); use mu_nonorthogonal for the general case"
    )]
    NotOrthogonal { overlap: f64 },

    #[error("invalid first-sector probability {0}")]
    InvalidFirstSector(f64),

    #[error("degenerate context: denominator {denominator:e}")]
    DegenerateContext { denominator: f64 },

    #[error("projectors do not commute")]
    NonCommuting,

    #[error("boundary degeneracy: {0}")]
    BoundaryDegeneracy(String),

    #[error("conditioning on null event (probability {0:e})")]
    NullConditioning(f64),

    #[error("null probability for the bonded concept ({0:e})")]
    NullProbability(f64),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
