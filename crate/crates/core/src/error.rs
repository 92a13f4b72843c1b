use thiserror::Error;

use crate::states::StateClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported number of modes: {n_modes} (expected 1 or 2)")]
    UnsupportedDimension { n_modes: usize },

    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("covariance matrix is not bona fide (min symplectic eigenvalue {min_symplectic_eigenvalue:.3e})")]
    NotBonaFide { min_symplectic_eigenvalue: f64 },

    #[error("numerical domain error: {0}")]
    NumericalDomain(String),

    #[error("unphysical state: symplectic eigenvalue {nu:.3e} below 1")]
    UnphysicalState { nu: f64 },

    #[error("mode mismatch: {left} vs {right} modes")]
    ModeMismatch { left: usize, right: usize },

    #[error("mode index {index} out of range for a {n_modes}-mode state")]
    IndexOutOfRange { index: usize, n_modes: usize },

    #[error("the entangled bound curve needs a logarithmic negativity value")]
    MissingNegativity,

    #[error("average QFI must be positive, got {0}")]
    NonPositiveQfi(f64),

    #[error("sampling exhausted for class {class} after {attempts} attempts")]
    SamplingExhausted { class: StateClass, attempts: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("fit degenerate: {0}")]
    FitDegenerate(String),

    #[error("Fock cutoff {cutoff} too small (trace deficit {trace_deficit:.3e}); try cutoff >= {suggested_cutoff}")]
    CutoffTooSmall {
        cutoff: usize,
        trace_deficit: f64,
        suggested_cutoff: usize,
    },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::InvalidParameter(_)
            | Error::UnsupportedDimension { .. }
            | Error::InvalidMatrix(_)
            | Error::NotBonaFide { .. }
            | Error::MissingNegativity
            | Error::NonPositiveQfi(_) => 2,
            Error::SamplingExhausted { .. }
            | Error::InsufficientData(_)
            | Error::FitDegenerate(_)
            | Error::NumericalDomain(_)
            | Error::UnphysicalState { .. }
            | Error::ModeMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::NumericalFailure(_) => 3,
            Error::Io(_) | Error::Json(_) => 4,
            Error::CutoffTooSmall { .. } | Error::Validation(_) => 5,
        }
    }
}
