use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("non-finite amplitude encountered")]
    NonFinite,

    #[error("invalid index tuple {indices:?}: {reason}")]
    InvalidIndices { indices: Vec<usize>, reason: String },

    #[error("matrix is not antisymmetric (residual {residual:e})")]
    NotAntisymmetric { residual: f64 },

    #[error("matrix is singular (|det| = {det_abs:e} below {threshold:e})")]
    Singular { det_abs: f64, threshold: f64 },

    #[error("reference-deficient state: reference amplitude vanishes{}", suggestion_text(.suggestion))]
    ReferenceDeficient { suggestion: Option<Vec<usize>> },

    #[error("coordinates are not in intermediate normalization (alpha = {re} + {im}i)")]
    NotIntermediateNormalized { re: f64, im: f64 },

    #[error("unsupported shape: {fermions} fermions on {modes} modes")]
    UnsupportedShape { fermions: usize, modes: usize },

    #[error("operator is not an excitation operator: {0}")]
    NotExcitation(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("zero state")]
    ZeroState,
}

fn suggestion_text(s: &Option<Vec<usize>>) -> String {
    match s {
        Some(modes) => {
            let labels: Vec<String> = modes.iter().map(|m| (m + 1).to_string()).collect();
            format!("; relabel so that modes ({}) are occupied", labels.join(","))
        }
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
