use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error)]
pub enum AxiError {
    #[error("domain error in {func}: {reason}")]
    Domain { func: &'static str, reason: String },

    #[error("invalid generating curve: {0}")]
    InvalidCurve(String),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid wavenumbers: {0}")]
    InvalidWavenumbers(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("operation requires a genus-{expected} surface, got genus {found}")]
    Genus { expected: u8, found: u8 },

    #[error("linear algebra failure: {0}")]
    Linalg(String),

    #[error("singular system: {0}")]
    Singular(String),

    #[error("weight function invalid: {0}")]
    InvalidWeight(String),

    #[error("diagnostic failure: {0}")]
    Diagnostic(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<ndarray_linalg::error::LinalgError> for AxiError {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        AxiError::Linalg(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, AxiError>;

pub(crate) fn domain(func: &'static str, reason: impl Into<String>) -> AxiError {
    AxiError::Domain {
        func,
        reason: reason.into(),
    }
}
