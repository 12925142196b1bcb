use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Solver(#[from] axidirac::AxiError),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{command} needs a genus-1 (torus-like) surface; {geometry} has genus 0")]
    NeedsGenusOne { command: &'static str, geometry: String },

    #[error("mie-compare needs the unit sphere, got {0}")]
    NotSphere(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type CliResult<T> = Result<T, CliError>;

pub fn io_at(path: &std::path::Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}
