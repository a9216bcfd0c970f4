use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series did not converge within {terms} terms")]
    Convergence { terms: usize },

    #[error("pole: denominator factor vanishes at term {index}")]
    Pole { index: usize },

    #[error("singular point z = {point} (|z - 1/z| below guard)")]
    Singularity { point: Complex64 },

    #[error("parameter role: {0}")]
    ParameterRole(String),

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("ill-conditioned system (estimate {estimate:.3e})")]
    Conditioning { estimate: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
