use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("non-finite values in {what} at step {step}")]
    NonFinite { what: String, step: usize },

    #[error("source is not mean-free (mean = {mean:e})")]
    NotMeanFree { mean: f64 },

    #[error("momentum reconstruction failed: residual {residual:e} exceeds {limit:e}")]
    Reconstruction { residual: f64, limit: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
