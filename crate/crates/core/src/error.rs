use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LgError {
    #[error("Kraus set is not complete: max |sum K^dag K - I| = {residual:e}")]
    IncompleteKraus { residual: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("invalid projector: {0}")]
    InvalidProjector(String),

    /// The measured outcome has zero probability, so the post-measurement
    /// state is undefined.
    #[error("outcome has zero probability; post-measurement state undefined")]
    ZeroProbability,

    #[error("invalid channel parameters: {0}")]
    InvalidParams(String),

    #[error("invalid measurement times: {0}")]
    InvalidTimes(String),

    #[error("invalid bracket [{lo}, {hi}]")]
    InvalidBracket { lo: f64, hi: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, LgError>;
