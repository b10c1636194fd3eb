use thiserror::Error;

/// Errors produced by the estimation and simulation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed geometric input (too few points, unordered abscissae, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Evaluation argument outside the supported domain.
    #[error("argument out of range: {0}")]
    OutOfRange(String),

    /// A model's analytic pieces violate the preconditions of its sampler.
    #[error("model misconfigured: {0}")]
    ModelMisconfigured(String),

    /// The analytic self-check of a truth model failed.
    #[error("model invalid: {}", failures.join("; "))]
    ModelInvalid { failures: Vec<String> },

    /// A monotone estimate that cannot be scored (e.g. negative level under a
    /// square-root loss).
    #[error("invalid estimate: {0}")]
    InvalidEstimate(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A path does not cover the requested argmax search window.
    #[error("invalid window: {0}")]
    InvalidWindow(String),

    /// Too few replicates for the requested standard-error computation.
    #[error("insufficient replicates: need at least {needed}, got {got}")]
    InsufficientReplicates { needed: usize, got: usize },

    /// Bad experiment/CLI configuration.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
