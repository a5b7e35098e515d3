use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("evaluation budget exceeded: {0}")]
    Budget(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("gauge-fixed edges would close a loop: cycle through vertices {cycle:?}")]
    GaugeLoop { cycle: Vec<usize> },

    #[error("gadget footprint collision: {0}")]
    Collision(String),

    #[error("inconsistent constraint system: {0}")]
    Inconsistent(String),

    #[error("planner overflow: {0}")]
    Overflow(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
