use thiserror::Error;

/// Errors shared by all solvers and front ends.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An exact computation would exceed a configured budget. The message
    /// names the offending quantity so callers can raise the budget.
    #[error("size budget exceeded: {0}")]
    Budget(String),

    /// `igamma` on a graph with an isolated vertex: the independent set
    /// consisting of that vertex cannot be dominated by open neighborhoods.
    #[error("undominatable: graph has an isolated vertex")]
    Undominatable,

    /// An adversary callback broke the game protocol.
    #[error("adversary protocol violation: {0}")]
    Protocol(String),

    /// A transcript does not replay cleanly against its root graph.
    #[error("transcript replay mismatch: {0}")]
    ReplayMismatch(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn budget(msg: impl Into<String>) -> Self {
        Error::Budget(msg.into())
    }
}
