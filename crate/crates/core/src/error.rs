use thiserror::Error;

/// Errors surfaced by the library. Each variant maps onto a distinct CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("invalid spin value {0} (expected -1 or +1)")]
    Domain(i64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("capacity exceeded: {num_vars} variables over the cap of {cap}")]
    Capacity { num_vars: usize, cap: usize },

    #[error("undefined statistic: {0}")]
    UndefinedStatistic(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn dimension(expected: usize, got: usize) -> Self {
        Error::Dimension { expected, got }
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Json(_) => 2,
            Error::Capacity { .. } => 3,
            Error::Dimension { .. } | Error::Index(_) | Error::Domain(_) => 4,
            Error::UndefinedStatistic(_) => 5,
            Error::Io(_) | Error::Csv(_) => 1,
        }
    }
}
