use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch between {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: Vec<usize>,
        right: Vec<usize>,
    },

    #[error("degenerate column {column}: norm is zero or negligible")]
    DegenerateColumn { column: usize },

    #[error("singular value iteration did not converge after {iterations} sweeps")]
    NoConvergence { iterations: usize },

    #[error("pilot matrix is not orthogonal (Xp Xp^H deviates from T_s I by {deviation:e})")]
    NonOrthogonalPilots { deviation: f64 },

    #[error("zero reference matrix in NMSE")]
    ZeroTruth,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error(
        "trial {trial} at sweep point {sweep_index} still degenerate after {attempts} attempts"
    )]
    ResampleLimit {
        sweep_index: usize,
        trial: usize,
        attempts: u32,
    },

    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),

    #[error("config parse error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// Configuration problems are reported before any computation starts.
    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Json(_))
    }
}
