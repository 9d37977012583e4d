use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("unknown source kind `{0}`")]
    UnknownSource(String),

    #[error("source `{source_kind}` has no mapping for label `{label}` (valid: {valid})")]
    UnknownLabel {
        source_kind: String,
        label: String,
        valid: String,
    },

    #[error("{malformed} of {total} rows malformed in {path}, above tolerance {tolerance}")]
    TooManyMalformed {
        path: PathBuf,
        malformed: usize,
        total: usize,
        tolerance: f64,
    },

    #[error("empty corpus")]
    EmptyCorpus,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid vocabulary: {0}")]
    Vocab(String),

    #[error("invalid model config: {0}")]
    ModelConfig(String),

    #[error("non-finite value in {location}")]
    NonFinite { location: String },

    #[error("training diverged at epoch {epoch}, batch {batch}")]
    Diverged { epoch: usize, batch: usize },

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("line {line}: {message}")]
    TweetParse { line: usize, message: String },

    #[error("graph error: {0}")]
    Graph(String),

    #[error("id-space mismatch: {0}")]
    IdMismatch(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for the command line front end: 2 for input
    /// problems, 3 for model problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ModelConfig(_)
            | Error::NonFinite { .. }
            | Error::Diverged { .. }
            | Error::Checkpoint(_)
            | Error::Vocab(_) => 3,
            _ => 2,
        }
    }
}
