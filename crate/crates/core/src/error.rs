use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input is not valid UTF-8: {0}")]
    Encoding(#[from] std::str::Utf8Error),

    #[error("invalid token {0:?}: no letters")]
    InvalidToken(String),

    #[error("empty document")]
    EmptyDocument,

    #[error("inconsistent counts: {0}")]
    InconsistentCounts(String),

    #[error("grade {0} is outside 1..=12")]
    InvalidGrade(i64),

    #[error("degenerate corpus: {0}")]
    DegenerateCorpus(String),

    #[error("invalid corpus entry: {0}")]
    InvalidEntry(String),

    #[error("invalid smoothing configuration: {0}")]
    InvalidSmoothing(String),

    #[error("no extractable subtree patterns")]
    EmptyEvidence,

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("{path}:{line}: {message}")]
    Located {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("model format: {0}")]
    ModelFormat(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("invalid chart: {0}")]
    Chart(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Reads a file as UTF-8, reporting encoding problems as [`Error::Encoding`].
pub(crate) fn read_utf8(path: &std::path::Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    let text = std::str::from_utf8(&bytes)?;
    Ok(text.to_owned())
}
