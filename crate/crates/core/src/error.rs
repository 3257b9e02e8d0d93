use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no documents found in {0}")]
    NoDocuments(PathBuf),

    #[error("document {path} rejected: {reason}")]
    DocumentRejected { path: PathBuf, reason: String },

    #[error("malformed topic file {path}: {reason}")]
    MalformedTopic { path: PathBuf, reason: String },

    #[error("malformed resource {path}, line {line}: {reason}")]
    MalformedResource {
        path: String,
        line: usize,
        reason: String,
    },

    #[error("every sentence was dropped while assembling the summary")]
    EmptySummary,

    #[error("ROUGE is undefined: the references contain no {0}-grams")]
    RougeUndefined(String),

    #[error("noise injection needs at least two topics")]
    NoNoiseSource,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
