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

    #[error("i/o error: {0}")]
    Stream(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv header is missing required column {0:?}")]
    MissingColumn(&'static str),

    #[error("duplicate document id {0:?}")]
    DuplicateDocId(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("corpus is unlabeled ({unlabeled} of {total} documents lack a privilege label)")]
    Unlabeled { unlabeled: usize, total: usize },

    #[error("corpus contains no privileged documents; recall is undefined")]
    NoPrivileged,

    #[error("configuration yields zero counsel entities")]
    NoCounsel,

    #[error("network export references unknown entity {0:?}")]
    UnknownEntity(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
