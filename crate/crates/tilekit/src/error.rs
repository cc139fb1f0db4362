use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{source_name}, line {line}, column {column:?}: {message}")]
    Parse {
        source_name: String,
        line: u64,
        column: String,
        message: String,
    },
    #[error("duplicate entity id {0:?}")]
    DuplicateEntity(String),
    #[error("no reference score matches a known entity")]
    NoMatchingEntities,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] tilekit_core::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("PNG encoding: {0}")]
    Png(#[from] png::EncodingError),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
