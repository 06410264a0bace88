use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read or write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("zero objects in corpus")]
    EmptyCorpus,

    #[error("empty co-occurrence network")]
    EmptyNetwork,

    #[error("cycle detected through tag {0:?}")]
    Cycle(String),

    #[error("hierarchy is not a single-rooted tree: {0}")]
    NotATree(String),

    #[error("tag sets differ: {0}")]
    TagMismatch(String),

    #[error("degenerate population: Q = {0} (need at least 2 objects)")]
    DegeneratePopulation(u64),

    #[error("non-positive weight {0} in entropy input")]
    NonPositiveWeight(f64),

    #[error("undefined NMI: both hierarchies carry no descendant information")]
    UndefinedNmi,

    #[error("empty decay curve")]
    EmptyCurve,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
