use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    Alphabet(String),

    #[error("symbol {symbol:?} is not in the alphabet")]
    SymbolNotInAlphabet { symbol: char },

    #[error("structure must contain at least one symbol")]
    EmptyStructure,

    #[error("index {index} out of range for structure of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("segment [{start}, {end}) out of range for structure of length {len}")]
    SegmentOutOfRange { start: usize, end: usize, len: usize },

    #[error("cannot delete from a structure of length 1")]
    DeleteFromSingleton,

    #[error("EditProbabilities: {0}")]
    EditProbabilities(String),

    #[error("group length mismatch: {left} vs {right}")]
    GroupLengthMismatch { left: usize, right: usize },

    #[error("DistanceConfig: {0}")]
    DistanceConfig(String),

    #[error("match file line {line}: {message}")]
    MatchFile { line: usize, message: String },

    #[error("Instance: {0}")]
    Instance(String),

    #[error("BAParams: {0}")]
    BaParams(String),

    #[error("metric undefined: {0}")]
    Metric(String),

    #[error("power-law fit needs at least 2 usable points, found {0}")]
    InsufficientFitPoints(usize),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
    let path = path.into();
    move |source| Error::Io { path, source }
}
