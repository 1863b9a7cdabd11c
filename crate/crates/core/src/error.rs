use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("multidegree {counts:?} sums to {sum}, but a size-{size} block needs {expected}")]
    DegreeMismatch {
        counts: Vec<u32>,
        sum: u64,
        size: usize,
        expected: u64,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("position {position} is outside 1..={max}")]
    BadPosition { position: usize, max: usize },

    #[error("characteristic {0} is not supported here (need 0 or > 3)")]
    CharacteristicUnsupported(u64),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("functional is not 2-alternating: it takes value {value} on relation row {row}")]
    NotTwoAlternating { row: String, value: String },

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },

    #[error("index ({row}, {col}) out of bounds for a {n_rows}x{n_cols} matrix")]
    OutOfBounds {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },

    #[error("basis index {index} is outside 1..={d}")]
    BasisIndexOutOfRange { index: u32, d: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{message}")]
    Json {
        message: String,
        #[source]
        source: serde_json::Error,
    },

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
