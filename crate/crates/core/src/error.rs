use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the simulator.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid grid, parameter or run configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// A configuration file failed to parse or validate.
    #[error("{}", fmt_parse(*.line, .message))]
    Parse {
        line: Option<usize>,
        message: String,
    },

    /// Field dimensions disagree with each other or with the grid.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    /// An operator precondition (mean-zero source, ...) does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Argument outside the operator's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Model state fails its invariants.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Non-finite values appeared during time integration.
    #[error("numerical blow-up at t = {t}: {context}")]
    Blowup { t: f64, context: String },

    /// Malformed input to a diagnostic routine.
    #[error("input error: {0}")]
    Input(String),

    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("corrupt checkpoint header in {path}: {reason}")]
    CorruptHeader { path: PathBuf, reason: String },

    #[error("truncated checkpoint payload in {path}: expected {expected} bytes, found {found}")]
    TruncatedPayload {
        path: PathBuf,
        expected: u64,
        found: u64,
    },
}

fn fmt_parse(line: Option<usize>, message: &str) -> String {
    match line {
        Some(l) => format!("config line {l}: {message}"),
        None => format!("config: {message}"),
    }
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
