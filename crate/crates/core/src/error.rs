use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("spline needs at least 4 knots, got {0}")]
    TooFewKnots(usize),

    #[error("knot x coordinates must be strictly increasing (knot {index}: {prev} then {next})")]
    NonMonotoneKnots { index: usize, prev: f64, next: f64 },

    #[error("x = {x} is outside the spline domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },

    #[error("illegal schema character {ch:?} at position {pos}")]
    SchemaParse { ch: char, pos: usize },

    #[error("illegal bit {ch:?} at position {pos}")]
    BitParse { ch: char, pos: usize },

    #[error("empty {0}")]
    Empty(&'static str),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("{what} of size {size} exceeds the tractability cap of {cap}")]
    TooLarge {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("qubit amplitudes ({alpha}, {beta}) are not normalized")]
    NotNormalized { alpha: f64, beta: f64 },

    #[error("fitness must be finite and nonnegative, got {value} at index {index}")]
    NegativeFitness { index: usize, value: f64 },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("invalid configuration:\n  - {}", .0.join("\n  - "))]
    InvalidConfig(Vec<String>),

    #[error("{path}:{line}: {message}")]
    Format {
        path: String,
        line: usize,
        message: String,
    },

    #[error("i/o error on {}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
