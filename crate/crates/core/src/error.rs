use std::path::PathBuf;

/// Errors raised across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported kernel order {0} for a closed form (only 1/2 and 3/2)")]
    UnsupportedOrder(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("requested {requested}-point density exceeds particle count {particles}")]
    TooManyPoints { requested: usize, particles: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("binning mismatch: {0}")]
    BinningMismatch(String),

    #[error("{}:{line}: cannot parse {content:?}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        content: String,
    },

    #[error("ordering violation at index {index}: {value} does not exceed {previous}")]
    Ordering {
        index: usize,
        previous: f64,
        value: f64,
    },

    #[error("t = {0} is outside the evaluator's accuracy envelope (t <= 1000)")]
    Envelope(f64),

    #[error("{0}")]
    ZeroDensity(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
