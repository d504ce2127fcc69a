use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("field mean is not zero (zero-mode coefficient {0:e})")]
    MeanNotZero(f64),

    #[error("field is not real-valued (max hermitian defect {0:e})")]
    NotReal(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("blowup at t = {t}: max |u| = {max_abs:e} exceeds threshold {threshold:e}")]
    Blowup { t: f64, max_abs: f64, threshold: f64 },

    #[error("time {t} outside trajectory range [{start}, {end}]")]
    TimeOutOfRange { t: f64, start: f64, end: f64 },

    #[error("time {0} is not aligned to the trajectory lattice")]
    TimeMisaligned(f64),

    #[error("too few samples: need at least {needed}, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("resolution: {0}")]
    Resolution(String),

    #[error("format: {0}")]
    Format(String),

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
