use thiserror::Error;

/// Errors produced by the samplers, metric builders and estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("invalid scale: {0}")]
    InvalidScale(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("out of bounds: {0}")]
    OutOfBounds(String),
    #[error("target vertex {0} is unreachable")]
    Unreachable(usize),
    #[error("degenerate annulus: {0}")]
    DegenerateAnnulus(String),
    #[error("invalid set: {0}")]
    InvalidSet(String),
    #[error("metric ball too large: {0}")]
    BallTooLarge(String),
    #[error("resolution error: {0}")]
    Resolution(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
