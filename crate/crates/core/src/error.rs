use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A point lies on (or within tolerance of) a curve it must avoid.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),
    /// A discretised search found no solution at the available resolution.
    #[error("insufficient resolution: {0}")]
    Resolution(String),
    /// The input does not satisfy a mathematical precondition of the operation.
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("malformed raster file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("image encoding failed: {0}")]
    Image(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
