use thiserror::Error;

/// Errors produced by mesh construction, fitting and transfer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("point {point:?} lies outside the mesh domain")]
    PointOutsideDomain { point: Vec<f64> },

    #[error("target {index} at {point:?} lies outside the mesh domain")]
    TargetOutsideDomain { index: usize, point: Vec<f64> },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("least-squares system is singular: {0}")]
    SingularSystem(String),

    #[error("training diverged at iteration {iteration} (loss {loss})")]
    TrainingDiverged { iteration: usize, loss: f64 },

    #[error("model has not been fitted")]
    NotFitted,

    #[error("metric undefined: {0}")]
    UndefinedMetric(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("transfer failed at iteration {iteration} ({direction}): {source}")]
    Transfer {
        iteration: usize,
        direction: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}
