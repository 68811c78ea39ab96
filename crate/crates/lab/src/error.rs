use thiserror::Error;

/// Failures of a lab run, each with its own process exit status.
#[derive(Debug, Error)]
pub enum LabError {
    /// Bad flags, config file, input files or parameter values.
    #[error("config error: {0}")]
    Config(String),
    /// A requested problem exceeds a dimension or size cap.
    #[error("capacity error: {0}")]
    Capacity(String),
    /// The run finished but a checked bound did not hold.
    #[error("assertion failed: {0}")]
    Assertion(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl LabError {
    pub fn exit_code(&self) -> u8 {
        match self {
            LabError::Config(_) => 2,
            LabError::Capacity(_) => 3,
            LabError::Assertion(_) => 4,
            LabError::Runtime(_) => 1,
        }
    }
}

impl From<qcompound::Error> for LabError {
    fn from(e: qcompound::Error) -> Self {
        match e {
            qcompound::Error::Capacity { .. } => LabError::Capacity(e.to_string()),
            qcompound::Error::Solver(_) => LabError::Runtime(e.to_string()),
            other => LabError::Config(other.to_string()),
        }
    }
}

pub type LabResult<T> = Result<T, LabError>;
