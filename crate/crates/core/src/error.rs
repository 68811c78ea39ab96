use alloc::string::String;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("total dimension {dim} exceeds the cap of {cap}")]
    Capacity { dim: usize, cap: usize },
    #[error("unknown register `{0}`")]
    UnknownRegister(String),
    #[error("register `{0}` appears twice")]
    DuplicateRegister(String),
    #[error("register dimension must be at least 1")]
    EmptyRegister,
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("operator is not positive semidefinite (min eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("operator exceeds the identity (max eigenvalue {0})")]
    NotContraction(f64),
    #[error("trace is {0}, expected 1")]
    NotNormalized(f64),
    #[error("operator is not a projector (deviation {0:e})")]
    NotProjector(f64),
    #[error("Kraus operators are not trace preserving (deviation {0:e})")]
    NotTracePreserving(f64),
    #[error("parameter `{name}` = {value} is out of range ({expected})")]
    Parameter {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("{0}")]
    Invalid(String),
    #[error("solver failed: {0}")]
    Solver(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_open_unit(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value < 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter {
            name,
            value,
            expected: "0 < value < 1",
        })
    }
}
