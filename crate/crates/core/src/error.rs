use thiserror::Error;

/// Errors raised by every module of the crate.
///
/// The variants map onto the CLI exit codes: [`Error::Usage`] is a caller
/// mistake (exit 1), everything else is a numerical or resource failure
/// (exit 2).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("accuracy target {target:e} not reached (achieved {achieved:e})")]
    Accuracy { target: f64, achieved: f64 },

    #[error("no solution: residual {residual}")]
    NoSolution { residual: String },
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
