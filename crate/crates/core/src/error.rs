use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix for qubit {qubit} is not unitary")]
    NotUnitary { qubit: usize },

    #[error("invalid model at {location}: {message}")]
    Validation { location: String, message: String },

    #[error("size bound exceeded: {what} is {value}, limit {limit}")]
    SizeBound { what: &'static str, value: usize, limit: usize },

    #[error("noncontextuality LP indeterminate (certificate violation {violation:e})")]
    LpIndeterminate { violation: f64 },

    #[error("strictness fails for S({n},{k}): C(n,k)/2^(n-1) = {mass} is not below 1")]
    StrictnessFails { n: usize, k: usize, mass: String },

    #[error("no preset observables for {0}")]
    UnknownFamily(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse { position, message: message.into() }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArgument(message.into())
    }

    pub(crate) fn validation(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation { location: location.into(), message: message.into() }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SizeBound { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
