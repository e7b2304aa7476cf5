use thiserror::Error;

/// Errors raised by the numerical kernels, catalogues and harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix entries must number n*n = {expected}, got {actual}")]
    Shape { expected: usize, actual: usize },

    #[error("matrix has a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds {bound:e}")]
    NotHermitian { asymmetry: f64, bound: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below -{bound:e}")]
    NotPsd { eigenvalue: f64, bound: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off:e})")]
    NoConvergence { sweeps: usize, off: f64 },

    #[error("{function}: argument {value} outside domain {domain}")]
    Domain {
        function: String,
        value: f64,
        domain: &'static str,
    },

    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("function {0} has no integral representation")]
    MissingRepresentation(String),

    #[error("test-case precondition violated: {0}")]
    Precondition(String),

    #[error("arity mismatch: polynomial has {expected} variables, {actual} supplied")]
    Arity { expected: usize, actual: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unknown tag: {0}")]
    UnknownTag(String),

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
