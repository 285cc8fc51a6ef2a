use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("subsystem dimensions must be positive")]
    ZeroDimension,

    #[error("invalid qubit cut: n={qubits}, r={r} (need even n and 2r <= n)")]
    InvalidQubitCut { qubits: u32, r: u32 },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("state vector is not normalized (|psi|^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (deviation {deviation:e} at ({row}, {col}))")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("matrix shape {rows}x{cols} invalid: {reason}")]
    InvalidShape { rows: usize, cols: usize, reason: &'static str },

    #[error("{solver} did not converge within {limit} iterations")]
    NoConvergence { solver: &'static str, limit: usize },

    #[error("Gram matrix has eigenvalue {value:e} below the clamp threshold")]
    NegativeEigenvalue { value: f64 },

    #[error("parameter {name} = {value} out of range {range}")]
    OutOfDomain { name: &'static str, value: f64, range: &'static str },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
