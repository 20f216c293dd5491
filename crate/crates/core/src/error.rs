use thiserror::Error;

/// Errors raised while building or solving the model.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("truncation n_max={n_max} is below the adaptive floor {floor}")]
    TruncationTooSmall { n_max: usize, floor: usize },

    #[error("requested {requested} eigenpairs from a matrix of dimension {dim}")]
    TooManyEigenpairs { requested: usize, dim: usize },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("state norm drifted from one by {drift:e}")]
    NotNormalized { drift: f64 },

    #[error("state of length {len} does not match a spin-Fock basis")]
    BadStateLength { len: usize },

    #[error("grid step {step} too coarse for n_max={n_max} (limit {limit})")]
    GridTooCoarse { step: f64, n_max: usize, limit: f64 },

    #[error("state is not real up to a global phase (imaginary residue {residue:e})")]
    NotRealUpToPhase { residue: f64 },

    #[error("invalid scan configuration: {0}")]
    Config(String),

    #[error("malformed dataset: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
