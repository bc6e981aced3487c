use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {index} out of range for a graph with {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },

    #[error("invalid edge ({i}, {j}): {reason}")]
    InvalidEdge { i: usize, j: usize, reason: &'static str },

    #[error("vertex set is empty")]
    EmptyVertexSet,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("degenerate grid {width}x{height} for {k_nn} nearest neighbours")]
    DegenerateGrid { width: usize, height: usize, k_nn: usize },

    #[error("symmetric eigensolver did not converge")]
    EigenNoConvergence,

    #[error("bandwidth {k} is ill-defined: eigenvalues {k} and {next} coincide at {value}", next = k + 1)]
    DegenerateBandEdge { k: usize, value: f64 },

    #[error("kernel polynomial vanishes at eigenvalue #{index} (lambda = {lambda}, g = {value:e})")]
    KernelVanishes { index: usize, lambda: f64, value: f64 },

    #[error("linear system is singular or ill-conditioned (condition estimate {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("sampled band matrix is rank deficient (rank {rank} < {k})")]
    RankDeficient { rank: usize, k: usize },

    #[error("reference signal has zero norm")]
    ZeroReference,

    #[error(
        "image {width}x{height} has {pixels} pixels; the dense eigendecomposition path supports at most {limit}, downscale the image"
    )]
    ImageTooLarge { width: usize, height: usize, pixels: usize, limit: usize },

    #[error("{path}:{line}: {message}")]
    Config { path: PathBuf, line: usize, message: String },

    #[error("malformed input at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("pgm: {0}")]
    Pgm(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
