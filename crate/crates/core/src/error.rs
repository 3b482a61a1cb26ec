use std::path::PathBuf;

/// Errors surfaced by the lattice, Ising, quantum and scan layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("lattice size must be at least 2, got {0}")]
    LatticeTooSmall(usize),

    #[error("{what} {index} out of range (size {size})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("{method} limited to {limit}, got {got}")]
    SizeLimit {
        method: &'static str,
        limit: &'static str,
        got: usize,
    },

    #[error("moment arity {0} unsupported (at most 6 vertices)")]
    MomentArity(usize),

    #[error("coupling beta must be nonnegative, got {0}")]
    NegativeBeta(f64),

    #[error("elliptic modulus must lie in [0, 1), got {0}")]
    EllipticModulus(f64),

    #[error("not a density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("density matrix dimension must be {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("probability out of range: {0}")]
    InvalidProbability(f64),

    #[error("invalid sweep config: {0}")]
    InvalidConfig(String),

    #[error("sweep grid is not uniform")]
    NonUniformGrid,

    #[error("need at least {need} rows, got {got}")]
    TooFewRows { need: usize, got: usize },

    #[error("cannot parse density matrix file: {0}")]
    Parse(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
