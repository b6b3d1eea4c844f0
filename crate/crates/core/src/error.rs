use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max |M - M^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    Trace(f64),

    #[error("negative eigenvalue {0:e}")]
    NegativeEigenvalue(f64),

    #[error("state vector has squared norm {0}, expected 1")]
    NotNormalized(f64),

    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("invalid extended Werner weights: {0}")]
    InvalidWeights(String),

    #[error("matrix is not an isometry (max |V^dagger V - I| = {0:e})")]
    NotIsometry(f64),

    #[error("isometry has {got} columns but the state has rank {expected}")]
    RankMismatch { expected: usize, got: usize },

    #[error("decomposition does not reproduce the state (max deviation {0:e})")]
    Resynthesis(f64),

    #[error("invalid optimizer configuration: {0}")]
    Config(String),
}
