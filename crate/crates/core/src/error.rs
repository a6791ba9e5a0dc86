use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("modulus mismatch: {0} vs {1}")]
    Modulus(u64, u64),

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("unknown algebra preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("invalid module map: {0}")]
    InvalidMap(String),

    #[error("modules live over different algebras")]
    AlgebraMismatch,

    #[error("invalid complex: {0}")]
    InvalidComplex(String),

    #[error("invalid chain map: {0}")]
    InvalidChainMap(String),

    #[error("certificate failed verification: {0}")]
    Certificate(String),

    #[error("linear system has no solution: {0}")]
    Unsolvable(String),

    #[error("resolution cap {cap} exhausted; surviving syzygy has dimension {syzygy_dim}")]
    CapExhausted { cap: usize, syzygy_dim: usize },

    #[error("result not stable at cap/window {0}: {1} vs {2}")]
    Unstable(usize, usize, usize),

    #[error("refused: {0}")]
    Refused(String),

    #[error("not self-injective: {0}")]
    NotSelfInjective(String),

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("unknown exercise `{id}`; available: {available}")]
    UnknownExercise { id: String, available: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error("io: {0}")]
    Io(String),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
