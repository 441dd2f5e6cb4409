use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid level: {0}")]
    InvalidLevel(String),

    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("invalid Gegenbauer parameters: {0}")]
    InvalidGegenbauer(String),

    #[error("invalid angular chain: {0}")]
    InvalidChain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("quadrature rule insufficient: {0}")]
    InsufficientQuadrature(String),

    #[error("degenerate function: {0}")]
    Degenerate(String),

    #[error("series outside validated region: {0}")]
    SeriesRegion(String),

    #[error("state count {count} exceeds cap {cap}")]
    TooManyStates { count: String, cap: u64 },

    #[error("grid refused: {0}")]
    Grid(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
}
