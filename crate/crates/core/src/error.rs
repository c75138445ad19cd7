use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("incompatible lattices")]
    IncompatibleLattices,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("gram matrix is not symmetric")]
    NotSymmetric,

    #[error("gram matrix is degenerate")]
    Degenerate,

    #[error("lattice rank must be at least 1")]
    EmptyLattice,

    #[error("zero vector has no primitivity")]
    ZeroVector,

    #[error("reflection vector must have square 2")]
    ReflectionNorm,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("not a valid moduli dimension")]
    InvalidModuliDimension,

    #[error("not a K3 degree")]
    NotK3Degree,

    #[error("Bogomolov–Beauville form does not represent zero")]
    NoIsotropicClass,

    #[error("invalid K3 model: {0}")]
    InvalidModel(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("value exceeds 2^64: {0}")]
    Overflow(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
