use thiserror::Error;

/// Errors raised by the arithmetic, geometric and verification layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("polynomial is not totally real: {found} real roots for degree {degree}")]
    NotTotallyReal { degree: usize, found: usize },
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomial is reducible over Q")]
    Reducible,
    #[error("integral basis does not span a ring: {0}")]
    NotARing(String),
    #[error("unsupported degree {degree}: {reason}")]
    UnsupportedDegree { degree: usize, reason: &'static str },
    #[error("zero ideal")]
    ZeroIdeal,
    #[error("ideal is not invertible in the configured order")]
    NotInvertible,
    #[error("element is not a unit: {0}")]
    NotAUnit(String),
    #[error("matrix is not in the ambient group SL(O_F + a): {0}")]
    NotInAmbientGroup(String),
    #[error("enumeration box too large: {points} lattice points exceeds cap {cap}")]
    BoxTooLarge { points: u128, cap: u128 },
    #[error("cusps coincide in P^1(F)")]
    EqualCusps,
    #[error("ideal is not prime: {0}")]
    NotPrime(String),
    #[error("cone is not full-dimensional: {generators} generators in rank {rank}")]
    NotFullDimensional { generators: usize, rank: usize },
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("operation requires flavor {expected}, got {found}")]
    WrongFlavor { expected: &'static str, found: &'static str },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
