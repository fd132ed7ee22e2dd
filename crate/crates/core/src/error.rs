use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("determinant {det} is not +1 or -1 modulo {modulus}")]
    NotSymplectic { det: u64, modulus: u64 },

    #[error("operation requires a determinant +1 matrix")]
    AntiSymplectic,

    #[error("matrix is over Z_{got}, expected Z_{expected}")]
    ModulusMismatch { expected: u64, got: u64 },

    #[error("matrix is not a canonical order-three element in dimension {d}")]
    NotCanonical { d: u64 },

    #[error(
        "brute-force scan over Z_{n} exceeds the limit {limit} (set SIC333_MAX_BRUTE to raise it)"
    )]
    ScaleGuard { n: u64, limit: u64 },

    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: i64, modulus: u64 },

    #[error("dimension {0} is not a prime greater than 3")]
    NotPrimeAbove3(u64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("cube of the operator is not a scalar (residual {0:e})")]
    NotOrderThree(f64),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("no conjugacy representative matches the matrix in dimension {d}")]
    Unclassified { d: u64 },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("requested eigenspace is empty")]
    EmptyEigenspace,

    #[error("vector norm {0} differs from 1")]
    NotNormalized(f64),

    #[error("vector is not a SIC fiducial (deviation {0:e})")]
    NotSic(f64),

    #[error("tensor factors {n1} and {n2} must be odd and coprime")]
    BadTensorFactors { n1: u64, n2: u64 },

    #[error("dimension {0} is not of the form 3(3k+1) with d odd and d > 3")]
    NotInFamily(u64),

    #[error("block decomposition failed: {0}")]
    Decomposition(String),
}
