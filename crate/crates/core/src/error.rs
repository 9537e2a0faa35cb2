use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime in 3..=251")]
    InvalidPrime(u32),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("fields differ: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("|GL({n},{p})| = {size} exceeds the enumeration budget {budget}")]
    SearchSpaceTooLarge { n: usize, p: u32, size: u128, budget: u128 },

    #[error("invalid triple: {0}")]
    InvalidTat(String),

    #[error("K + Vf is the whole exterior square, nothing left to amalgamate")]
    AmalgamObstruction,

    #[error("bad commutator map: {0}")]
    BadGamma(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("endomorphism is not bijective")]
    NotBijective,

    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}
