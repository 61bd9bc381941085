use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at column {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("degree {0} is below -3; the dimension count is not defined there")]
    DegreeTooNegative(i64),

    #[error("cannot intersect a quadric class with a plane class; convert first")]
    MixedSurfaces,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("prime {p} is too small for degree {d} (need p > {d})")]
    PrimeTooSmall { p: u64, d: i64 },

    #[error("prime {0} must be below 2^32")]
    PrimeTooLarge(u64),

    #[error("negative degree or multiplicity in {0}; the oracle needs d >= 0 and m_i >= 0")]
    NegativeEntries(String),

    #[error("point sampling failed after {0} attempts")]
    Sampling(usize),

    #[error("sweep range out of bounds: {0}")]
    SweepRange(String),

    #[error("invariant breach: {0}")]
    Invariant(String),
}
