use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("group order {p}^{n} exceeds the supported range")]
    Overflow { p: u64, n: u32 },
    #[error("subgroup level {0} is out of range")]
    BadLevel(usize),
    #[error("subgroup level {lower} is not contained in level {upper}")]
    NotSubgroup { lower: usize, upper: usize },
    #[error("ill-defined homomorphism: {0}")]
    IllDefined(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("group is infinite")]
    Infinite,
    #[error("enumeration cap of {0} exceeded")]
    CapExceeded(usize),
    #[error("not an automorphism: {0}")]
    NotAutomorphism(String),
    #[error("group contexts differ")]
    ContextMismatch,
    #[error("slot collision while placing a monomial: {0}")]
    SlotCollision(String),
    #[error("expansion depth guard tripped")]
    DepthGuard,
    #[error("consistency failure: {0}")]
    Consistency(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
