use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero ideal unsupported")]
    ZeroIdeal,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("ambient dimension must be at least 1")]
    ZeroDimension,
    #[error("infinite colength: ideal is not m-primary")]
    InfiniteColength,
    #[error("not m-primary: {0}")]
    NotPrimary(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("at least 3 sequence terms are required, got {0}")]
    TooFewTerms(usize),
    #[error("no Noetherian period verified: best candidate s={best}, first failure at i={first_failure}")]
    NoPeriod { best: u64, first_failure: u64 },
    #[error("filtration has no verified period; raise check_bound and rerun noetherian_period")]
    UnverifiedPeriod,
    #[error("sample matrix is singular")]
    SingularSystem,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
