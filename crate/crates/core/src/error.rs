use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{a} is not invertible modulo {p}")]
    NonInvertible { a: i64, p: u64 },
    #[error("index order violated: {0}")]
    IndexOrder(String),
    #[error("no repeated state within {limit} steps")]
    ScanExhausted { limit: u64 },
    #[error("table has {got} entries but {needed} are required")]
    TableTooShort { needed: u64, got: u64 },
    #[error("every prime up to {bound} passed the LP check")]
    NotFoundWithinBound { bound: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
