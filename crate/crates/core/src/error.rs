use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid pair ({i}, {j}) for n = {n}")]
    InvalidPair { i: usize, j: usize, n: usize },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid ranking: {0}")]
    InvalidRanking(String),

    #[error("invalid move: {0}")]
    InvalidMove(String),

    #[error("n = {n} exceeds the resource guard ({guard})")]
    ResourceLimit { n: usize, guard: usize },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("empty input: {0}")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
