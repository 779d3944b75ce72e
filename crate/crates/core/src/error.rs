use thiserror::Error;

use crate::root_system::Weight;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid root system type ({series}, {rank})")]
    InvalidType { series: String, rank: usize },

    #[error("rank mismatch: expected {expected} coordinates, got {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("weight {0} is not dominant")]
    NotDominant(Weight),

    #[error("weight {weight} is {p}-singular: <{weight}+rho, coroot {coroot:?}> = {pairing}")]
    Singular {
        weight: Weight,
        p: i64,
        /// Coroot in simple-coroot coordinates.
        coroot: Vec<i64>,
        pairing: i64,
    },

    #[error("{0} is not a prime")]
    NotPrime(i64),

    #[error("no decomposition {weight} = w.0 + p*xi with w finite and xi dominant")]
    NoFiniteDecomposition { weight: Weight },

    #[error("generator index {index} out of range for rank {rank}")]
    BadGenerator { index: usize, rank: usize },

    #[error("word {word:?} is not reduced")]
    NotReduced { word: Vec<u8> },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("cache format: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
