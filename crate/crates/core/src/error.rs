use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("character {value} at position {position} is outside alphabet of size {sigma}")]
    CharacterOutOfAlphabet {
        position: usize,
        value: u32,
        sigma: u32,
    },
    #[error("position {0} out of bounds for text of length {1}")]
    OutOfBounds(i64, usize),
    #[error("block of {len} characters needs {bits} bits, more than one machine word")]
    BlockTooLong { len: usize, bits: u64 },
    #[error("empty pattern")]
    EmptyPattern,
    #[error("tau {tau} too large for text of length {n}")]
    TauTooLarge { tau: usize, n: usize },
    #[error("runs are not neighboring")]
    NotNeighboring,
    #[error("runs have different periods")]
    PeriodMismatch,
    #[error("runs have different Lyndon roots")]
    RootMismatch,
    #[error("missing root representation for a pyramid generator run")]
    MissingRepresentation,
    #[error("no synchronizing position in window [{lo}..{hi}]")]
    EmptyWindow { lo: usize, hi: usize },
    #[error("k={k} exceeds the number of distinct squares {total}")]
    KTooLarge { k: u64, total: u64 },
    #[error("power exponent must be at least 3, got {0}")]
    InvalidExponent(u64),
    #[error("input of length {n} exceeds oracle cap {cap}")]
    InputTooLarge { n: usize, cap: usize },
    #[error("bad packed file: {0}")]
    BadFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
