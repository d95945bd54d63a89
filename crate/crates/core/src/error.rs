use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("prime index must be at least {min}, got {got}")]
    IndexTooSmall { min: usize, got: usize },

    #[error("{what} = {required} exceeds the configured guard of {limit}")]
    GuardExceeded {
        what: String,
        required: String,
        limit: u64,
    },

    #[error("{value} is not a unit residue modulo {modulus}")]
    NotUnit { value: u64, modulus: u64 },

    #[error("expected an even number, got {0}")]
    OddTarget(u64),

    #[error("even target must be at least {min}, got {got}")]
    TargetTooSmall { min: u64, got: u64 },

    #[error("invalid window: length {window} over a period of {period}")]
    InvalidWindow { window: u64, period: u64 },

    #[error("grid side {side} exceeds the maximum of {max}")]
    GridTooLarge { side: usize, max: usize },

    #[error("sieve covers [2, {have}] but {needed} is required")]
    SieveTooSmall { needed: u64, have: u64 },

    #[error("prime cache: {0}")]
    CacheFormat(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
