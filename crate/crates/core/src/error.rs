use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("request of {requested} table entries exceeds the budget of {budget}")]
    BudgetExceeded { requested: u64, budget: u64 },

    #[error("{value} is outside the sieved range 1..={limit}")]
    OutOfRange { value: u64, limit: u64 },

    #[error("modulus {q} exceeds the configured cap {cap}")]
    ModulusTooLarge { q: u64, cap: u64 },

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("unsupported modulus {q}: {reason}")]
    UnsupportedModulus { q: u64, reason: &'static str },

    #[error("gamma function pole at {0}")]
    GammaPole(i64),

    #[error("discrepancy undefined: no integer passed the filter with sigma(n) coprime to q")]
    EmptyCensus,

    #[error("construction overflows 64 bits: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
