use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("rank must be at least 2, got {0}")]
    InvalidRank(usize),

    #[error("generator index {index} out of range 1..={rank}")]
    InvalidGenerator { index: usize, rank: usize },

    #[error("the empty word has no normalized logarithm")]
    EmptyWord,

    #[error("enumerating length {length} at rank {rank} visits about {estimate:.3e} words; raise the cap to proceed")]
    EnumerationTooLarge {
        rank: usize,
        length: usize,
        estimate: f64,
    },

    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("function has a pole at u = {0}")]
    Pole(String),

    #[error("power sum S_{k}({m}) is not an integer: {value}")]
    NonIntegerPowerSum { k: usize, m: usize, value: String },

    #[error("cannot parse word: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
