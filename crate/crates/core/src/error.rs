use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("field: {0}")]
    Field(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("polynomial {poly} has a term t^{exponent} whose exponent is not divisible by {p}")]
    NotPthPower { poly: String, exponent: usize, p: u32 },

    #[error("dfao: {0}")]
    Dfao(String),

    #[error("substitution: {0}")]
    Substitution(String),

    #[error("christol: {0}")]
    Christol(String),

    #[error("normalize: {0}")]
    Normalize(String),

    #[error("synthesize: {0}")]
    Synthesize(String),

    #[error("engine: {0}")]
    Engine(String),
}
