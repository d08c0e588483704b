use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("enumeration budget exceeded: {needed} candidates > budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid net: {0}")]
    InvalidNet(String),
    #[error("malformed net: {0}")]
    MalformedNet(String),
    #[error("inequality violated: {0}")]
    InequalityViolated(String),
    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),
}
