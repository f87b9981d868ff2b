use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },

    #[error("unknown generator `{name}` at byte {offset}")]
    UnknownGenerator { name: String, offset: usize },

    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),

    #[error("generator `{0}` has no image under the substitution")]
    UnmappedGenerator(String),

    #[error("generator `{0}` is not covered by the variable set")]
    UncoveredGenerator(String),

    #[error("duplicate variable index x{0}")]
    DuplicateVariable(u32),

    #[error("series is not a unit: constant term is {0}")]
    NonUnit(String),

    #[error("bracket tree repeats leaf x{0}")]
    RepeatedLeaf(u32),

    #[error("expression is not a bracket of generators: {0}")]
    NotABracket(String),

    #[error("linear combination is inconsistent: {0}")]
    Inconsistent(String),

    #[error("inadmissible substitution: {0}")]
    Inadmissible(String),

    #[error("division by zero at {0}")]
    Pole(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("unknown equation label ({0})")]
    UnknownLabel(u8),

    #[error("malformed input: {0}")]
    Malformed(String),
}
