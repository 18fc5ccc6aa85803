use thiserror::Error;

use crate::circuit::VertexId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("circuit contains a directed cycle")]
    Cycle,
    #[error("malformed circuit: {0}")]
    Malformed(String),
    #[error("vertex {0} does not exist")]
    UnknownVertex(VertexId),
    #[error("variable leaf `{0}` in a circuit that must be constant")]
    VariableLeaf(String),
    #[error("variable `{0}` used as a factor; substitute a value first")]
    VariableFactor(String),
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("circuit is not certified as {0}")]
    MissingCertificate(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("vertex budget exceeded: {vertices} > {limit}")]
    VertexBudget { vertices: usize, limit: usize },
    #[error("invalid circuit file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Result of an operation on constant circuits that may leave the integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome<T> {
    Proper(T),
    /// Some vertex would need a negative exponent, so the value is not an integer.
    Improper,
}

impl<T> Outcome<T> {
    pub fn proper(self) -> Option<T> {
        match self {
            Outcome::Proper(t) => Some(t),
            Outcome::Improper => None,
        }
    }

    pub fn is_proper(&self) -> bool {
        matches!(self, Outcome::Proper(_))
    }

    pub fn is_improper(&self) -> bool {
        !self.is_proper()
    }

    #[track_caller]
    pub fn expect_proper(self, msg: &str) -> T {
        match self {
            Outcome::Proper(t) => t,
            Outcome::Improper => panic!("{msg}: circuit is improper"),
        }
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Outcome<U> {
        match self {
            Outcome::Proper(t) => Outcome::Proper(f(t)),
            Outcome::Improper => Outcome::Improper,
        }
    }
}
