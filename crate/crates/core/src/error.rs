use thiserror::Error;

/// Errors raised by engine operations.
///
/// Property failures are never errors: they come back as a failing
/// [`Verdict`](crate::Verdict). Errors are reserved for malformed input,
/// violated preconditions and exhausted work budgets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("presentation did not close within {bound} composition steps")]
    NotFinitelyClosed { bound: usize },
    #[error("not a poset: {0}")]
    NotAPoset(String),
    #[error("not a topology: {0}")]
    NotATopology(String),
    #[error("category is not lex: {0}")]
    NotLex(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("no pullback of `{f}` along `{g}`")]
    MissingPullback { f: String, g: String },
    #[error("triangle does not commute for `{0}`")]
    TriangleDoesNotCommute(String),
    #[error("work limit of {limit} search nodes exceeded")]
    WorkLimit { limit: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
