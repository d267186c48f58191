use guk_core::{Error as EngineError, Witness};
use thiserror::Error;

use crate::syntax::Pos;

/// Everything that can go wrong between reading a document and producing a
/// report. All variants map to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("parse error at {line}:{col}: expected {}, found {found}", expected.join(" or "))]
    Parse {
        line: usize,
        col: usize,
        expected: Vec<String>,
        found: String,
    },
    #[error("name `{name}` at {at} clashes with the definition at {first}")]
    NameClash { name: String, at: Pos, first: Pos },
    #[error("unresolved {kind} `{name}` at {at}")]
    UnresolvedReference { kind: String, name: String, at: Pos },
    #[error("item `{item}` failed validation: {witness}")]
    ValidationFailed { item: String, witness: Witness },
    #[error("in `{item}`: {source}")]
    Engine {
        item: String,
        #[source]
        source: EngineError,
    },
    #[error(transparent)]
    Command(#[from] EngineError),
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("invalid GUK_MAX_WORK value `{0}`")]
    BadWorkLimit(String),
}

impl DslError {
    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            DslError::Parse { .. } => "ParseError",
            DslError::NameClash { .. } => "NameClash",
            DslError::UnresolvedReference { .. } => "UnresolvedReference",
            DslError::ValidationFailed { .. } => "ValidationFailed",
            DslError::Engine { source, .. } | DslError::Command(source) => engine_kind(source),
            DslError::Io { .. } => "Io",
            DslError::BadWorkLimit(_) => "BadWorkLimit",
        }
    }
}

pub fn engine_kind(e: &EngineError) -> &'static str {
    match e {
        EngineError::UnknownObject(_) => "UnknownObject",
        EngineError::UnknownMorphism(_) => "UnknownMorphism",
        EngineError::Malformed(_) => "Malformed",
        EngineError::NotFinitelyClosed { .. } => "NotFinitelyClosed",
        EngineError::NotAPoset(_) => "NotAPoset",
        EngineError::NotATopology(_) => "NotATopology",
        EngineError::NotLex(_) => "NotLex",
        EngineError::PreconditionFailed(_) => "PreconditionFailed",
        EngineError::MissingPullback { .. } => "MissingPullback",
        EngineError::TriangleDoesNotCommute(_) => "TriangleDoesNotCommute",
        EngineError::WorkLimit { .. } => "WorkLimit",
    }
}
