use thiserror::Error;

use crate::constraints::ParseError;
use crate::report::ValidationReport;
use crate::timeline::Tick;

/// Errors raised by kernel operations.
///
/// Axiom violations are not errors; they are collected in a
/// [`ValidationReport`]. Only malformed input and refused operations land here.
#[derive(Debug, Error)]
pub enum KernelError {
    #[error("unknown object type `{0}`")]
    UnknownObjectType(String),

    #[error("object type `{otype}` has no unique top (candidates: {candidates:?})")]
    NonUniqueTop {
        otype: String,
        candidates: Vec<String>,
    },

    #[error("no fact type gives role `{role}` to `{otype}`")]
    UnknownRole { otype: String, role: String },

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("runs overlap or are out of order at tick {0}")]
    OverlappingRuns(Tick),

    #[error("run ends at {end} before it starts at {start}")]
    InvertedRun { start: Tick, end: Tick },

    #[error("empty tick interval")]
    EmptyInterval,

    #[error("unknown element `{0}`")]
    UnknownElement(String),

    #[error("element `{0}` already exists")]
    DuplicateElement(String),

    #[error("two events at tick {0}")]
    DuplicateEvent(Tick),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("event rejected: {} violation(s)", .0.errors().count())]
    RejectedEvent(ValidationReport),

    #[error("no valid history found after {0} attempts")]
    GenerationExhausted(usize),

    #[error("generation bounds exceeded: {0}")]
    BoundsExceeded(String),

    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T, E = KernelError> = std::result::Result<T, E>;
