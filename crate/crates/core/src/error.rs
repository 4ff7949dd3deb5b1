use thiserror::Error;

use crate::verifier::Report;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {message}")]
    Syntax { pos: usize, message: String },

    /// A marked vertex has an unmarked child.
    #[error("invalid marks: {0}")]
    InvalidMarks(String),

    #[error("no vertex at {0}")]
    InvalidVertex(String),

    /// An operation would have produced a mark set that is not descendant-closed.
    #[error("closure violation: {0}")]
    ClosureViolation(String),

    #[error("expected {expected}, found `{found}`")]
    WrongKind { expected: &'static str, found: String },

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    /// The case budget ran out; `partial` records what was checked before the cutoff.
    #[error("resource limit reached after {} cases", partial.cases_checked)]
    ResourceLimit { partial: Box<Report> },
}
