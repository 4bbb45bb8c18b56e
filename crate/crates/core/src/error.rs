use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{line}: duplicate generator `{name}`")]
    DuplicateGenerator { line: usize, name: String },

    #[error("{line}: duplicate rule id `{id}`")]
    DuplicateRule { line: usize, id: String },

    #[error("{line}: unknown generator `{name}`")]
    UnknownGenerator { line: usize, name: String },

    #[error("{line}: rule `{id}` has an empty left-hand side")]
    EmptyLhs { line: usize, id: String },

    #[error("cannot read `{input}` as a word: {reason}")]
    BadWord { input: String, reason: String },

    #[error("unknown rule `{0}`")]
    UnknownRule(String),

    #[error("rule `{rule}` does not match at position {pos}")]
    MatchFailure { rule: String, pos: usize },

    #[error("boundary mismatch: expected `{expected}`, found `{found}`")]
    BoundaryMismatch { expected: String, found: String },

    #[error("steps {index} and {next} overlap and cannot be exchanged", next = .index + 1)]
    Overlap { index: usize },

    #[error("step index {index} out of range for a path of {len} steps")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("fuel exhausted after {0} steps")]
    FuelExhausted(usize),

    #[error("presentation is not terminating under its order: {}", .rules.join(", "))]
    NotTerminating { rules: Vec<String> },

    #[error("critical branching at `{overlap}` is not confluent: normal forms `{left}` and `{right}`")]
    NotConfluent {
        overlap: String,
        left: String,
        right: String,
    },

    #[error("presentation is not convergent; run completion first")]
    NotConvergent,

    #[error("cannot orient `{lhs}` = `{rhs}` with the given order")]
    Unorientable { lhs: String, rhs: String },

    #[error("{0}")]
    Precondition(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
