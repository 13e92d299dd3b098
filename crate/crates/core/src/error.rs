use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Input outside the domain an operation is defined on.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("triple (m={m}, r={r}, lambda={lambda}) is not admissible")]
    Inadmissible { m: u64, r: u64, lambda: u64 },

    #[error("parameters are outside the region the planner covers: {0}")]
    OutOfScope(String),

    #[error("necessary conditions fail: {0}")]
    ConditionsFail(String),

    #[error("no amalgam plan found: {0}")]
    PlanNotFound(String),

    #[error("invalid interval system: {0}")]
    InvalidSystem(String),

    /// A computed object failed one of its own invariants; this is a bug.
    #[error("internal invariant broken: {0}")]
    Invariant(String),

    #[error("value {0} does not fit in a machine integer")]
    Overflow(String),

    /// Search ran out of nodes or options. Never a proof of nonexistence.
    #[error("not found at desk scale after {nodes} nodes ({reason})")]
    SearchExhausted { nodes: u64, reason: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
