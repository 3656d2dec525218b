use thiserror::Error;

/// Errors shared by the whole crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("alphabet mismatch: `{0}` vs `{1}`")]
    AlphabetMismatch(String, String),

    #[error("state `{state}` is not deterministic on `{letter}`")]
    NotDeterministic { state: String, letter: String },

    #[error("automaton has ε-transitions where none are allowed")]
    UnexpectedEpsilon,

    #[error("accepting ε-cycle through {0:?}")]
    EpsOmega(Vec<String>),

    #[error("state `{0}` has no outgoing transition")]
    DeadEnd(String),

    #[error("priority {priority} exceeds index {index}")]
    PriorityOutOfRange { priority: u32, index: u32 },

    #[error("invalid structure: {0}")]
    Invalid(String),

    #[error("signature arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("search budget exceeded after {0} candidates")]
    BudgetExceeded(u64),

    #[error("no certificate with at most {0} memory states")]
    ExceedsKMax(u32),

    #[error("value too large to materialise ({0} decimal digits)")]
    TooLarge(u64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
