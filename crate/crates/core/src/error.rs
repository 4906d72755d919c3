use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a limit ordinal")]
    NotALimit(String),

    #[error("zero has no predecessor")]
    ZeroHasNoPredecessor,

    /// A step, node, cardinality or bit budget ran out. `consumed` is the
    /// amount of the budget used when evaluation stopped.
    #[error("budget exceeded: {what} (consumed {consumed})")]
    BudgetExceeded { what: &'static str, consumed: u64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("not a well order: {0}")]
    NotAWellOrder(String),

    #[error("invalid control function: {0}")]
    InvalidControl(String),

    #[error("nondeterminism encountered: {0}")]
    Nondeterminism(String),

    #[error("complexity index too small: {0}")]
    IndexTooSmall(String),

    #[error("invalid program: {0}")]
    Program(String),
}

impl Error {
    pub(crate) fn syntax(pos: usize, msg: impl Into<String>) -> Self {
        Error::Syntax {
            pos,
            msg: msg.into(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
