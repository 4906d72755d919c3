//! Ordinal notations below ε₀, Hardy and Cichoń hierarchies, length
//! functions of controlled bad sequences, ranking-function checks for
//! integer transition systems, and fast-growing complexity classification.
//!
//! Module map:
//!
//! * [`ordinal`]: Cantor normal forms, norms, fundamental sequences,
//!   predecessors, pointwise ordering, text syntax.
//! * [`hierarchy`]: control functions and the Hardy/Cichoń hierarchies.
//! * [`wqo`]: normed well quasi orders built from a closed set of constructors.
//! * [`lengths`]: exact length functions by tree search and by the ordinal
//!   descent equation, with cross-checks against the Cichoń hierarchy.
//! * [`termination`]: guarded-command programs and termination argument checks.
//! * [`classify`]: fast-growing complexity classes.

pub mod classify;
pub mod error;
pub mod hierarchy;
pub mod lengths;
pub mod ordinal;
pub mod termination;
pub mod wqo;

pub use error::{Error, Result};
pub use hierarchy::{ControlFunction, EvalBudget};
pub use ordinal::{Ordinal, OrdinalKind};
pub use wqo::{Element, Space};

/// Arbitrary-precision natural number.
pub type Nat = num_bigint::BigUint;

/// Outcome of a bounded verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails,
    /// A budget ran out before the answer was known.
    Inconclusive(String),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    /// Maps budget errors to `Inconclusive` and passes other errors through.
    pub fn from_result(r: Result<bool>) -> Result<Self> {
        match r {
            Ok(b) => Ok(Verdict::from_bool(b)),
            Err(e) if e.is_budget() => Ok(Verdict::Inconclusive(e.to_string())),
            Err(e) => Err(e),
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Holds => f.write_str("pass"),
            Verdict::Fails => f.write_str("fail"),
            Verdict::Inconclusive(_) => f.write_str("inconclusive"),
        }
    }
}

/// Shorthand used throughout the tests.
pub fn nat(n: u64) -> Nat {
    Nat::from(n)
}
