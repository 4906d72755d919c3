//! Fast-growing complexity classes `F_β` for bounds of the form `g_{ω^α}`.
//!
//! A control `g ∈ F_{<γ}` and a complexity `g_{ω^α}` give the class
//! `F_{γ+α}`. The index `γ` assigned to each control family is data, kept
//! in [`CONTROL_CLASS_TABLE`].

use std::fmt;

use crate::error::{Error, Result};
use crate::hierarchy::ControlFunction;
use crate::ordinal::Ordinal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Milestone {
    Tower,
    Ack,
    HAck,
}

impl fmt::Display for Milestone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Milestone::Tower => "Tower",
            Milestone::Ack => "Ack",
            Milestone::HAck => "HAck",
        })
    }
}

impl Milestone {
    pub fn at(index: &Ordinal) -> Option<Milestone> {
        let omega = Ordinal::omega();
        if *index == Ordinal::finite(3u32) {
            Some(Milestone::Tower)
        } else if *index == omega {
            Some(Milestone::Ack)
        } else if *index == Ordinal::omega_pow(omega) {
            Some(Milestone::HAck)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexityClass {
    pub index: Ordinal,
    pub milestone: Option<Milestone>,
}

impl ComplexityClass {
    /// `F_3`, `F_{w+1}`
    pub fn label(&self) -> String {
        let idx: String = self.index.to_string().split_whitespace().collect();
        if idx.chars().count() == 1 {
            format!("F_{idx}")
        } else {
            format!("F_{{{idx}}}")
        }
    }
}

impl fmt::Display for ComplexityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())?;
        match self.milestone {
            Some(m) => write!(f, " = {m}"),
            None => Ok(()),
        }
    }
}

/// Families of controls and the index `γ` with `g ∈ F_{<γ}` used for them.
/// Every affine control gets `γ = 1`, so lexicographic `ℕ^d` with a linear
/// control lands in `F_{d+1}`.
pub const CONTROL_CLASS_TABLE: &[(&str, u64)] =
    &[("succ", 1), ("add", 1), ("mul", 1), ("affine", 1)];

pub fn control_class_index(g: &ControlFunction) -> Ordinal {
    let family = match g {
        ControlFunction::Successor => "succ",
        ControlFunction::AddConstant(_) => "add",
        ControlFunction::MulConstant(_) => "mul",
        ControlFunction::Affine { .. } => "affine",
    };
    let gamma = CONTROL_CLASS_TABLE
        .iter()
        .find(|(name, _)| *name == family)
        .map(|(_, g)| *g)
        .expect("every family is in the table");
    Ordinal::finite(gamma)
}

pub fn ordinal_add(a: &Ordinal, b: &Ordinal) -> Ordinal {
    a.add(b)
}

/// `F_{γ+α}` for a complexity `g_{ω^α}` with `g ∈ F_{<γ}`.
pub fn classify_bound(gamma: &Ordinal, alpha: &Ordinal) -> Result<ComplexityClass> {
    if gamma.is_zero() {
        return Err(Error::PreconditionViolated(
            "the control index must be at least 1".into(),
        ));
    }
    let index = ordinal_add(gamma, alpha);
    let milestone = Milestone::at(&index);
    let class = ComplexityClass { index, milestone };
    if class.index < Ordinal::finite(3u32) {
        return Err(Error::IndexTooSmall(format!(
            "{} is below F_3",
            class.label()
        )));
    }
    Ok(class)
}

/// The least `α'` with `ω^{α'} ≥ α`.
pub fn round_up_exponent(alpha: &Ordinal) -> Ordinal {
    let Some(e) = alpha.leading_exponent() else {
        return Ordinal::zero();
    };
    if *alpha == Ordinal::omega_pow(e.clone()) {
        e.clone()
    } else {
        e.add(&Ordinal::one())
    }
}

/// Class of a complexity `g_α` for arbitrary `α`, rounding `α` up to an
/// ω-power first. The flag tells whether no rounding was needed.
pub fn classify_complexity(
    g: &ControlFunction,
    alpha: &Ordinal,
) -> Result<(ComplexityClass, bool)> {
    let exponent = round_up_exponent(alpha);
    let exact = Ordinal::omega_pow(exponent.clone()) == *alpha;
    Ok((classify_bound(&control_class_index(g), &exponent)?, exact))
}
