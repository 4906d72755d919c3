//! Control functions and the Hardy and Cichoń hierarchies.
//!
//! `h^0(x) = x`, `h^α(x) = h^{P_x(α)}(h(x))` and `h_0(x) = 0`,
//! `h_α(x) = 1 + h_{P_x(α)}(h(x))`. Finite tails `γ + k` are consumed in one
//! step using the closed form of `h^k`, which keeps the step count
//! proportional to the number of limit descents instead of the value.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ordinal::{Ordinal, OrdinalKind};
use crate::Nat;

/// A monotone and expansive function `ℕ → ℕ` from a closed family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ControlFunction {
    /// `x + 1`
    Successor,
    /// `x + k`, `k ≥ 1`
    AddConstant(u64),
    /// `k·x`, `k ≥ 2`
    MulConstant(u64),
    /// `a·x + b`, `a ≥ 1`, `a + b ≥ 2`
    Affine { a: u64, b: u64 },
}

impl ControlFunction {
    pub fn add(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidControl("add:k needs k >= 1".into()));
        }
        Ok(ControlFunction::AddConstant(k))
    }

    pub fn mul(k: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidControl("mul:k needs k >= 2".into()));
        }
        Ok(ControlFunction::MulConstant(k))
    }

    pub fn affine(a: u64, b: u64) -> Result<Self> {
        if a == 0 || a.saturating_add(b) < 2 {
            return Err(Error::InvalidControl(
                "affine:a:b needs a >= 1 and a + b >= 2".into(),
            ));
        }
        Ok(ControlFunction::Affine { a, b })
    }

    /// `(a, b)` with `g(x) = a·x + b`.
    pub fn coefficients(&self) -> (u64, u64) {
        match *self {
            ControlFunction::Successor => (1, 1),
            ControlFunction::AddConstant(k) => (1, k),
            ControlFunction::MulConstant(k) => (k, 0),
            ControlFunction::Affine { a, b } => (a, b),
        }
    }

    /// `x ↦ d·g(x)`, which stays in the family for `d ≥ 1`.
    pub fn scaled(&self, d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidControl("0·g is not expansive".into()));
        }
        if d == 1 {
            return Ok(*self);
        }
        let (a, b) = self.coefficients();
        let (a, b) = (
            a.checked_mul(d)
                .ok_or_else(|| Error::InvalidControl("scaled coefficient overflows".into()))?,
            b.checked_mul(d)
                .ok_or_else(|| Error::InvalidControl("scaled coefficient overflows".into()))?,
        );
        if b == 0 {
            ControlFunction::mul(a)
        } else {
            ControlFunction::affine(a, b)
        }
    }

    pub fn apply(&self, x: &Nat) -> Nat {
        let (a, b) = self.coefficients();
        x * a + b
    }

    /// `g^i(x)` in closed form.
    pub fn iterate(&self, i: &Nat, x: &Nat, budget: &EvalBudget) -> Result<Nat> {
        let (a, b) = self.coefficients();
        let out = if a == 1 {
            x + i * b
        } else if x.is_zero() && b == 0 {
            Nat::zero()
        } else {
            // a^i·x + b·(a^i − 1)/(a − 1)
            let log2_a = 64 - u64::from(a.leading_zeros()) - 1;
            let too_big = i
                .to_u64()
                .and_then(|i| i.checked_mul(log2_a))
                .is_none_or(|bits| bits > budget.max_value_bits);
            if too_big {
                return Err(Error::BudgetExceeded {
                    what: "value bits",
                    consumed: budget.max_value_bits,
                });
            }
            let pow = if a.is_power_of_two() {
                let shift = i.to_u64().expect("bounded by max_value_bits") * log2_a;
                BigUint::one() << shift
            } else {
                BigUint::from(a).pow(i.to_u32().expect("bounded by max_value_bits"))
            };
            if b == 0 {
                pow * x
            } else {
                let geometric = (&pow - 1u32) / (a - 1);
                pow * x + geometric * b
            }
        };
        budget.check_bits(&out)?;
        Ok(out)
    }
}

impl fmt::Display for ControlFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ControlFunction::Successor => f.write_str("succ"),
            ControlFunction::AddConstant(k) => write!(f, "add:{k}"),
            ControlFunction::MulConstant(k) => write!(f, "mul:{k}"),
            ControlFunction::Affine { a, b } => write!(f, "affine:{a}:{b}"),
        }
    }
}

impl FromStr for ControlFunction {
    type Err = Error;

    /// `succ`, `add:k`, `mul:k`, `affine:a:b`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::InvalidControl(format!("bad number {t:?} in {s:?}")))
        };
        match parts.as_slice() {
            ["succ"] => Ok(ControlFunction::Successor),
            ["add", k] => ControlFunction::add(num(k)?),
            ["mul", k] => ControlFunction::mul(num(k)?),
            ["affine", a, b] => ControlFunction::affine(num(a)?, num(b)?),
            _ => Err(Error::InvalidControl(format!(
                "{s:?}: expected succ, add:k, mul:k or affine:a:b"
            ))),
        }
    }
}

pub const DEFAULT_MAX_STEPS: u64 = 10_000_000;
pub const DEFAULT_MAX_VALUE_BITS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalBudget {
    pub max_recursion_steps: u64,
    pub max_value_bits: u64,
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget {
            max_recursion_steps: DEFAULT_MAX_STEPS,
            max_value_bits: DEFAULT_MAX_VALUE_BITS,
        }
    }
}

impl EvalBudget {
    pub fn new(max_recursion_steps: u64, max_value_bits: u64) -> Result<Self> {
        if max_recursion_steps == 0 || max_value_bits == 0 {
            return Err(Error::PreconditionViolated(
                "budgets must be at least 1".into(),
            ));
        }
        Ok(EvalBudget {
            max_recursion_steps,
            max_value_bits,
        })
    }

    pub(crate) fn check_bits(&self, v: &Nat) -> Result<()> {
        if v.bits() > self.max_value_bits {
            return Err(Error::BudgetExceeded {
                what: "value bits",
                consumed: v.bits(),
            });
        }
        Ok(())
    }
}

struct Stepper {
    steps: u64,
    max: u64,
}

impl Stepper {
    fn new(budget: &EvalBudget) -> Self {
        Stepper {
            steps: 0,
            max: budget.max_recursion_steps,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.max {
            return Err(Error::BudgetExceeded {
                what: "recursion steps",
                consumed: self.steps - 1,
            });
        }
        Ok(())
    }
}

/// Drives the shared predecessor recursion. `on_iterations(k, rest, x)` is
/// called before `h` is applied `k` more times to `x`, with `rest` the index
/// left after a finite tail (0 at limit steps); returning `false` stops early. Without `want_value` the
/// final finite tail is only counted. Returns `(k, y)` with `h^α(x) = h^k(y)`
/// where `k` is the unapplied tail.
fn descend(
    h: &ControlFunction,
    alpha: &Ordinal,
    x: &Nat,
    budget: &EvalBudget,
    want_value: bool,
    mut on_iterations: impl FnMut(&Nat, &Ordinal, &Nat) -> bool,
) -> Result<(Nat, Nat)> {
    let mut alpha = alpha.clone();
    let mut x = x.clone();
    let mut steps = Stepper::new(budget);
    while !alpha.is_zero() {
        steps.tick()?;
        let (gamma, k) = alpha.split_finite();
        if !k.is_zero() {
            // h^{γ+k}(x) = h^γ(h^k(x))
            if !on_iterations(&k, &gamma, &x) {
                break;
            }
            if !want_value && gamma.is_zero() {
                return Ok((k, x));
            }
            x = h.iterate(&k, &x, budget)?;
            alpha = gamma;
        } else {
            if !on_iterations(&Nat::one(), &Ordinal::zero(), &x) {
                break;
            }
            alpha = alpha.predecessor_counting(&x, &mut steps.steps, steps.max)?;
            x = h.apply(&x);
            budget.check_bits(&x)?;
        }
    }
    Ok((Nat::zero(), x))
}

/// Hardy function `h^α(x)`, by the predecessor recursion.
pub fn hardy(h: &ControlFunction, alpha: &Ordinal, x: &Nat, budget: &EvalBudget) -> Result<Nat> {
    Ok(descend(h, alpha, x, budget, true, |_, _, _| true)?.1)
}

/// `(k, y)` with `h^α(x) = h^k(y)`: the Hardy recursion with its final
/// finite tail left unapplied, for values too large to write out.
pub fn hardy_deferred(
    h: &ControlFunction,
    alpha: &Ordinal,
    x: &Nat,
    budget: &EvalBudget,
) -> Result<(Nat, Nat)> {
    descend(h, alpha, x, budget, false, |_, _, _| true)
}

/// Hardy function by the fundamental-sequence recursion
/// `h^{α+1}(x) = h^α(h(x))`, `h^λ(x) = h^{λ(x)}(x)`; kept as a second route.
pub fn hardy_by_fundamental(
    h: &ControlFunction,
    alpha: &Ordinal,
    x: &Nat,
    budget: &EvalBudget,
) -> Result<Nat> {
    let mut alpha = alpha.clone();
    let mut x = x.clone();
    let mut steps = Stepper::new(budget);
    loop {
        steps.tick()?;
        match alpha.kind() {
            OrdinalKind::Zero => return Ok(x),
            OrdinalKind::Successor => {
                let (gamma, k) = alpha.split_finite();
                x = h.iterate(&k, &x, budget)?;
                alpha = gamma;
            }
            OrdinalKind::Limit => alpha = alpha.fundamental(&x)?,
        }
    }
}

/// Cichoń function `h_α(x)`: the number of applications of `h` performed
/// while computing `h^α(x)`.
pub fn cichon(h: &ControlFunction, alpha: &Ordinal, x: &Nat, budget: &EvalBudget) -> Result<Nat> {
    let mut count = Nat::zero();
    let mut overflow = false;
    descend(h, alpha, x, budget, false, |k, _, _| {
        count += k;
        if count.bits() > budget.max_value_bits {
            overflow = true;
            return false;
        }
        true
    })?;
    if overflow {
        return Err(Error::BudgetExceeded {
            what: "value bits",
            consumed: count.bits(),
        });
    }
    Ok(count)
}

/// Whether `h_α(x) ≥ threshold`. Stops as soon as the running count reaches
/// the threshold, so it also answers when `h_α(x)` itself is far too large
/// to evaluate. Before a tail `h^k(y)` followed by an index `γ ≥ ω` it uses
/// `h_γ(z) ≥ h_ω(z) = z + 1` for `z ≥ 1`, with `z = h^k(y)` bounded below
/// without evaluating it.
pub fn cichon_at_least(
    h: &ControlFunction,
    alpha: &Ordinal,
    x: &Nat,
    threshold: &Nat,
    budget: &EvalBudget,
) -> Result<bool> {
    let (a, b) = h.coefficients();
    let omega = Ordinal::omega();
    let mut count = Nat::zero();
    let mut reached = false;
    descend(h, alpha, x, budget, false, |k, rest, y| {
        count += k;
        if count >= *threshold {
            reached = true;
        } else if *rest >= omega && (!y.is_zero() || b > 0) {
            // z ≥ max(1, y + k·b) for a = 1, z ≥ a^(k−1) ≥ 2^(k−1) otherwise
            let z_low = if a == 1 {
                y + k * b
            } else if *k > Nat::from(threshold.bits() + 1) {
                threshold.clone()
            } else {
                Nat::zero()
            };
            reached = &count + z_low + 1u32 >= *threshold;
        }
        !reached
    })?;
    Ok(reached || count >= *threshold)
}

/// Checks `h^α(x) = h^{h_α(x)}(x)`.
pub fn hardy_via_cichon_check(
    h: &ControlFunction,
    alpha: &Ordinal,
    x: &Nat,
    budget: &EvalBudget,
) -> Result<bool> {
    let lhs = hardy(h, alpha, x, budget)?;
    debug_assert_eq!(
        {
            let (k, y) = hardy_deferred(h, alpha, x, budget)?;
            h.iterate(&k, &y, budget)?
        },
        lhs
    );
    let count = cichon(h, alpha, x, budget)?;
    let rhs = h.iterate(&count, x, budget)?;
    Ok(lhs == rhs)
}
