//! Deterministic execution that fires runs of a self-loop in one block.
//!
//! A self-loop qualifies when each variable is kept, translated
//! (`v := v + c`), scaled (`v := a·v + b`, `a ≥ 2`) or reset to a constant,
//! and every variable read by its guard, or by the guard of another
//! transition leaving the same location, is kept or translated. Each guard
//! is then linear in the iteration count `j`, so the length of the block and
//! the absence of competing transitions follow from interval arithmetic.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Configuration, Constraint, Rel, Transition, TransitionSystem};
use crate::error::{Error, Result};
use crate::Nat;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunCaps {
    pub max_blocks: u64,
    /// Largest bit length of any variable value.
    pub max_bits: u64,
}

impl Default for RunCaps {
    fn default() -> Self {
        RunCaps {
            max_blocks: 1_000_000,
            max_bits: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub transition: usize,
    pub count: Nat,
    /// Configuration after the block.
    pub after: Configuration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccelRun {
    pub start: Configuration,
    pub blocks: Vec<Block>,
    pub steps: Nat,
    pub halted: bool,
}

impl AccelRun {
    pub fn final_config(&self) -> &Configuration {
        self.blocks.last().map_or(&self.start, |b| &b.after)
    }
}

#[derive(Debug, Clone)]
enum Shape {
    Keep,
    Translate(BigInt),
    Scale(BigInt, BigInt),
    Reset(BigInt),
}

fn shapes(t: &Transition, k: usize) -> Option<Vec<Shape>> {
    let mut out = vec![Shape::Keep; k];
    for (v, e) in &t.updates {
        out[*v] = match e.terms.as_slice() {
            [] => Shape::Reset(e.constant.clone()),
            [(u, a)] if u == v && a.is_one() => {
                if e.constant.is_zero() {
                    Shape::Keep
                } else {
                    Shape::Translate(e.constant.clone())
                }
            }
            [(u, a)] if u == v && *a >= BigInt::from(2) => {
                Shape::Scale(a.clone(), e.constant.clone())
            }
            _ => return None,
        };
    }
    Some(out)
}

/// `{ j ≥ 0 : e0 + d·j rel 0 }` as `[lo, hi]` (`hi = None` for unbounded),
/// or `None` when empty.
fn solutions(e0: &BigInt, d: &BigInt, rel: Rel) -> Option<(BigInt, Option<BigInt>)> {
    let (e0, d, rel) = match rel {
        Rel::Lt => (-e0 - 1, -d, Rel::Ge),
        Rel::Le => (-e0, -d, Rel::Ge),
        Rel::Gt => (e0 - 1, d.clone(), Rel::Ge),
        r => (e0.clone(), d.clone(), r),
    };
    if d.is_zero() {
        return rel.holds(&e0).then(|| (BigInt::zero(), None));
    }
    match rel {
        Rel::Eq => {
            let (q, r) = (-&e0).div_rem(&d);
            (r.is_zero() && !q.is_negative()).then(|| (q.clone(), Some(q)))
        }
        Rel::Ge if d.is_positive() => {
            let lo = (-&e0).div_ceil(&d);
            Some((lo.max(BigInt::zero()), None))
        }
        Rel::Ge => {
            if e0.is_negative() {
                None
            } else {
                Some((BigInt::zero(), Some(e0.div_floor(&-d))))
            }
        }
        _ => unreachable!("normalized above"),
    }
}

/// Values of the guard-relevant variables at iteration `j` are
/// `v + j·c`; returns the joint solution interval of `guard`, or `Err(())`
/// when some guard variable is not kept or translated.
fn guard_interval(
    guard: &[Constraint],
    values: &[BigInt],
    shapes: &[Shape],
) -> std::result::Result<Option<(BigInt, Option<BigInt>)>, ()> {
    let mut lo = BigInt::zero();
    let mut hi: Option<BigInt> = None;
    for c in guard {
        let mut d = BigInt::zero();
        for (v, a) in &c.expr.terms {
            match &shapes[*v] {
                Shape::Keep => {}
                Shape::Translate(step) => d += a * step,
                _ => return Err(()),
            }
        }
        let Some((l, h)) = solutions(&c.expr.eval(values), &d, c.rel) else {
            return Ok(None);
        };
        lo = lo.max(l);
        hi = match (hi, h) {
            (None, h) => h,
            (h, None) => h,
            (Some(a), Some(b)) => Some(a.min(b)),
        };
        if hi.as_ref().is_some_and(|h| *h < lo) {
            return Ok(None);
        }
    }
    Ok(Some((lo, hi)))
}

fn apply_block(
    values: &[BigInt],
    shapes: &[Shape],
    m: &BigInt,
    caps: &RunCaps,
) -> Result<Vec<BigInt>> {
    let over = |bits: u64| Error::BudgetExceeded {
        what: "variable bits",
        consumed: bits,
    };
    values
        .iter()
        .zip(shapes)
        .map(|(v, s)| {
            let out = match s {
                Shape::Keep => v.clone(),
                Shape::Translate(c) => v + m * c,
                Shape::Reset(c) => c.clone(),
                Shape::Scale(a, b) => {
                    // a^m·v + b·(a^m − 1)/(a − 1)
                    let log2 = a.bits() - 1;
                    let m64 = m
                        .to_u64()
                        .filter(|m| m.saturating_mul(log2) <= caps.max_bits);
                    let m64 = m64.ok_or_else(|| over(caps.max_bits))?;
                    let pow = if a.magnitude().count_ones() == 1 {
                        BigInt::one() << (m64 * log2)
                    } else {
                        let m32 = u32::try_from(m64).map_err(|_| over(caps.max_bits))?;
                        num_traits::pow::Pow::pow(a, m32)
                    };
                    let geometric = if b.is_zero() {
                        BigInt::zero()
                    } else {
                        (&pow - 1) / (a - 1) * b
                    };
                    pow * v + geometric
                }
            };
            if out.bits() > caps.max_bits {
                return Err(over(out.bits()));
            }
            Ok(out)
        })
        .collect()
}

/// Runs `sys` deterministically from `c0`, collapsing qualifying runs of a
/// self-loop into blocks. Stops after `max_blocks` blocks.
pub fn run_accelerated(
    sys: &TransitionSystem,
    c0: &Configuration,
    caps: &RunCaps,
) -> Result<AccelRun> {
    sys.validate(c0)?;
    let k = sys.variables.len();
    let mut cur = c0.clone();
    let mut blocks = Vec::new();
    let mut steps = Nat::zero();
    while (blocks.len() as u64) < caps.max_blocks {
        let Some((ti, next)) = sys.step_deterministic(&cur)? else {
            return Ok(AccelRun {
                start: c0.clone(),
                blocks,
                steps,
                halted: true,
            });
        };
        let t = &sys.transitions[ti];
        let block = if t.source == t.target {
            block_length(sys, ti, &cur, k)
        } else {
            None
        };
        let (count, after) = match block {
            Some((m, shapes)) if m > BigInt::one() => {
                let values = apply_block(&cur.values, &shapes, &m, caps)?;
                let count = m.to_biguint().expect("positive");
                (
                    count,
                    Configuration {
                        location: t.target,
                        values,
                    },
                )
            }
            _ => {
                if let Some(v) = next.values.iter().find(|v| v.bits() > caps.max_bits) {
                    return Err(Error::BudgetExceeded {
                        what: "variable bits",
                        consumed: v.bits(),
                    });
                }
                (BigUint::one(), next)
            }
        };
        steps += &count;
        blocks.push(Block {
            transition: ti,
            count,
            after: after.clone(),
        });
        cur = after;
    }
    let halted = sys.step(&cur)?.is_empty();
    Ok(AccelRun {
        start: c0.clone(),
        blocks,
        steps,
        halted,
    })
}

/// Number of consecutive firings of self-loop `ti` from `c` before its guard
/// fails or another transition becomes enabled; `None` when the loop does
/// not qualify or never stops.
fn block_length(
    sys: &TransitionSystem,
    ti: usize,
    c: &Configuration,
    k: usize,
) -> Option<(BigInt, Vec<Shape>)> {
    let t = &sys.transitions[ti];
    let shapes = shapes(t, k)?;
    // the loop's own guard holds on [0, hi]
    let (_, hi) = guard_interval(&t.guard, &c.values, &shapes).ok()??;
    let mut m = hi? + 1;
    for (oi, other) in sys.transitions.iter().enumerate() {
        if oi == ti || other.source != t.source {
            continue;
        }
        match guard_interval(&other.guard, &c.values, &shapes).ok()? {
            Some((lo, _)) if lo < m => m = lo,
            _ => {}
        }
    }
    Some((m, shapes))
}
