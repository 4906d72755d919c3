use std::collections::HashMap;
use std::rc::Rc;

use num_traits::One;

use super::{Ordinal, Summand};
use crate::error::{Error, Result};
use crate::Nat;

/// Default bound on the size of any list built by `enumerate_below`.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

struct Ctx<'a> {
    x: &'a Nat,
    cap: u64,
    // terms below ω^e, keyed by e
    powers: HashMap<Ordinal, Rc<Vec<Ordinal>>>,
}

impl Ctx<'_> {
    fn check(&self, len: usize) -> Result<()> {
        if len as u64 > self.cap {
            return Err(Error::BudgetExceeded {
                what: "enumeration cardinality",
                consumed: len as u64,
            });
        }
        Ok(())
    }

    fn below_power(&mut self, e: &Ordinal) -> Result<Rc<Vec<Ordinal>>> {
        if let Some(v) = self.powers.get(e) {
            return Ok(v.clone());
        }
        if e.is_zero() {
            return Ok(Rc::new(vec![Ordinal::zero()]));
        }
        let v = Rc::new(self.below(&Ordinal::omega_pow(e.clone()))?);
        self.powers.insert(e.clone(), v.clone());
        Ok(v)
    }

    /// Terms `β < α` with `Nβ ≤ x`, generated in ascending order: zero, then
    /// by leading exponent, leading coefficient and tail.
    fn below(&mut self, alpha: &Ordinal) -> Result<Vec<Ordinal>> {
        let Some((lead, rest)) = alpha.summands.split_first() else {
            return Ok(Vec::new());
        };
        let x = self.x;
        let mut out = vec![Ordinal::zero()];

        // leading exponent strictly below α's
        for e in self.below(&lead.exponent)? {
            let tails = self.below_power(&e)?;
            let mut d = Nat::one();
            while d <= *x {
                for t in tails.iter() {
                    out.push(prepend(&e, &d, t));
                }
                self.check(out.len())?;
                d += 1u32;
            }
        }

        // same leading exponent, smaller coefficient, or equal coefficient
        // and a smaller tail
        if lead.exponent.norm() <= *x {
            // what has been generated so far is exactly the terms below ω^e
            let tails = out.clone();
            let mut d = Nat::one();
            while d < lead.coefficient && d <= *x {
                for t in tails.iter() {
                    out.push(prepend(&lead.exponent, &d, t));
                }
                self.check(out.len())?;
                d += 1u32;
            }
            if lead.coefficient <= *x {
                let rest = Ordinal {
                    summands: rest.to_vec(),
                };
                for t in self.below(&rest)? {
                    out.push(prepend(&lead.exponent, &lead.coefficient, &t));
                }
                self.check(out.len())?;
            }
        }
        debug_assert!(out.windows(2).all(|w| w[0] < w[1]));
        Ok(out)
    }
}

fn prepend(e: &Ordinal, d: &Nat, tail: &Ordinal) -> Ordinal {
    let mut summands = Vec::with_capacity(tail.summands.len() + 1);
    summands.push(Summand {
        exponent: e.clone(),
        coefficient: d.clone(),
    });
    summands.extend(tail.summands.iter().cloned());
    Ordinal::from_strict(summands)
}

pub(super) fn enumerate_below(alpha: &Ordinal, x: &Nat, cap: u64) -> Result<Vec<Ordinal>> {
    let mut ctx = Ctx {
        x,
        cap,
        powers: HashMap::new(),
    };
    ctx.below(alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn list(v: &[&str]) -> Vec<Ordinal> {
        v.iter().map(|s| o(s)).collect()
    }

    #[test]
    fn examples() {
        assert_eq!(
            o("3").enumerate_below(&Nat::from(10u32)).unwrap(),
            list(&["0", "1", "2"])
        );
        assert_eq!(
            o("w").enumerate_below(&Nat::from(2u32)).unwrap(),
            list(&["0", "1", "2"])
        );
        assert_eq!(
            o("w^2").enumerate_below(&Nat::from(1u32)).unwrap(),
            list(&["0", "1", "w", "w + 1"])
        );
        assert!(Ordinal::zero()
            .enumerate_below(&Nat::from(5u32))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn respects_bound_coefficients() {
        // below ω·2+1 with norm ≤ 1: 0, 1, ω, ω+1, ω·2 is excluded (norm 2)
        assert_eq!(
            o("w*2 + 1").enumerate_below(&Nat::from(1u32)).unwrap(),
            list(&["0", "1", "w", "w + 1"])
        );
        assert_eq!(
            o("w*2 + 1")
                .enumerate_below(&Nat::from(2u32))
                .unwrap()
                .last(),
            Some(&o("w*2"))
        );
    }

    #[test]
    fn cap_is_enforced() {
        let err = o("w^3")
            .enumerate_below_capped(&Nat::from(20u32), 1000)
            .unwrap_err();
        assert!(err.is_budget());
    }
}
