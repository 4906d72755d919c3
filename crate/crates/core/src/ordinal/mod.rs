//! Ordinal terms below ε₀ in strict Cantor normal form.
//!
//! An [`Ordinal`] is a list of `(exponent, coefficient)` summands with
//! strictly decreasing exponents and coefficients at least 1; the empty list
//! is zero. Exponents are ordinals themselves, so the representation nests.
//! Every constructor normalizes, which makes structural equality coincide
//! with ordinal equality.

mod enumerate;
mod text;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::Nat;

pub use enumerate::DEFAULT_ENUMERATION_CAP;
pub use text::{parse, parse_with_options, ParseOptions, Parsed, DEFAULT_MAX_DEPTH};

/// Default step budget for [`Ordinal::predecessor`].
pub const DEFAULT_STEP_BUDGET: u64 = 1_000_000;

/// One summand `ω^exponent · coefficient` of a Cantor normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Summand {
    pub exponent: Ordinal,
    pub coefficient: Nat,
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    summands: Vec<Summand>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrdinalKind {
    Zero,
    Successor,
    Limit,
}

impl fmt::Display for OrdinalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrdinalKind::Zero => "zero",
            OrdinalKind::Successor => "successor",
            OrdinalKind::Limit => "limit",
        })
    }
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal::default()
    }

    pub fn one() -> Self {
        Ordinal::finite(1u32)
    }

    pub fn finite(n: impl Into<Nat>) -> Self {
        let n = n.into();
        if n.is_zero() {
            return Ordinal::zero();
        }
        Ordinal {
            summands: vec![Summand {
                exponent: Ordinal::zero(),
                coefficient: n,
            }],
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `ω^exponent`.
    pub fn omega_pow(exponent: Ordinal) -> Self {
        Ordinal::monomial(exponent, 1u32)
    }

    /// `ω^exponent · coefficient`; zero when the coefficient is zero.
    pub fn monomial(exponent: Ordinal, coefficient: impl Into<Nat>) -> Self {
        let coefficient = coefficient.into();
        if coefficient.is_zero() {
            return Ordinal::zero();
        }
        Ordinal {
            summands: vec![Summand {
                exponent,
                coefficient,
            }],
        }
    }

    /// Builds a term from summands given in any order, read as a commutative
    /// sum: zero coefficients are dropped, summands are sorted by decreasing
    /// exponent and equal exponents are merged. The flag reports whether the
    /// input was already in strict normal form.
    pub fn from_summands(parts: Vec<(Ordinal, Nat)>) -> (Self, bool) {
        let mut canonical = true;
        let mut prev: Option<&Ordinal> = None;
        for (e, c) in &parts {
            if c.is_zero() || prev.is_some_and(|p| p <= e) {
                canonical = false;
            }
            prev = Some(e);
        }
        let mut parts = parts;
        parts.retain(|(_, c)| !c.is_zero());
        // stable, so equal exponents stay adjacent for merging
        parts.sort_by(|a, b| b.0.cmp(&a.0));
        let mut summands: Vec<Summand> = Vec::with_capacity(parts.len());
        for (exponent, coefficient) in parts {
            match summands.last_mut() {
                Some(last) if last.exponent == exponent => last.coefficient += coefficient,
                _ => summands.push(Summand {
                    exponent,
                    coefficient,
                }),
            }
        }
        (Ordinal { summands }, canonical)
    }

    /// Builds a term from summands that must already be in strict CNF.
    pub(crate) fn from_strict(summands: Vec<Summand>) -> Self {
        let o = Ordinal { summands };
        debug_assert!(o.is_strict_cnf(), "not in strict CNF: {o}");
        o
    }

    pub fn summands(&self) -> &[Summand] {
        &self.summands
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.summands.iter().all(|s| s.exponent.is_zero())
    }

    pub fn as_finite(&self) -> Option<Nat> {
        match self.summands.as_slice() {
            [] => Some(Nat::zero()),
            [s] if s.exponent.is_zero() => Some(s.coefficient.clone()),
            _ => None,
        }
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.summands.first().map(|s| &s.exponent)
    }

    /// Nesting depth of exponents: 0 for finite terms, 1 below ω^ω, ...
    pub fn depth(&self) -> usize {
        self.summands
            .iter()
            .filter(|s| !s.exponent.is_zero())
            .map(|s| 1 + s.exponent.depth())
            .max()
            .unwrap_or(0)
    }

    /// Checks the strict CNF invariants recursively.
    pub fn is_strict_cnf(&self) -> bool {
        self.summands
            .windows(2)
            .all(|w| w[0].exponent > w[1].exponent)
            && self
                .summands
                .iter()
                .all(|s| !s.coefficient.is_zero() && s.exponent.is_strict_cnf())
    }

    pub fn kind(&self) -> OrdinalKind {
        match self.summands.last() {
            None => OrdinalKind::Zero,
            Some(s) if s.exponent.is_zero() => OrdinalKind::Successor,
            Some(_) => OrdinalKind::Limit,
        }
    }

    /// Maximal coefficient occurring anywhere in the normal form; 0 for 0.
    pub fn norm(&self) -> Nat {
        self.summands
            .iter()
            .map(|s| std::cmp::max(s.coefficient.clone(), s.exponent.norm()))
            .max()
            .unwrap_or_default()
    }

    /// Splits `γ + k` into `γ` and the finite tail `k` (possibly 0).
    pub fn split_finite(&self) -> (Ordinal, Nat) {
        match self.summands.last() {
            Some(s) if s.exponent.is_zero() => {
                let head = self.summands[..self.summands.len() - 1].to_vec();
                (Ordinal { summands: head }, s.coefficient.clone())
            }
            _ => (self.clone(), Nat::zero()),
        }
    }

    /// `α − 1` for a successor `α`.
    fn strip_one(&self) -> Ordinal {
        let mut summands = self.summands.clone();
        let last = summands.last_mut().expect("successor is non-zero");
        debug_assert!(last.exponent.is_zero());
        last.coefficient -= 1u32;
        if last.coefficient.is_zero() {
            summands.pop();
        }
        Ordinal { summands }
    }

    /// The `x`-th element `λ(x)` of the standard fundamental sequence:
    /// `(γ+ω^{β+1})(x) = γ+ω^β·(x+1)` and `(γ+ω^λ)(x) = γ+ω^{λ(x)}`.
    pub fn fundamental(&self, x: &Nat) -> Result<Ordinal> {
        if self.kind() != OrdinalKind::Limit {
            return Err(Error::NotALimit(self.to_string()));
        }
        let mut summands = self.summands.clone();
        let last = summands.pop().expect("limit is non-zero");
        if last.coefficient > Nat::one() {
            summands.push(Summand {
                exponent: last.exponent.clone(),
                coefficient: &last.coefficient - 1u32,
            });
        }
        let beta = last.exponent;
        match beta.kind() {
            OrdinalKind::Successor => summands.push(Summand {
                exponent: beta.strip_one(),
                coefficient: x + 1u32,
            }),
            OrdinalKind::Limit => summands.push(Summand {
                exponent: beta.fundamental(x)?,
                coefficient: Nat::one(),
            }),
            OrdinalKind::Zero => unreachable!("limit has a non-zero last exponent"),
        }
        Ok(Ordinal::from_strict(summands))
    }

    /// `P_x(α)`: descend through fundamental sequences at `x` until a
    /// successor is reached, then remove one.
    pub fn predecessor(&self, x: &Nat) -> Result<Ordinal> {
        self.predecessor_with_budget(x, DEFAULT_STEP_BUDGET)
    }

    pub fn predecessor_with_budget(&self, x: &Nat, max_steps: u64) -> Result<Ordinal> {
        let mut steps = 0;
        self.predecessor_counting(x, &mut steps, max_steps)
    }

    pub(crate) fn predecessor_counting(
        &self,
        x: &Nat,
        steps: &mut u64,
        max_steps: u64,
    ) -> Result<Ordinal> {
        // only the last summand changes, so descend in place
        let mut summands = self.summands.clone();
        loop {
            let Some(last) = summands.pop() else {
                return Err(Error::ZeroHasNoPredecessor);
            };
            if last.coefficient > Nat::one() {
                summands.push(Summand {
                    exponent: last.exponent.clone(),
                    coefficient: &last.coefficient - 1u32,
                });
            }
            let beta = last.exponent;
            match beta.kind() {
                OrdinalKind::Zero => return Ok(Ordinal { summands }),
                OrdinalKind::Successor => summands.push(Summand {
                    exponent: beta.strip_one(),
                    coefficient: x + 1u32,
                }),
                OrdinalKind::Limit => summands.push(Summand {
                    exponent: beta.fundamental(x)?,
                    coefficient: Nat::one(),
                }),
            }
            *steps += 1;
            if *steps > max_steps {
                return Err(Error::BudgetExceeded {
                    what: "predecessor steps",
                    consumed: *steps - 1,
                });
            }
        }
    }

    /// The largest `β < α` with `Nβ ≤ x`. Requires `Nα ≤ x`, under which it
    /// coincides with the predecessor `P_x(α)`.
    pub fn max_below_with_norm(&self, x: &Nat) -> Result<Ordinal> {
        if self.norm() > *x {
            return Err(Error::PreconditionViolated(format!(
                "norm of {self} is {} > {x}",
                self.norm()
            )));
        }
        self.predecessor(x)
    }

    /// All `β < α` with `Nβ ≤ x`, sorted ascending.
    pub fn enumerate_below(&self, x: &Nat) -> Result<Vec<Ordinal>> {
        enumerate::enumerate_below(self, x, DEFAULT_ENUMERATION_CAP)
    }

    pub fn enumerate_below_capped(&self, x: &Nat, cap: u64) -> Result<Vec<Ordinal>> {
        enumerate::enumerate_below(self, x, cap)
    }

    /// Ordinal addition: summands of `self` below the leading exponent of
    /// `other` are absorbed.
    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = other.summands.first() else {
            return self.clone();
        };
        let mut summands: Vec<Summand> = self
            .summands
            .iter()
            .take_while(|s| s.exponent >= lead.exponent)
            .cloned()
            .collect();
        match summands.last_mut() {
            Some(last) if last.exponent == lead.exponent => {
                last.coefficient += &lead.coefficient;
                summands.extend(other.summands[1..].iter().cloned());
            }
            _ => summands.extend(other.summands.iter().cloned()),
        }
        Ordinal::from_strict(summands)
    }

    /// Ordinal multiplication, distributing on the right operand.
    pub fn mul(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = self.summands.first() else {
            return Ordinal::zero();
        };
        let mut acc = Ordinal::zero();
        for s in &other.summands {
            let part = if s.exponent.is_zero() {
                let mut summands = self.summands.clone();
                summands[0].coefficient = &lead.coefficient * &s.coefficient;
                Ordinal::from_strict(summands)
            } else {
                Ordinal::monomial(lead.exponent.add(&s.exponent), s.coefficient.clone())
            };
            acc = acc.add(&part);
        }
        acc
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.summands.iter().zip(&other.summands) {
            let ord = a
                .exponent
                .cmp(&b.exponent)
                .then_with(|| a.coefficient.cmp(&b.coefficient));
            if ord != Ordering::Equal {
                return ord;
            }
        }
        self.summands.len().cmp(&other.summands.len())
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Ordinal {
    fn from(n: u64) -> Self {
        Ordinal::finite(n)
    }
}

impl From<BigUint> for Ordinal {
    fn from(n: BigUint) -> Self {
        Ordinal::finite(n)
    }
}

/// Decides `β ⪯_x α`, the reflexive closure of `γ ≺_x γ+1` and
/// `λ(x) ≺_x λ`. The strict relation is `pointwise_leq && β != α`.
///
/// Runs in time polynomial in the size of the terms, using two facts about
/// the chain below `α`: the chain from `γ + ω^δ` passes through `γ`, and the
/// pure powers `ω^ε` on the chain from `ω^δ` are exactly those with
/// `ε ⪯_x δ`, each `ω^{ε+1}` being followed by `ω^ε·(x+1)`.
pub fn pointwise_leq(beta: &Ordinal, alpha: &Ordinal, x: &Nat) -> bool {
    let (b, mut a) = (&beta.summands[..], &alpha.summands[..]);
    loop {
        match cmp_summands(b, a) {
            Ordering::Equal => return true,
            Ordering::Greater => return false,
            Ordering::Less => {}
        }
        let (last, gamma) = a.split_last().expect("α > β ≥ 0");
        if cmp_summands(b, gamma) == Ordering::Less {
            a = gamma;
            continue;
        }
        // β = γ + ω^δ·c' + r with c' < c and r < ω^δ
        let mut rest = &b[gamma.len()..];
        if rest.first().is_some_and(|s| s.exponent == last.exponent) {
            rest = &rest[1..];
        }
        return below_power(rest, &last.exponent, x);
    }
}

/// `r ⪯_x ω^δ` for `r < ω^δ`.
fn below_power(r: &[Summand], delta: &Ordinal, x: &Nat) -> bool {
    let Some((first, s)) = r.split_first() else {
        return true;
    };
    let e = &first.exponent;
    if pointwise_leq(&e.add(&Ordinal::one()), delta, x) {
        // the chain passes ω^e·(x+1), then ω^e·k + t for k ≤ x, t ⪯_x ω^e
        if first.coefficient <= *x {
            below_power(s, e, x)
        } else {
            first.coefficient == x + 1u32 && s.is_empty()
        }
    } else {
        first.coefficient.is_one() && s.is_empty() && pointwise_leq(e, delta, x)
    }
}

fn cmp_summands(a: &[Summand], b: &[Summand]) -> Ordering {
    for (s, t) in a.iter().zip(b) {
        let o = s
            .exponent
            .cmp(&t.exponent)
            .then_with(|| s.coefficient.cmp(&t.coefficient));
        if o != Ordering::Equal {
            return o;
        }
    }
    a.len().cmp(&b.len())
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        text::write_ordinal(self, f)
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl std::str::FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s).map(|p| p.value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn n(v: u64) -> Nat {
        Nat::from(v)
    }

    #[test]
    fn compare_examples() {
        assert_eq!(Ordinal::zero().cmp(&Ordinal::zero()), Ordering::Equal);
        assert_eq!(o("w").cmp(&o("5")), Ordering::Greater);
        assert_eq!(o("w^w*2").cmp(&o("w^w*2 + 1")), Ordering::Less);
        assert!(o("w^2") > o("w*100 + 100"));
        assert!(o("w^(w+1)") > o("w^w*7"));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(Ordinal::zero().norm(), n(0));
        assert_eq!(o("w^2*3 + w*5 + 2").norm(), n(5));
        assert_eq!(o("w^(w*2)").norm(), n(2));
        assert_eq!(o("w^(w^4)").norm(), n(4));
    }

    #[test]
    fn kind_examples() {
        assert_eq!(Ordinal::zero().kind(), OrdinalKind::Zero);
        assert_eq!(o("w^3 + 1").kind(), OrdinalKind::Successor);
        assert_eq!(o("w^w").kind(), OrdinalKind::Limit);
    }

    #[test]
    fn fundamental_examples() {
        assert_eq!(o("w").fundamental(&n(3)).unwrap(), o("4"));
        assert_eq!(o("w^w").fundamental(&n(2)).unwrap(), o("w^3"));
        for x in 0..6u64 {
            let lam = o("w^(w^4) + w^(w^3 + w^2)");
            let expected = o(&format!("w^(w^4) + w^(w^3 + w*{})", x + 1));
            assert_eq!(lam.fundamental(&n(x)).unwrap(), expected);
        }
        assert_eq!(o("w*3").fundamental(&n(0)).unwrap(), o("w*2 + 1"));
        assert!(matches!(
            o("w + 1").fundamental(&n(1)),
            Err(Error::NotALimit(_))
        ));
        assert!(matches!(
            Ordinal::zero().fundamental(&n(1)),
            Err(Error::NotALimit(_))
        ));
    }

    #[test]
    fn predecessor_examples() {
        assert_eq!(o("w^2 + w + 1").predecessor(&n(9)).unwrap(), o("w^2 + w"));
        for x in 0..10u64 {
            let expected = Ordinal::omega()
                .mul(&Ordinal::finite(x))
                .add(&Ordinal::finite(x));
            assert_eq!(o("w^2").predecessor(&n(x)).unwrap(), expected);
        }
        assert_eq!(o("w*2").predecessor(&n(3)).unwrap(), o("w + 3"));
        assert_eq!(
            Ordinal::zero().predecessor(&n(1)),
            Err(Error::ZeroHasNoPredecessor)
        );
        assert!(o("w^w")
            .predecessor_with_budget(&n(50), 10)
            .unwrap_err()
            .is_budget());
    }

    #[test]
    fn max_below_examples() {
        assert_eq!(o("w^2").max_below_with_norm(&n(2)).unwrap(), o("w*2 + 2"));
        assert_eq!(o("5").max_below_with_norm(&n(9)).unwrap(), o("4"));
        assert_eq!(o("w").max_below_with_norm(&n(4)).unwrap(), o("4"));
        assert!(matches!(
            o("w*7").max_below_with_norm(&n(3)),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn pointwise_examples() {
        let x = n(3);
        let a = o("w^2 + 3");
        assert!(pointwise_leq(&a, &a, &x));
        assert!(pointwise_leq(&o("4"), &o("w"), &x));
        assert!(!pointwise_leq(&o("5"), &o("w"), &x));
        assert!(pointwise_leq(&o("w*3 + 3"), &o("w^2"), &x));
        assert!(pointwise_leq(&o("w*4"), &o("w^2"), &x));
        assert!(!pointwise_leq(&o("w*5"), &o("w^2"), &x));
        assert!(!pointwise_leq(&o("w^2"), &o("w*5"), &x));
        assert!(pointwise_leq(&Ordinal::zero(), &o("w^w"), &n(1)));
        assert!(pointwise_leq(&o("w^(w^3*3)"), &o("w^(w^4)*2 + 1"), &n(2)));
        assert!(!pointwise_leq(&o("w^(w^3*4)"), &o("w^(w^4)*2 + 1"), &n(2)));
    }

    /// Walks `α, …` down the chain one element at a time.
    fn walk_leq(beta: &Ordinal, alpha: &Ordinal, x: &Nat, max_steps: u64) -> Option<bool> {
        let mut cur = alpha.clone();
        for _ in 0..max_steps {
            match cur.cmp(beta) {
                Ordering::Equal => return Some(true),
                Ordering::Less => return Some(false),
                Ordering::Greater => {}
            }
            cur = match cur.kind() {
                OrdinalKind::Limit => cur.fundamental(x).unwrap(),
                _ => cur.strip_one(),
            };
        }
        None
    }

    #[test]
    fn pointwise_matches_the_walk() {
        // every pair below ω^3 with coefficients ≤ 3, plus a few towers
        let mut terms = Vec::new();
        for a in 0..=3u32 {
            for b in 0..=3u32 {
                for c in 0..=3u32 {
                    let parts = vec![
                        (o("2"), n(a.into())),
                        (o("1"), n(b.into())),
                        (o("0"), n(c.into())),
                    ];
                    terms.push(Ordinal::from_summands(parts).0);
                }
            }
        }
        terms.extend(
            [
                "w^w",
                "w^w + w^3",
                "w^(w+1)",
                "w^(w*2)*2 + w^4*3",
                "w^(w^2)",
            ]
            .map(o),
        );
        for x in 0..=3 {
            for a in &terms {
                for b in &terms {
                    if let Some(want) = walk_leq(b, a, &n(x), 20_000) {
                        assert_eq!(pointwise_leq(b, a, &n(x)), want, "{b} vs {a} at {x}");
                    }
                }
            }
        }
    }

    #[test]
    fn addition_and_product() {
        assert_eq!(o("3").add(&o("w")), o("w"));
        assert_eq!(o("w").add(&o("3")), o("w + 3"));
        assert_eq!(o("w^2 + w").add(&o("w^2")), o("w^2*2"));
        assert_eq!(o("2").mul(&o("w")), o("w"));
        assert_eq!(o("w").mul(&o("2")), o("w*2"));
        assert_eq!(o("w + 1").mul(&o("w + 1")), o("w^2 + w + 1"));
        assert_eq!(o("w^2").mul(&o("w^w")), o("w^w"));
        assert_eq!(o("w*2 + 3").mul(&o("3")), o("w*6 + 3"));
    }

    #[test]
    fn from_summands_reports_non_canonical_input() {
        let (a, canonical) =
            Ordinal::from_summands(vec![(Ordinal::one(), n(1)), (Ordinal::one(), n(1))]);
        assert!(!canonical);
        assert_eq!(a, o("w*2"));
        let (b, canonical) =
            Ordinal::from_summands(vec![(Ordinal::one(), n(2)), (Ordinal::zero(), n(1))]);
        assert!(canonical);
        assert_eq!(b, o("w*2 + 1"));
    }
}
