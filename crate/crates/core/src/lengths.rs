//! Length functions of controlled bad sequences.
//!
//! Three routes to `L_{g,A}(n)`: exhaustive search over the tree of
//! controlled bad sequences (any space), the descent equation over ordinals
//! (`length_wo_dp`), and the Cichoń hierarchy. The `verify_*` functions
//! compare them.

use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::hierarchy::{cichon, cichon_at_least, ControlFunction, EvalBudget};
use crate::ordinal::Ordinal;
use crate::wqo::{Element, Space, DEFAULT_ELEMENT_CAP};
use crate::{Nat, Verdict};

pub const DEFAULT_MAX_NODES: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchCaps {
    /// Tree nodes visited by `length_search`.
    pub max_nodes: u64,
    /// Size of any single candidate or level set.
    pub max_elements: u64,
    pub eval: EvalBudget,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps {
            max_nodes: DEFAULT_MAX_NODES,
            max_elements: DEFAULT_ELEMENT_CAP,
            eval: EvalBudget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlledSequence {
    pub space: Space,
    pub control: ControlFunction,
    pub initial_norm: Nat,
    pub items: Vec<Element>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthResult {
    pub length: Nat,
    /// The lexicographically least bad sequence of maximal length, in the
    /// order of `elements_up_to`.
    pub witness: ControlledSequence,
    pub nodes_explored: u64,
    /// `false` when the node cap stopped the search; `length` is then only a
    /// lower bound.
    pub exact: bool,
}

/// No `i < j` with `items[i] ≤ items[j]`.
pub fn is_bad(space: &Space, items: &[Element]) -> Result<bool> {
    for e in items {
        space.validate(e)?;
    }
    Ok(items
        .iter()
        .enumerate()
        .all(|(i, a)| items[i + 1..].iter().all(|b| !space.leq_unchecked(a, b))))
}

/// `|x_i| ≤ g^i(n_0)` for every index.
pub fn is_controlled(seq: &ControlledSequence) -> Result<bool> {
    let mut bound = seq.initial_norm.clone();
    for e in &seq.items {
        if seq.space.norm_of(e)? > bound {
            return Ok(false);
        }
        bound = seq.control.apply(&bound);
    }
    Ok(true)
}

/// Exact `L_{g,A}(n0)` by depth-first search over the prefix tree of
/// `(g, n0)`-controlled bad sequences.
pub fn length_search(
    space: &Space,
    control: &ControlFunction,
    n0: &Nat,
    caps: &SearchCaps,
) -> Result<LengthResult> {
    let mut levels: Vec<Vec<Element>> = Vec::new();
    let mut bound = n0.clone();
    let mut items: Vec<Element> = Vec::new();
    let mut cursor: Vec<usize> = vec![0];
    let mut best: Vec<Element> = Vec::new();
    let mut nodes = 0u64;
    let mut exact = true;

    'search: while let Some(&start) = cursor.last() {
        let depth = items.len();
        if levels.len() == depth {
            caps.eval.check_bits(&bound)?;
            levels.push(space.elements_up_to_capped(&bound, caps.max_elements)?);
            bound = control.apply(&bound);
        }
        let candidates = &levels[depth];
        let next = (start..candidates.len()).find(|&k| {
            items
                .iter()
                .all(|x| !space.leq_unchecked(x, &candidates[k]))
        });
        match next {
            Some(k) => {
                nodes += 1;
                if nodes > caps.max_nodes {
                    exact = false;
                    nodes -= 1;
                    break 'search;
                }
                *cursor.last_mut().expect("non-empty") = k + 1;
                items.push(candidates[k].clone());
                cursor.push(0);
                if items.len() > best.len() {
                    best = items.clone();
                }
            }
            None => {
                cursor.pop();
                items.pop();
            }
        }
    }

    Ok(LengthResult {
        length: Nat::from(best.len()),
        witness: ControlledSequence {
            space: space.clone(),
            control: *control,
            initial_norm: n0.clone(),
            items: best,
        },
        nodes_explored: nodes,
        exact,
    })
}

/// Exact `L_{g,α}(n0)` from the descent equation
/// `L_{g,α}(n) = max_{β<α, Nβ≤n} 1 + L_{g,β}(g(n))`, evaluated over
/// enumerations of norm-bounded ordinals only.
pub fn length_wo_dp(
    alpha: &Ordinal,
    control: &ControlFunction,
    n0: &Nat,
    caps: &SearchCaps,
) -> Result<Nat> {
    // Level i+1 holds every β below the largest element of level i with
    // Nβ ≤ g^i(n0); it contains all candidates for every element of level i.
    let mut levels: Vec<Vec<Ordinal>> = vec![vec![alpha.clone()]];
    let mut bound = n0.clone();
    let mut total = 1u64;
    loop {
        let top = levels
            .last()
            .and_then(|l| l.last())
            .expect("non-empty level");
        caps.eval.check_bits(&bound)?;
        let next = top.enumerate_below_capped(&bound, caps.max_elements)?;
        if next.is_empty() {
            break;
        }
        total += next.len() as u64;
        if total > caps.max_elements {
            return Err(Error::BudgetExceeded {
                what: "descent levels",
                consumed: total,
            });
        }
        levels.push(next);
        bound = control.apply(&bound);
    }

    // bottom-up: everything on the last level has length 0
    let mut below: Vec<Nat> = vec![Nat::zero(); levels.last().map_or(0, Vec::len)];
    for i in (0..levels.len() - 1).rev() {
        let lower = &levels[i + 1];
        let mut prefix_max = Vec::with_capacity(below.len());
        let mut running = Nat::zero();
        for v in &below {
            if *v > running {
                running = v.clone();
            }
            prefix_max.push(running.clone());
        }
        below = levels[i]
            .iter()
            .map(|gamma| match lower.partition_point(|b| b < gamma) {
                0 => Nat::zero(),
                k => &prefix_max[k - 1] + 1u32,
            })
            .collect();
    }
    Ok(below.into_iter().next().unwrap_or_default())
}

fn check_norm(alpha: &Ordinal, x: &Nat) -> Result<()> {
    if alpha.norm() > *x {
        return Err(Error::PreconditionViolated(format!(
            "norm of {alpha} exceeds {x}"
        )));
    }
    Ok(())
}

/// Compares the descent equation with `g_α(x)`. Needs `Nα ≤ x`.
pub fn verify_theorem(
    alpha: &Ordinal,
    control: &ControlFunction,
    x: &Nat,
    caps: &SearchCaps,
) -> Result<Verdict> {
    check_norm(alpha, x)?;
    Verdict::from_result((|| {
        let expected = cichon(control, alpha, x, &caps.eval)?;
        let got = length_wo_dp(alpha, control, x, caps)?;
        Ok(got == expected)
    })())
}

/// Compares `h_α(x)` with `max_{β<α, Nβ≤x} 1 + h_β(h(x))`. Needs `Nα ≤ x`.
pub fn verify_proposition(
    alpha: &Ordinal,
    h: &ControlFunction,
    x: &Nat,
    caps: &SearchCaps,
) -> Result<Verdict> {
    check_norm(alpha, x)?;
    Verdict::from_result((|| {
        let lhs = cichon(h, alpha, x, &caps.eval)?;
        let hx = h.apply(x);
        let mut rhs = Nat::zero();
        for beta in alpha.enumerate_below_capped(x, caps.max_elements)? {
            let v = cichon(h, &beta, &hx, &caps.eval)? + 1u32;
            if v > rhs {
                rhs = v;
            }
        }
        Ok(lhs == rhs)
    })())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductBound {
    pub search: LengthResult,
    /// `h_{ω^d}(d·x)` with `h = d·g`, when it fits the evaluation budget.
    pub rhs: Option<Nat>,
    pub verdict: Verdict,
}

/// Compares `L_{g,ℕ^d}(x)` (product order) with `h_{ω^d}(d·x)`, `h = d·g`.
pub fn check_product_bound(
    d: u64,
    control: &ControlFunction,
    x: &Nat,
    caps: &SearchCaps,
) -> Result<ProductBound> {
    let dim = usize::try_from(d)
        .map_err(|_| Error::PreconditionViolated("dimension too large".into()))?;
    let space = Space::nat_product(dim);
    let search = length_search(&space, control, x, caps)?;
    // h_1(0) = 1 for any h, so d = 0 keeps g
    let h = if d == 0 { *control } else { control.scaled(d)? };
    let alpha = Ordinal::omega_pow(Ordinal::from(d));
    let dx = x * d;
    let rhs = match cichon(&h, &alpha, &dx, &caps.eval) {
        Ok(v) => Some(v),
        Err(e) if e.is_budget() => None,
        Err(e) => return Err(e),
    };
    let verdict = match &rhs {
        Some(r) if search.length > *r => Verdict::Fails,
        Some(_) if search.exact => Verdict::Holds,
        _ => match cichon_at_least(&h, &alpha, &dx, &search.length, &caps.eval) {
            Ok(false) => Verdict::Fails,
            Ok(true) if search.exact => Verdict::Holds,
            Ok(true) => Verdict::Inconclusive(format!(
                "search stopped after {} nodes; length is a lower bound",
                search.nodes_explored
            )),
            Err(e) if e.is_budget() => Verdict::Inconclusive(e.to_string()),
            Err(e) => return Err(e),
        },
    };
    Ok(ProductBound {
        search,
        rhs,
        verdict,
    })
}

impl LengthResult {
    /// Whether appending any in-control element to the witness makes it good.
    pub fn witness_is_locally_maximal(&self, caps: &SearchCaps) -> Result<bool> {
        let w = &self.witness;
        let i = self.length.to_u64().unwrap_or(u64::MAX);
        let bound = w
            .control
            .iterate(&Nat::from(i), &w.initial_norm, &caps.eval)?;
        let candidates = w.space.elements_up_to_capped(&bound, caps.max_elements)?;
        Ok(candidates
            .iter()
            .all(|c| w.items.iter().any(|x| w.space.leq_unchecked(x, c))))
    }
}

impl ControlledSequence {
    pub fn is_bad(&self) -> Result<bool> {
        is_bad(&self.space, &self.items)
    }

    pub fn is_controlled(&self) -> Result<bool> {
        is_controlled(self)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn add2() -> ControlFunction {
        ControlFunction::add(2).unwrap()
    }

    fn product_sequence() -> Vec<Element> {
        let mut v = vec![
            Element::nat_tuple(&[1, 1]),
            Element::nat_tuple(&[3, 0]),
            Element::nat_tuple(&[2, 0]),
            Element::nat_tuple(&[1, 0]),
        ];
        v.extend((0..=9).rev().map(|y| Element::nat_tuple(&[0, y])));
        v
    }

    #[test]
    fn is_bad_examples() {
        let desc: Vec<_> = (0..=5).rev().map(Element::nat).collect();
        assert!(is_bad(&Space::Naturals, &desc).unwrap());
        assert!(is_bad(&Space::Naturals, &[]).unwrap());
        assert!(!is_bad(&Space::Naturals, &[Element::nat(1), Element::nat(1)]).unwrap());
        assert!(is_bad(&Space::nat_product(2), &product_sequence()).unwrap());
    }

    #[test]
    fn is_controlled_examples() {
        let seq = |items| ControlledSequence {
            space: Space::nat_product(2),
            control: add2(),
            initial_norm: nat(1),
            items,
        };
        assert!(seq(vec![]).is_controlled().unwrap());
        assert!(seq(product_sequence()).is_controlled().unwrap());
        assert_eq!(seq(product_sequence()).len(), 14);
        assert!(!seq(vec![Element::nat_tuple(&[0, 9])])
            .is_controlled()
            .unwrap());
    }

    #[test]
    fn search_examples() {
        let caps = SearchCaps::default();
        for n in 0..=6 {
            let r = length_search(&Space::Naturals, &add2(), &nat(n), &caps).unwrap();
            assert_eq!(r.length, nat(n + 1));
            assert!(r.exact);
        }
        for d in 1..=4 {
            let r = length_search(
                &Space::FiniteEq(d),
                &ControlFunction::Successor,
                &nat(0),
                &caps,
            )
            .unwrap();
            assert_eq!(r.length, nat(d));
        }
        let r = length_search(&Space::nat_lex(2), &add2(), &nat(1), &caps).unwrap();
        assert_eq!(r.length, nat(8));
        assert!(r.witness.is_bad().unwrap() && r.witness.is_controlled().unwrap());
        assert!(r.witness_is_locally_maximal(&caps).unwrap());
    }

    #[test]
    fn search_node_cap_gives_lower_bound() {
        let caps = SearchCaps {
            max_nodes: 5,
            ..SearchCaps::default()
        };
        let r = length_search(&Space::nat_lex(2), &add2(), &nat(1), &caps).unwrap();
        assert!(!r.exact);
        assert_eq!(r.nodes_explored, 5);
        assert!(r.length <= nat(8));
    }

    #[test]
    fn dp_examples() {
        let caps = SearchCaps::default();
        assert_eq!(
            length_wo_dp(&Ordinal::zero(), &add2(), &nat(4), &caps).unwrap(),
            nat(0)
        );
        assert_eq!(
            length_wo_dp(&o("w^2"), &add2(), &nat(1), &caps).unwrap(),
            nat(8)
        );
        assert_eq!(
            length_wo_dp(&o("w"), &ControlFunction::Successor, &nat(3), &caps).unwrap(),
            nat(4)
        );
    }

    #[test]
    fn theorem_and_proposition_examples() {
        let caps = SearchCaps::default();
        let mul2 = ControlFunction::mul(2).unwrap();
        // N(ω²) = 2 > 1: outside the hypothesis, yet both sides are 8
        assert!(matches!(
            verify_theorem(&o("w^2"), &add2(), &nat(1), &caps),
            Err(Error::PreconditionViolated(_))
        ));
        assert_eq!(
            cichon(&add2(), &o("w^2"), &nat(1), &caps.eval).unwrap(),
            length_wo_dp(&o("w^2"), &add2(), &nat(1), &caps).unwrap()
        );
        assert_eq!(
            verify_theorem(&o("w^2"), &add2(), &nat(2), &caps).unwrap(),
            Verdict::Holds
        );
        assert_eq!(
            verify_theorem(&o("5"), &ControlFunction::Successor, &nat(5), &caps).unwrap(),
            Verdict::Holds
        );
        assert_eq!(
            verify_theorem(&o("w*2 + 1"), &mul2, &nat(2), &caps).unwrap(),
            Verdict::Holds
        );
        assert!(matches!(
            verify_theorem(&o("w*3"), &mul2, &nat(2), &caps),
            Err(Error::PreconditionViolated(_))
        ));
        assert_eq!(
            verify_proposition(&Ordinal::zero(), &mul2, &nat(3), &caps).unwrap(),
            Verdict::Holds
        );
        assert_eq!(
            verify_proposition(&o("w"), &ControlFunction::Successor, &nat(2), &caps).unwrap(),
            Verdict::Holds
        );
        assert_eq!(
            verify_proposition(&o("w^2"), &mul2, &nat(2), &caps).unwrap(),
            Verdict::Holds
        );
    }

    #[test]
    fn product_bound_small_dimensions() {
        let caps = SearchCaps::default();
        let r = check_product_bound(0, &add2(), &nat(3), &caps).unwrap();
        assert_eq!(r.search.length, nat(1));
        assert_eq!(r.rhs, Some(nat(1)));
        assert_eq!(r.verdict, Verdict::Holds);
        for x in 0..=4 {
            let r = check_product_bound(1, &add2(), &nat(x), &caps).unwrap();
            assert_eq!(r.search.length, nat(x + 1));
            assert_eq!(r.rhs, Some(nat(x + 1)));
            assert_eq!(r.verdict, Verdict::Holds);
        }
    }
}
