//! Normed well quasi orders from a closed set of constructors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ordinal::{self, Ordinal};
use crate::Nat;

/// Default bound on the size of `elements_up_to` results.
pub const DEFAULT_ELEMENT_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Space {
    /// `[d] = {0, …, d−1}` with the linear order; `i` has norm `i`.
    Finite(u64),
    /// `d` elements ordered by equality; every element has norm 0.
    FiniteEq(u64),
    Naturals,
    /// Lexicographic product, left component most significant.
    Lex(Box<Space>, Box<Space>),
    /// Cartesian product with the componentwise order.
    Product(Box<Space>, Box<Space>),
    /// Finite multisets with the multiset ordering.
    Multiset(Box<Space>),
    /// The ordinal `α` as the well order `{β < α}` with the ordinal norm.
    Ordinal(Ordinal),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Fin(u64),
    Nat(Nat),
    Pair(Box<Element>, Box<Element>),
    /// Sorted, duplicate-free `(element, multiplicity ≥ 1)` list.
    Multiset(Vec<(Element, Nat)>),
    Ord(Ordinal),
}

impl Element {
    pub fn nat(n: u64) -> Self {
        Element::Nat(Nat::from(n))
    }

    pub fn pair(a: Element, b: Element) -> Self {
        Element::Pair(Box::new(a), Box::new(b))
    }

    /// Right-nested tuple `(a, (b, (c, …)))`; a single component is returned
    /// as is.
    pub fn tuple(mut items: Vec<Element>) -> Self {
        let mut acc = items.pop().expect("tuple needs at least one component");
        while let Some(prev) = items.pop() {
            acc = Element::pair(prev, acc);
        }
        acc
    }

    pub fn nat_tuple(values: &[u64]) -> Self {
        Element::tuple(values.iter().map(|&v| Element::nat(v)).collect())
    }

    /// Canonical multiset: merges repeated keys and drops zero multiplicities.
    pub fn multiset(entries: Vec<(Element, Nat)>) -> Self {
        let mut entries = entries;
        entries.retain(|(_, m)| !m.is_zero());
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Element, Nat)> = Vec::with_capacity(entries.len());
        for (e, m) in entries {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += m,
                _ => out.push((e, m)),
            }
        }
        Element::Multiset(out)
    }

    fn multiplicity(entries: &[(Element, Nat)], e: &Element) -> Nat {
        entries
            .binary_search_by(|(k, _)| k.cmp(e))
            .map(|i| entries[i].1.clone())
            .unwrap_or_default()
    }
}

impl Space {
    pub fn lex(a: Space, b: Space) -> Result<Self> {
        if !a.is_well_order() || !b.is_well_order() {
            return Err(Error::NotAWellOrder(
                "lexicographic products need well-ordered operands".into(),
            ));
        }
        Ok(Space::Lex(Box::new(a), Box::new(b)))
    }

    pub fn product(a: Space, b: Space) -> Self {
        Space::Product(Box::new(a), Box::new(b))
    }

    pub fn multiset(base: Space) -> Result<Self> {
        if !base.is_well_order() {
            return Err(Error::NotAWellOrder(
                "multisets need a well-ordered base".into(),
            ));
        }
        Ok(Space::Multiset(Box::new(base)))
    }

    /// `ℕ^d` with the lexicographic order (right-nested). `d = 0` is the
    /// one-element space.
    pub fn nat_lex(d: usize) -> Self {
        Space::nat_power(d, |a, b| Space::Lex(Box::new(a), Box::new(b)))
    }

    /// `ℕ^d` with the product order (right-nested). `d = 0` is the
    /// one-element space.
    pub fn nat_product(d: usize) -> Self {
        Space::nat_power(d, Space::product)
    }

    fn nat_power(d: usize, join: impl Fn(Space, Space) -> Space) -> Self {
        match d {
            0 => Space::FiniteEq(1),
            _ => {
                let mut s = Space::Naturals;
                for _ in 1..d {
                    s = join(Space::Naturals, s);
                }
                s
            }
        }
    }

    pub fn is_well_order(&self) -> bool {
        match self {
            Space::Finite(_) | Space::Naturals | Space::Ordinal(_) => true,
            Space::FiniteEq(d) => *d <= 1,
            Space::Lex(a, b) => a.is_well_order() && b.is_well_order(),
            Space::Product(..) => false,
            Space::Multiset(b) => b.is_well_order(),
        }
    }

    /// Checks that `e` is an element of this space.
    pub fn validate(&self, e: &Element) -> Result<()> {
        let bad = || Error::ShapeMismatch(format!("{e} is not an element of {self}"));
        match (self, e) {
            (Space::Finite(d) | Space::FiniteEq(d), Element::Fin(i)) if i < d => Ok(()),
            (Space::Naturals, Element::Nat(_)) => Ok(()),
            (Space::Lex(a, b) | Space::Product(a, b), Element::Pair(x, y)) => {
                a.validate(x)?;
                b.validate(y)
            }
            (Space::Multiset(base), Element::Multiset(entries)) => {
                let canonical = entries.windows(2).all(|w| w[0].0 < w[1].0)
                    && entries.iter().all(|(_, m)| !m.is_zero());
                if !canonical {
                    return Err(bad());
                }
                entries.iter().try_for_each(|(k, _)| base.validate(k))
            }
            (Space::Ordinal(alpha), Element::Ord(beta)) if beta < alpha => Ok(()),
            _ => Err(bad()),
        }
    }

    pub fn leq(&self, a: &Element, b: &Element) -> Result<bool> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(self.leq_unchecked(a, b))
    }

    fn lt_unchecked(&self, a: &Element, b: &Element) -> bool {
        self.leq_unchecked(a, b) && !self.leq_unchecked(b, a)
    }

    pub(crate) fn leq_unchecked(&self, a: &Element, b: &Element) -> bool {
        match (self, a, b) {
            (Space::Finite(_), Element::Fin(i), Element::Fin(j)) => i <= j,
            (Space::FiniteEq(_), Element::Fin(i), Element::Fin(j)) => i == j,
            (Space::Naturals, Element::Nat(m), Element::Nat(n)) => m <= n,
            (Space::Ordinal(_), Element::Ord(x), Element::Ord(y)) => x <= y,
            (Space::Lex(sa, sb), Element::Pair(x, y), Element::Pair(x2, y2)) => {
                sa.lt_unchecked(x, x2) || (x == x2 && sb.leq_unchecked(y, y2))
            }
            (Space::Product(sa, sb), Element::Pair(x, y), Element::Pair(x2, y2)) => {
                sa.leq_unchecked(x, x2) && sb.leq_unchecked(y, y2)
            }
            (Space::Multiset(base), Element::Multiset(m), Element::Multiset(m2)) => {
                // every element where m exceeds m2 is dominated by a larger
                // element where m2 exceeds m
                m.iter().all(|(x, mx)| {
                    *mx <= Element::multiplicity(m2, x)
                        || m2.iter().any(|(y, m2y)| {
                            base.lt_unchecked(x, y) && Element::multiplicity(m, y) < *m2y
                        })
                })
            }
            _ => unreachable!("validated elements match their space"),
        }
    }

    pub fn norm_of(&self, e: &Element) -> Result<Nat> {
        self.validate(e)?;
        Ok(self.norm_unchecked(e))
    }

    pub(crate) fn norm_unchecked(&self, e: &Element) -> Nat {
        match (self, e) {
            (Space::FiniteEq(_), _) => Nat::zero(),
            (Space::Finite(_), Element::Fin(i)) => Nat::from(*i),
            (Space::Naturals, Element::Nat(n)) => n.clone(),
            (Space::Ordinal(_), Element::Ord(b)) => b.norm(),
            (Space::Lex(a, b) | Space::Product(a, b), Element::Pair(x, y)) => {
                std::cmp::max(a.norm_unchecked(x), b.norm_unchecked(y))
            }
            (Space::Multiset(base), Element::Multiset(entries)) => entries
                .iter()
                .map(|(k, m)| std::cmp::max(m.clone(), base.norm_unchecked(k)))
                .max()
                .unwrap_or_default(),
            _ => unreachable!("validated elements match their space"),
        }
    }

    /// `A_{≤n}`: every element of norm at most `n`.
    pub fn elements_up_to(&self, n: &Nat) -> Result<Vec<Element>> {
        self.elements_up_to_capped(n, DEFAULT_ELEMENT_CAP)
    }

    pub fn elements_up_to_capped(&self, n: &Nat, cap: u64) -> Result<Vec<Element>> {
        let over = |count: &BigUint| Error::BudgetExceeded {
            what: "element enumeration",
            consumed: count.to_u64().unwrap_or(u64::MAX),
        };
        let out = match self {
            Space::Finite(d) => {
                let top = n.to_u64().map_or(*d, |n| n.saturating_add(1).min(*d));
                (0..top).map(Element::Fin).collect()
            }
            Space::FiniteEq(d) => (0..*d).map(Element::Fin).collect(),
            Space::Naturals => {
                let count = n + 1u32;
                if count > BigUint::from(cap) {
                    return Err(over(&count));
                }
                let n = n.to_u64().expect("bounded by cap");
                (0..=n).map(Element::nat).collect()
            }
            Space::Ordinal(alpha) => alpha
                .enumerate_below_capped(n, cap)?
                .into_iter()
                .map(Element::Ord)
                .collect(),
            Space::Lex(a, b) | Space::Product(a, b) => {
                let left = a.elements_up_to_capped(n, cap)?;
                let right = b.elements_up_to_capped(n, cap)?;
                let count = BigUint::from(left.len()) * right.len();
                if count > BigUint::from(cap) {
                    return Err(over(&count));
                }
                let mut out = Vec::with_capacity(left.len() * right.len());
                for x in &left {
                    for y in &right {
                        out.push(Element::pair(x.clone(), y.clone()));
                    }
                }
                out
            }
            Space::Multiset(base) => {
                let support = base.elements_up_to_capped(n, cap)?;
                let count = (n + 1u32).pow(support.len() as u32);
                if count > BigUint::from(cap) {
                    return Err(over(&count));
                }
                let top = n.to_u64().expect("bounded by cap");
                // all multiplicity vectors over the support, odometer order
                let mut mult = vec![0u64; support.len()];
                let mut out = Vec::new();
                loop {
                    out.push(Element::multiset(
                        support
                            .iter()
                            .zip(&mult)
                            .map(|(k, &m)| (k.clone(), Nat::from(m)))
                            .collect(),
                    ));
                    let Some(i) = mult.iter().position(|&m| m < top) else {
                        break;
                    };
                    mult[..i].iter_mut().for_each(|m| *m = 0);
                    mult[i] += 1;
                }
                out
            }
        };
        if out.len() as u64 > cap {
            return Err(over(&BigUint::from(out.len())));
        }
        Ok(out)
    }

    /// Order type of a well order; for `ℕ^d` under the product order and for
    /// `FiniteEq(d)` this is the maximal order type (`ω^d`, resp. `d`).
    pub fn order_type(&self) -> Result<Ordinal> {
        match self {
            Space::Finite(d) | Space::FiniteEq(d) => Ok(Ordinal::from(*d)),
            Space::Naturals => Ok(Ordinal::omega()),
            Space::Ordinal(alpha) => Ok(alpha.clone()),
            // (x, y) with x most significant: o(A) copies of o(B)
            Space::Lex(a, b) => Ok(b.order_type()?.mul(&a.order_type()?)),
            Space::Multiset(base) => Ok(Ordinal::omega_pow(base.order_type()?)),
            Space::Product(..) => match self.nat_product_dimension() {
                Some(d) => Ok(Ordinal::omega_pow(Ordinal::from(d))),
                None => Err(Error::NotAWellOrder(format!(
                    "maximal order type of {self} is only provided for N^d"
                ))),
            },
        }
    }

    fn nat_product_dimension(&self) -> Option<u64> {
        match self {
            Space::Naturals => Some(1),
            Space::Product(a, b) => Some(a.nat_product_dimension()? + b.nat_product_dimension()?),
            _ => None,
        }
    }

    /// The image of `e` under the order isomorphism onto `order_type()`.
    pub fn element_order_type(&self, e: &Element) -> Result<Ordinal> {
        if !self.is_well_order() {
            return Err(Error::NotAWellOrder(self.to_string()));
        }
        self.validate(e)?;
        self.element_order_type_unchecked(e)
    }

    fn element_order_type_unchecked(&self, e: &Element) -> Result<Ordinal> {
        Ok(match (self, e) {
            (Space::Finite(_) | Space::FiniteEq(_), Element::Fin(i)) => Ordinal::from(*i),
            (Space::Naturals, Element::Nat(n)) => Ordinal::finite(n.clone()),
            (Space::Ordinal(_), Element::Ord(b)) => b.clone(),
            (Space::Lex(a, b), Element::Pair(x, y)) => b
                .order_type()?
                .mul(&a.element_order_type_unchecked(x)?)
                .add(&b.element_order_type_unchecked(y)?),
            (Space::Multiset(base), Element::Multiset(entries)) => {
                let parts = entries
                    .iter()
                    .map(|(k, m)| Ok((base.element_order_type_unchecked(k)?, m.clone())))
                    .collect::<Result<Vec<_>>>()?;
                Ordinal::from_summands(parts).0
            }
            _ => unreachable!("validated elements match their space"),
        })
    }

    /// Parses an element literal for this space: integers, `(a, b)` pairs
    /// (longer tuples nest to the right), `{e:m, …}` multisets, or an ordinal
    /// term for ordinal spaces.
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let mut p = ElementParser {
            src: text.as_bytes(),
            pos: 0,
        };
        let e = p.element(self)?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(Error::syntax(p.pos, "unexpected trailing input"));
        }
        self.validate(&e)?;
        Ok(e)
    }
}

struct ElementParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ElementParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::syntax(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn nat(&mut self) -> Result<Nat> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(start, "expected a natural number"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse()
            .expect("digits"))
    }

    fn element(&mut self, space: &Space) -> Result<Element> {
        match space {
            Space::Finite(_) | Space::FiniteEq(_) => {
                let at = self.pos;
                let n = self.nat()?;
                n.to_u64()
                    .map(Element::Fin)
                    .ok_or_else(|| Error::syntax(at, "index out of range"))
            }
            Space::Naturals => Ok(Element::Nat(self.nat()?)),
            Space::Ordinal(_) => {
                self.skip_ws();
                let start = self.pos;
                let mut depth = 0usize;
                while let Some(&c) = self.src.get(self.pos) {
                    match c {
                        b'(' => depth += 1,
                        b')' if depth == 0 => break,
                        b')' => depth -= 1,
                        b',' | b'}' | b':' if depth == 0 => break,
                        _ => {}
                    }
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                ordinal::parse(text)
                    .map(|p| Element::Ord(p.value))
                    .map_err(|e| match e {
                        Error::Syntax { pos, msg } => Error::syntax(start + pos, msg),
                        other => other,
                    })
            }
            Space::Lex(..) | Space::Product(..) => {
                self.expect(b'(')?;
                let e = self.tuple_body(space)?;
                self.expect(b')')?;
                Ok(e)
            }
            Space::Multiset(base) => {
                self.expect(b'{')?;
                let mut entries = Vec::new();
                if self.peek() != Some(b'}') {
                    loop {
                        let k = self.element(base)?;
                        let m = if self.peek() == Some(b':') {
                            self.pos += 1;
                            self.nat()?
                        } else {
                            Nat::one()
                        };
                        entries.push((k, m));
                        if self.peek() == Some(b',') {
                            self.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                self.expect(b'}')?;
                Ok(Element::multiset(entries))
            }
        }
    }

    // components of a pair, flattening right-nested pairs: (a, b, c)
    fn tuple_body(&mut self, space: &Space) -> Result<Element> {
        let (Space::Lex(a, b) | Space::Product(a, b)) = space else {
            return self.element(space);
        };
        let x = self.element(a)?;
        self.expect(b',')?;
        let y = if matches!(**b, Space::Lex(..) | Space::Product(..)) && self.peek() != Some(b'(') {
            self.tuple_body(b)?
        } else {
            self.element(b)?
        };
        Ok(Element::pair(x, y))
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Finite(d) => write!(f, "fin:{d}"),
            Space::FiniteEq(d) => write!(f, "eq:{d}"),
            Space::Naturals => f.write_str("nat"),
            Space::Lex(a, b) => write!(f, "lex({a},{b})"),
            Space::Product(a, b) => write!(f, "prod({a},{b})"),
            Space::Multiset(b) => write!(f, "mset({b})"),
            Space::Ordinal(a) => write!(f, "ord({a})"),
        }
    }
}

impl FromStr for Space {
    type Err = Error;

    /// `fin:d`, `eq:d`, `nat`, `lex(S,T)`, `prod(S,T)`, `mset(S)`, `ord(α)`.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = SpaceParser {
            src: s.as_bytes(),
            pos: 0,
        };
        let space = p.space()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(Error::syntax(p.pos, "unexpected trailing input"));
        }
        Ok(space)
    }
}

struct SpaceParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl SpaceParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn word(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        self.skip_ws();
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::syntax(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii")
            .parse()
            .map_err(|_| Error::syntax(start, "expected a number"))
    }

    fn space(&mut self) -> Result<Space> {
        let at = self.pos;
        let word = self.word().to_owned();
        match word.as_str() {
            "nat" => Ok(Space::Naturals),
            "fin" | "eq" => {
                self.expect(b':')?;
                let d = self.number()?;
                Ok(if word == "fin" {
                    Space::Finite(d)
                } else {
                    Space::FiniteEq(d)
                })
            }
            "lex" | "prod" => {
                self.expect(b'(')?;
                let a = self.space()?;
                self.expect(b',')?;
                let b = self.space()?;
                self.expect(b')')?;
                if word == "lex" {
                    Space::lex(a, b).map_err(|e| Error::syntax(at, e.to_string()))
                } else {
                    Ok(Space::product(a, b))
                }
            }
            "mset" => {
                self.expect(b'(')?;
                let base = self.space()?;
                self.expect(b')')?;
                Space::multiset(base).map_err(|e| Error::syntax(at, e.to_string()))
            }
            "ord" => {
                self.expect(b'(')?;
                let start = self.pos;
                let mut depth = 0usize;
                while let Some(&c) = self.src.get(self.pos) {
                    match c {
                        b'(' => depth += 1,
                        b')' if depth == 0 => break,
                        b')' => depth -= 1,
                        _ => {}
                    }
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                let alpha = ordinal::parse(text)
                    .map_err(|e| match e {
                        Error::Syntax { pos, msg } => Error::syntax(start + pos, msg),
                        other => other,
                    })?
                    .value;
                self.expect(b')')?;
                Ok(Space::Ordinal(alpha))
            }
            _ => Err(Error::syntax(
                at,
                "expected fin:d, eq:d, nat, lex(S,T), prod(S,T), mset(S) or ord(a)",
            )),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Fin(i) => write!(f, "{i}"),
            Element::Nat(n) => write!(f, "{n}"),
            Element::Ord(a) => write!(f, "{a}"),
            Element::Pair(..) => {
                f.write_str("(")?;
                let mut cur = self;
                let mut first = true;
                while let Element::Pair(x, y) = cur {
                    if !first {
                        f.write_str(", ")?;
                    }
                    write!(f, "{x}")?;
                    first = false;
                    cur = y;
                }
                write!(f, ", {cur})")
            }
            Element::Multiset(entries) => {
                f.write_str("{")?;
                for (i, (k, m)) in entries.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{k}:{m}")?;
                }
                f.write_str("}")
            }
        }
    }
}
