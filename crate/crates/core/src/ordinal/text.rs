//! ASCII syntax for ordinal terms.
//!
//! ```text
//! term := "0" | sum
//! sum  := mono ("+" mono)*
//! mono := nat | "w" ("^" atom)? ("*" nat)?
//! atom := nat | "w" | "(" sum ")"
//! ```
//!
//! Whitespace is insignificant. Sums that are not in strict Cantor normal
//! form are accepted and normalized as commutative sums (sorted, equal
//! exponents merged); a warning is recorded when that happens.

use std::fmt;

use num_traits::{One, Zero};

use super::Ordinal;
use crate::error::{Error, Result};
use crate::Nat;

pub const DEFAULT_MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    /// Maximal nesting of exponents.
    pub max_depth: usize,
}

impl Default for ParseOptions {
    fn default() -> Self {
        ParseOptions {
            max_depth: DEFAULT_MAX_DEPTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub value: Ordinal,
    pub warnings: Vec<String>,
}

pub fn parse(text: &str) -> Result<Parsed> {
    parse_with_options(text, ParseOptions::default())
}

pub fn parse_with_options(text: &str, options: ParseOptions) -> Result<Parsed> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        options,
        warnings: Vec::new(),
    };
    let value = p.sum(0)?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(Error::syntax(p.pos, "unexpected trailing input"));
    }
    if value.depth() > options.max_depth {
        return Err(Error::syntax(
            0,
            format!("exponent nesting exceeds {}", options.max_depth),
        ));
    }
    Ok(Parsed {
        value,
        warnings: p.warnings,
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    options: ParseOptions,
    warnings: Vec<String>,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn nat(&mut self) -> Result<Nat> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(start, "expected a decimal literal"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("non-empty decimal digits"))
    }

    fn sum(&mut self, depth: usize) -> Result<Ordinal> {
        let start = self.pos;
        let mut parts = vec![self.mono(depth)?];
        while self.eat(b'+') {
            parts.push(self.mono(depth)?);
        }
        let (value, canonical) = Ordinal::from_summands(parts);
        if !canonical {
            self.warnings.push(format!(
                "non-canonical sum at offset {start} normalized to {value}"
            ));
        }
        Ok(value)
    }

    fn mono(&mut self, depth: usize) -> Result<(Ordinal, Nat)> {
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                let exponent = if self.eat(b'^') {
                    self.atom(depth + 1)?
                } else {
                    Ordinal::one()
                };
                let coefficient = if self.eat(b'*') {
                    let at = self.pos;
                    let c = self.nat()?;
                    if c.is_zero() {
                        return Err(Error::syntax(at, "coefficient must be at least 1"));
                    }
                    c
                } else {
                    Nat::one()
                };
                Ok((exponent, coefficient))
            }
            Some(c) if c.is_ascii_digit() => Ok((Ordinal::zero(), self.nat()?)),
            _ => Err(Error::syntax(self.pos, "expected a natural number or 'w'")),
        }
    }

    fn atom(&mut self, depth: usize) -> Result<Ordinal> {
        if depth > self.options.max_depth {
            return Err(Error::syntax(
                self.pos,
                format!("exponent nesting exceeds {}", self.options.max_depth),
            ));
        }
        match self.peek() {
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.sum(depth)?;
                if !self.eat(b')') {
                    return Err(Error::syntax(self.pos, "expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => Ok(Ordinal::finite(self.nat()?)),
            _ => Err(Error::syntax(self.pos, "expected an exponent")),
        }
    }
}

pub(super) fn write_ordinal(a: &Ordinal, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if a.is_zero() {
        return f.write_str("0");
    }
    for (i, s) in a.summands.iter().enumerate() {
        if i > 0 {
            f.write_str(" + ")?;
        }
        if s.exponent.is_zero() {
            write!(f, "{}", s.coefficient)?;
            continue;
        }
        f.write_str("w")?;
        if s.exponent != Ordinal::one() {
            f.write_str("^")?;
            if s.exponent.is_finite() || s.exponent == Ordinal::omega() {
                write!(f, "{}", s.exponent)?;
            } else {
                write!(f, "({})", s.exponent)?;
            }
        }
        if !s.coefficient.is_one() {
            write!(f, "*{}", s.coefficient)?;
        }
    }
    Ok(())
}
