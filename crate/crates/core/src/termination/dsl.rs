//! Parser for the program text syntax (see `grammar/program.ebnf`).

use num_bigint::BigInt;

use super::{AffineExpr, Constraint, Rel, Transition, TransitionSystem};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(&'static str),
}

const SYMBOLS: [&str; 16] = [
    ":=", "->", "<=", ">=", "==", "<", ">", "=", "+", "-", "*", "(", ")", ",", ";", ":",
];

fn lex(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i].parse().expect("digits");
            out.push((start, Tok::Int(n)));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            while i < bytes.len() && bytes[i] == b'\'' {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_owned())));
        } else if let Some(s) = SYMBOLS.iter().find(|s| src[i..].starts_with(**s)) {
            out.push((i, Tok::Sym(s)));
            i += s.len();
        } else {
            return Err(Error::syntax(
                i,
                format!("unexpected character '{}'", c as char),
            ));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    names: &'a dyn Fn(&str) -> Option<usize>,
}

impl<'a> Parser<'a> {
    fn new(src: &str, names: &'a dyn Fn(&str) -> Option<usize>) -> Result<Self> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            end: src.len(),
            names,
        })
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(t)) if *t == s)
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(t)) if t == w)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(Error::syntax(self.offset(), format!("expected '{s}'")))
        }
    }

    fn expect_word(&mut self, w: &str) -> Result<()> {
        if self.at_word(w) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::syntax(self.offset(), format!("expected '{w}'")))
        }
    }

    fn ident(&mut self) -> Result<(usize, String)> {
        match self.toks.get(self.pos) {
            Some((at, Tok::Ident(s))) => {
                let out = (*at, s.clone());
                self.pos += 1;
                Ok(out)
            }
            _ => Err(Error::syntax(self.offset(), "expected an identifier")),
        }
    }

    fn done(&self) -> Result<()> {
        if self.pos < self.toks.len() {
            return Err(Error::syntax(self.offset(), "unexpected trailing input"));
        }
        Ok(())
    }

    // expr := ["-"] term (("+" | "-") term)*
    fn expr(&mut self) -> Result<AffineExpr> {
        let mut acc = if self.eat_sym("-") {
            self.term()?.scale(&BigInt::from(-1))
        } else {
            self.term()?
        };
        loop {
            if self.eat_sym("+") {
                acc = acc.add(&self.term()?);
            } else if self.eat_sym("-") {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    // term := factor ("*" factor)*, at most one factor non-constant
    fn term(&mut self) -> Result<AffineExpr> {
        let mut acc = self.factor()?;
        while self.at_sym("*") {
            let at = self.offset();
            self.pos += 1;
            let rhs = self.factor()?;
            acc = if acc.is_constant() {
                rhs.scale(&acc.constant)
            } else if rhs.is_constant() {
                acc.scale(&rhs.constant)
            } else {
                return Err(Error::syntax(at, "product of two variables is not affine"));
            };
        }
        Ok(acc)
    }

    // factor := int | ident | "(" expr ")" | "-" factor
    fn factor(&mut self) -> Result<AffineExpr> {
        let at = self.offset();
        match self.toks.get(self.pos).map(|t| t.1.clone()) {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(AffineExpr::constant(n))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                (self.names)(&name)
                    .map(AffineExpr::var)
                    .ok_or_else(|| Error::syntax(at, format!("unknown variable '{name}'")))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            Some(Tok::Sym("-")) => {
                self.pos += 1;
                Ok(self.factor()?.scale(&BigInt::from(-1)))
            }
            _ => Err(Error::syntax(at, "expected an integer, a variable or '('")),
        }
    }

    fn constraint(&mut self) -> Result<Constraint> {
        let lhs = self.expr()?;
        let at = self.offset();
        let rel = match self.peek() {
            Some(Tok::Sym("<")) => Rel::Lt,
            Some(Tok::Sym("<=")) => Rel::Le,
            Some(Tok::Sym("=")) | Some(Tok::Sym("==")) => Rel::Eq,
            Some(Tok::Sym(">=")) => Rel::Ge,
            Some(Tok::Sym(">")) => Rel::Gt,
            _ => return Err(Error::syntax(at, "expected a comparison operator")),
        };
        self.pos += 1;
        let rhs = self.expr()?;
        Ok(Constraint {
            expr: lhs.sub(&rhs),
            rel,
        })
    }

    fn guard(&mut self) -> Result<Vec<Constraint>> {
        let mut out = vec![self.constraint()?];
        while self.eat_sym(",") {
            out.push(self.constraint()?);
        }
        Ok(out)
    }
}

fn lookup(names: &[String]) -> impl Fn(&str) -> Option<usize> + '_ {
    move |s| names.iter().position(|n| n == s)
}

pub(super) fn parse_expr(names: &[String], text: &str) -> Result<AffineExpr> {
    let f = lookup(names);
    let mut p = Parser::new(text, &f)?;
    let e = p.expr()?;
    p.done()?;
    Ok(e)
}

pub(super) fn parse_guard(names: &[String], text: &str) -> Result<Vec<Constraint>> {
    let f = lookup(names);
    let mut p = Parser::new(text, &f)?;
    if p.peek().is_none() {
        return Ok(Vec::new());
    }
    let g = p.guard()?;
    p.done()?;
    Ok(g)
}

/// `rel NAME when GUARD rank EXPR;` where the guard may mention primed
/// variables `x'` for the target configuration, mapped to indices `k + i`.
pub(super) fn parse_relations(
    names: &[String],
    text: &str,
) -> Result<Vec<(String, Vec<Constraint>, AffineExpr)>> {
    let k = names.len();
    let both = |s: &str| match s.strip_suffix('\'') {
        Some(base) => names.iter().position(|n| n == base).map(|i| i + k),
        None => names.iter().position(|n| n == s),
    };
    let mut p = Parser::new(text, &both)?;
    let mut out = Vec::new();
    while p.peek().is_some() {
        p.expect_word("rel")?;
        let (_, name) = p.ident()?;
        let guard = if p.at_word("when") {
            p.pos += 1;
            p.guard()?
        } else {
            Vec::new()
        };
        p.expect_word("rank")?;
        let at = p.offset();
        let rank = p.expr()?;
        if rank.max_var().is_some_and(|v| v >= k) {
            return Err(Error::syntax(at, "a rank may not mention primed variables"));
        }
        p.expect_sym(";")?;
        out.push((name, guard, rank));
    }
    Ok(out)
}

pub(super) fn parse_program(text: &str) -> Result<TransitionSystem> {
    // declarations come first in the text but may be referenced only after
    // they are declared; collect them in a first pass
    let toks = lex(text)?;
    let mut variables: Vec<String> = Vec::new();
    let mut locations: Vec<String> = Vec::new();
    let mut i = 0;
    while i < toks.len() {
        let kind = match &toks[i].1 {
            Tok::Ident(w) if w == "var" || w == "loc" => w.clone(),
            _ => {
                i += 1;
                continue;
            }
        };
        i += 1;
        loop {
            match toks.get(i) {
                Some((at, Tok::Ident(name))) => {
                    let list = if kind == "var" {
                        &mut variables
                    } else {
                        &mut locations
                    };
                    if list.contains(name) || name.ends_with('\'') {
                        return Err(Error::syntax(
                            *at,
                            format!("bad or duplicate name '{name}'"),
                        ));
                    }
                    list.push(name.clone());
                }
                _ => return Err(Error::syntax(text.len(), "expected a name in declaration")),
            }
            i += 1;
            match toks.get(i) {
                Some((_, Tok::Sym(","))) => i += 1,
                Some((_, Tok::Sym(";"))) => {
                    i += 1;
                    break;
                }
                Some((at, _)) => return Err(Error::syntax(*at, "expected ',' or ';'")),
                None => return Err(Error::syntax(text.len(), "expected ';'")),
            }
        }
    }

    let transitions = parse_transitions(text, &variables, &locations)?;
    TransitionSystem::new(variables, locations, transitions)
}

fn parse_transitions(
    text: &str,
    variables: &[String],
    locations: &[String],
) -> Result<Vec<Transition>> {
    let vars = lookup(variables);
    let mut p = Parser::new(text, &vars)?;
    let mut transitions: Vec<Transition> = Vec::new();
    while p.peek().is_some() {
        if p.at_word("var") || p.at_word("loc") {
            while !p.eat_sym(";") {
                p.pos += 1;
            }
            continue;
        }
        p.expect_word("trans")?;
        let (at, name) = p.ident()?;
        if transitions.iter().any(|t| t.name == name) {
            return Err(Error::syntax(at, format!("duplicate transition '{name}'")));
        }
        p.expect_sym(":")?;
        let location = |p: &mut Parser| -> Result<usize> {
            let (at, l) = p.ident()?;
            locations
                .iter()
                .position(|x| *x == l)
                .ok_or_else(|| Error::syntax(at, format!("unknown location '{l}'")))
        };
        let source = location(&mut p)?;
        p.expect_sym("->")?;
        let target = location(&mut p)?;
        let guard = if p.at_word("when") {
            p.pos += 1;
            p.guard()?
        } else {
            Vec::new()
        };
        let mut updates: Vec<(usize, AffineExpr)> = Vec::new();
        if p.at_word("do") {
            p.pos += 1;
            loop {
                let (at, v) = p.ident()?;
                let idx = variables
                    .iter()
                    .position(|x| *x == v)
                    .ok_or_else(|| Error::syntax(at, format!("unknown variable '{v}'")))?;
                if updates.iter().any(|(u, _)| *u == idx) {
                    return Err(Error::syntax(at, format!("'{v}' assigned twice")));
                }
                p.expect_sym(":=")?;
                updates.push((idx, p.expr()?));
                if !p.eat_sym(",") {
                    break;
                }
            }
        }
        p.expect_sym(";")?;
        transitions.push(Transition {
            name,
            source,
            target,
            guard,
            updates,
        });
    }
    Ok(transitions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fig1() {
        let p = parse_program(super::super::FIG1_SOURCE).unwrap();
        assert_eq!(p.variables, vec!["x", "y", "n"]);
        assert_eq!(p.locations, vec!["l0"]);
        assert_eq!(p.transitions.len(), 2);
        let b = &p.transitions[1];
        assert_eq!(b.name, "b");
        assert_eq!(b.guard.len(), 2);
        assert_eq!(b.updates[0], (0, AffineExpr::var(2)));
    }

    #[test]
    fn the_documented_one_liner_parses() {
        let text = "var x, y, n; loc l0; trans a: l0 -> l0 when x>0, y>0 do x:=x-1, n:=2*n; \
                    trans b: l0 -> l0 when x=0, y>0 do x:=n, y:=y-1, n:=2*n;";
        assert_eq!(
            parse_program(text).unwrap(),
            parse_program(super::super::FIG1_SOURCE).unwrap()
        );
    }

    #[test]
    fn errors_have_positions() {
        assert!(matches!(
            parse_program("var x; loc l; trans t: l -> m;"),
            Err(Error::Syntax { pos: 28, .. })
        ));
        assert!(matches!(
            parse_program("var x; loc l; trans t: l -> l do x := x*x;"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_program("var x; loc l; trans t: l -> l when z > 0;"),
            Err(Error::Syntax { .. })
        ));
        assert!(parse_program("var x, x;").is_err());
        assert!(parse_program("var x; loc l; trans t: l -> l do x := 1, x := 2;").is_err());
    }

    #[test]
    fn relations_with_primes() {
        let names: Vec<String> = ["x", "y", "n"].iter().map(|s| s.to_string()).collect();
        let rels = parse_relations(&names, "rel T1 when x > 0, x' < x rank x;").unwrap();
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].1[1].expr.coefficient(3), BigInt::from(1));
        assert!(parse_relations(&names, "rel T when x > 0 rank x';").is_err());
        assert!(parse_relations(&names, "").unwrap().is_empty());
    }
}
