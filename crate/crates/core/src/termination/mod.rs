//! Guarded-command integer programs and checks of termination arguments.
//!
//! A program has integer variables, locations and transitions
//! `source -> target when guard do updates`, where guards are conjunctions
//! of affine comparisons and updates are parallel affine assignments. The
//! text syntax is given in `grammar/program.ebnf`.

mod accel;
mod check;
mod dsl;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub use accel::{run_accelerated, AccelRun, Block, RunCaps};
pub use check::{
    check_control, check_disjunctive, check_ranking, corollary_bound, execution_length_identity,
    ControlReport, Counterexample, DisjunctiveArgument, DisjunctiveReport, IdentityReport, RankMap,
    RankingMode, RankingReport, RankingSpec, Relation, DEFAULT_HORIZON_PAIRS,
};

/// The built-in `fig1` loop, `while x >= 0 and y > 0`: transition `a` counts
/// `x` down while doubling `n`, transition `b` reloads `x` from `n` and
/// decrements `y`.
pub const FIG1_SOURCE: &str = "\
var x, y, n;
loc l0;
trans a: l0 -> l0 when x > 0, y > 0 do x := x - 1, n := 2*n;
trans b: l0 -> l0 when x = 0, y > 0 do x := n, y := y - 1, n := 2*n;
";

/// Default step cap for runs that are stepped one transition at a time.
pub const DEFAULT_TRACE_STEPS: u64 = 10_000;

/// `c + Σ a_i·v_i` over variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AffineExpr {
    pub constant: BigInt,
    /// Sorted by variable, coefficients non-zero.
    pub terms: Vec<(usize, BigInt)>,
}

impl AffineExpr {
    pub fn constant(c: impl Into<BigInt>) -> Self {
        AffineExpr {
            constant: c.into(),
            terms: Vec::new(),
        }
    }

    pub fn var(i: usize) -> Self {
        AffineExpr {
            constant: BigInt::zero(),
            terms: vec![(i, BigInt::from(1))],
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, var: usize) -> BigInt {
        self.terms
            .iter()
            .find(|(v, _)| *v == var)
            .map(|(_, a)| a.clone())
            .unwrap_or_default()
    }

    pub fn add(&self, other: &AffineExpr) -> AffineExpr {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        AffineExpr::normalized(&self.constant + &other.constant, terms)
    }

    pub fn scale(&self, k: &BigInt) -> AffineExpr {
        AffineExpr::normalized(
            &self.constant * k,
            self.terms.iter().map(|(v, a)| (*v, a * k)).collect(),
        )
    }

    pub fn sub(&self, other: &AffineExpr) -> AffineExpr {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    fn normalized(constant: BigInt, mut terms: Vec<(usize, BigInt)>) -> AffineExpr {
        terms.sort_by_key(|(v, _)| *v);
        let mut out: Vec<(usize, BigInt)> = Vec::with_capacity(terms.len());
        for (v, a) in terms {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 += a,
                _ => out.push((v, a)),
            }
        }
        out.retain(|(_, a)| !a.is_zero());
        AffineExpr {
            constant,
            terms: out,
        }
    }

    pub fn eval(&self, values: &[BigInt]) -> BigInt {
        self.terms
            .iter()
            .fold(self.constant.clone(), |acc, (v, a)| acc + a * &values[*v])
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.last().map(|(v, _)| *v)
    }

    /// Renders with the given variable names.
    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        DisplayExpr { expr: self, names }
    }
}

struct DisplayExpr<'a> {
    expr: &'a AffineExpr,
    names: &'a [String],
}

impl fmt::Display for DisplayExpr<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, a) in &self.expr.terms {
            let name = &self.names[*v];
            let mag = a.abs();
            match (first, a.is_negative()) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            if mag == BigInt::from(1) {
                write!(f, "{name}")?;
            } else {
                write!(f, "{mag}*{name}")?;
            }
            first = false;
        }
        let c = &self.expr.constant;
        if first {
            write!(f, "{c}")
        } else if c.is_negative() {
            write!(f, " - {}", c.abs())
        } else if !c.is_zero() {
            write!(f, " + {c}")
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Rel {
    fn holds(self, v: &BigInt) -> bool {
        match self {
            Rel::Lt => v.is_negative(),
            Rel::Le => !v.is_positive(),
            Rel::Eq => v.is_zero(),
            Rel::Ge => !v.is_negative(),
            Rel::Gt => v.is_positive(),
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }
}

/// `expr rel 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub expr: AffineExpr,
    pub rel: Rel,
}

impl Constraint {
    pub fn holds(&self, values: &[BigInt]) -> bool {
        self.rel.holds(&self.expr.eval(values))
    }

    pub fn display<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Constraint, &'a [String]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(
                    f,
                    "{} {} 0",
                    self.0.expr.display(self.1),
                    self.0.rel.symbol()
                )
            }
        }
        D(self, names)
    }
}

pub fn all_hold(guard: &[Constraint], values: &[BigInt]) -> bool {
    guard.iter().all(|c| c.holds(values))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub name: String,
    pub source: usize,
    pub target: usize,
    pub guard: Vec<Constraint>,
    /// Parallel assignments; unlisted variables keep their value.
    pub updates: Vec<(usize, AffineExpr)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSystem {
    pub variables: Vec<String>,
    pub locations: Vec<String>,
    pub transitions: Vec<Transition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub location: usize,
    pub values: Vec<BigInt>,
}

impl Configuration {
    pub fn new(location: usize, values: &[i64]) -> Self {
        Configuration {
            location,
            values: values.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub trace: Vec<Configuration>,
    /// Transition indices fired between consecutive trace entries.
    pub fired: Vec<usize>,
    pub halted: bool,
}

impl TransitionSystem {
    pub fn new(
        variables: Vec<String>,
        locations: Vec<String>,
        transitions: Vec<Transition>,
    ) -> Result<Self> {
        let k = variables.len();
        for t in &transitions {
            let bad_var = t
                .guard
                .iter()
                .filter_map(|c| c.expr.max_var())
                .chain(
                    t.updates
                        .iter()
                        .flat_map(|(v, e)| [Some(*v), e.max_var()])
                        .flatten(),
                )
                .any(|v| v >= k);
            if bad_var {
                return Err(Error::Program(format!(
                    "transition {} uses an undeclared variable",
                    t.name
                )));
            }
            if t.source >= locations.len() || t.target >= locations.len() {
                return Err(Error::Program(format!(
                    "transition {} uses an undeclared location",
                    t.name
                )));
            }
        }
        Ok(TransitionSystem {
            variables,
            locations,
            transitions,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        dsl::parse_program(text)
    }

    /// The built-in program named `name` (only `fig1`).
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "fig1" => Some(fig1()),
            _ => None,
        }
    }

    pub fn variable(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    pub fn transition(&self, name: &str) -> Option<usize> {
        self.transitions.iter().position(|t| t.name == name)
    }

    pub fn validate(&self, c: &Configuration) -> Result<()> {
        if c.location >= self.locations.len() || c.values.len() != self.variables.len() {
            return Err(Error::ShapeMismatch(format!(
                "configuration does not match a program with {} variables",
                self.variables.len()
            )));
        }
        Ok(())
    }

    fn fire(&self, t: &Transition, c: &Configuration) -> Configuration {
        let mut values = c.values.clone();
        for (v, e) in &t.updates {
            values[*v] = e.eval(&c.values);
        }
        Configuration {
            location: t.target,
            values,
        }
    }

    /// Indices of the transitions enabled in `c`.
    pub fn enabled(&self, c: &Configuration) -> Vec<usize> {
        self.transitions
            .iter()
            .enumerate()
            .filter(|(_, t)| t.source == c.location && all_hold(&t.guard, &c.values))
            .map(|(i, _)| i)
            .collect()
    }

    /// All successors of `c`, one per enabled transition.
    pub fn step(&self, c: &Configuration) -> Result<Vec<(usize, Configuration)>> {
        self.validate(c)?;
        Ok(self
            .enabled(c)
            .into_iter()
            .map(|i| (i, self.fire(&self.transitions[i], c)))
            .collect())
    }

    /// The unique successor, `None` at a halt, or `Nondeterminism`.
    pub fn step_deterministic(&self, c: &Configuration) -> Result<Option<(usize, Configuration)>> {
        let mut succ = self.step(c)?;
        match succ.len() {
            0 => Ok(None),
            1 => Ok(succ.pop()),
            _ => Err(Error::Nondeterminism(format!(
                "{} enables {}",
                self.show(c),
                succ.iter()
                    .map(|(i, _)| self.transitions[*i].name.as_str())
                    .collect::<Vec<_>>()
                    .join(" and ")
            ))),
        }
    }

    /// Maximal deterministic execution from `c0`, at most `max_steps` steps.
    pub fn run(&self, c0: &Configuration, max_steps: u64) -> Result<Run> {
        let mut trace = vec![c0.clone()];
        let mut fired = Vec::new();
        let mut cur = c0.clone();
        for _ in 0..max_steps {
            match self.step_deterministic(&cur)? {
                None => {
                    return Ok(Run {
                        trace,
                        fired,
                        halted: true,
                    })
                }
                Some((i, next)) => {
                    fired.push(i);
                    trace.push(next.clone());
                    cur = next;
                }
            }
        }
        let halted = self.step(&cur)?.is_empty();
        Ok(Run {
            trace,
            fired,
            halted,
        })
    }

    /// `(l0, 3, 1, 4)`
    pub fn show(&self, c: &Configuration) -> String {
        let mut s = format!("({}", self.locations[c.location]);
        for v in &c.values {
            s.push_str(&format!(", {v}"));
        }
        s.push(')');
        s
    }

    /// Parses `(l0, 3, 1, 4)`; the location may be omitted when there is
    /// only one, and the parentheses are optional.
    pub fn parse_config(&self, text: &str) -> Result<Configuration> {
        let inner = text.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .unwrap_or(inner);
        let mut parts: Vec<&str> = inner.split(',').map(str::trim).collect();
        let location = match parts
            .first()
            .and_then(|p| self.locations.iter().position(|l| l == p))
        {
            Some(i) => {
                parts.remove(0);
                i
            }
            None if self.locations.len() == 1 => 0,
            None => {
                return Err(Error::syntax(0, "expected a location name first"));
            }
        };
        let values = parts
            .iter()
            .map(|p| {
                p.parse::<BigInt>()
                    .map_err(|_| Error::syntax(0, format!("'{p}' is not an integer")))
            })
            .collect::<Result<Vec<_>>>()?;
        let c = Configuration { location, values };
        self.validate(&c)?;
        Ok(c)
    }

    /// Parses a comma-separated conjunction of comparisons over the
    /// program variables, such as `x >= 0, y >= 0`.
    pub fn parse_guard(&self, text: &str) -> Result<Vec<Constraint>> {
        dsl::parse_guard(&self.variables, text)
    }

    pub fn parse_expr(&self, text: &str) -> Result<AffineExpr> {
        dsl::parse_expr(&self.variables, text)
    }
}

pub fn fig1() -> TransitionSystem {
    TransitionSystem::parse(FIG1_SOURCE).expect("built-in program parses")
}
