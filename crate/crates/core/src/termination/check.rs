//! Bounded checks of ranking functions, control conditions and disjunctive
//! termination arguments, plus the exact run identities of `fig1`.

use std::collections::{HashSet, VecDeque};

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

use super::{all_hold, fig1, AffineExpr, Configuration, Constraint, RunCaps, TransitionSystem};
use crate::error::{Error, Result};
use crate::hierarchy::{cichon, cichon_at_least, hardy_deferred, ControlFunction, EvalBudget};
use crate::ordinal::Ordinal;
use crate::wqo::{Element, Space};
use crate::{Nat, Verdict};

/// How configurations are mapped into the rank space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RankMap {
    /// `(f_1, …, f_d)` as a right-nested tuple of naturals.
    Tuple(Vec<AffineExpr>),
    /// Multiset holding each key with the given multiplicity.
    Multiset(Vec<(Element, AffineExpr)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingSpec {
    pub map: RankMap,
    pub space: Space,
    /// Compare ranks through their order types in `space`.
    pub ordinal: bool,
    pub control: ControlFunction,
    /// Configurations where ranks must be valid; empty means everywhere.
    pub domain: Vec<Constraint>,
}

fn split_top(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' | '{' => depth += 1,
            ')' | '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&text[start..]);
    out
}

impl RankingSpec {
    pub fn new(map: RankMap, space: Space, control: ControlFunction) -> Self {
        RankingSpec {
            map,
            space,
            ordinal: false,
            control,
            domain: Vec::new(),
        }
    }

    /// Parses a map such as `(y, x)` or `y` for tuples, or `{1: y, 0: x}`
    /// for multisets over `space`'s base.
    pub fn parse_map(sys: &TransitionSystem, space: &Space, text: &str) -> Result<RankMap> {
        let t = text.trim();
        if let Some(inner) = t.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
            let Space::Multiset(base) = space else {
                return Err(Error::ShapeMismatch(format!(
                    "a multiset rank needs a multiset space, not {space}"
                )));
            };
            let mut entries = Vec::new();
            if !inner.trim().is_empty() {
                for part in split_top(inner) {
                    let (key, mult) = part.rsplit_once(':').ok_or_else(|| {
                        Error::syntax(0, format!("expected 'key: multiplicity' in '{part}'"))
                    })?;
                    entries.push((base.parse_element(key)?, sys.parse_expr(mult)?));
                }
            }
            return Ok(RankMap::Multiset(entries));
        }
        let inner = t
            .strip_prefix('(')
            .and_then(|s| s.strip_suffix(')'))
            .filter(|s| split_top(s).len() > 1)
            .unwrap_or(t);
        let exprs = split_top(inner)
            .into_iter()
            .map(|p| sys.parse_expr(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(RankMap::Tuple(exprs))
    }

    pub fn in_domain(&self, c: &Configuration) -> bool {
        all_hold(&self.domain, &c.values)
    }

    /// The rank of `c`, or `None` when it falls outside the space.
    pub fn rank(&self, c: &Configuration) -> Option<Element> {
        let nat = |e: &AffineExpr| e.eval(&c.values).to_biguint();
        let e = match &self.map {
            RankMap::Tuple(fs) if fs.is_empty() => return None,
            RankMap::Tuple(fs) => Element::tuple(
                fs.iter()
                    .map(|f| nat(f).map(Element::Nat))
                    .collect::<Option<_>>()?,
            ),
            RankMap::Multiset(entries) => Element::multiset(
                entries
                    .iter()
                    .map(|(k, f)| Some((k.clone(), nat(f)?)))
                    .collect::<Option<_>>()?,
            ),
        };
        self.space.validate(&e).ok()?;
        Some(e)
    }

    pub fn rank_norm(&self, e: &Element) -> Result<Nat> {
        if self.ordinal {
            Ok(self.space.element_order_type(e)?.norm())
        } else {
            self.space.norm_of(e)
        }
    }

    /// Whether `f(c) → f(c')` is allowed: strict decrease over a well order,
    /// `f(c) ≰ f(c')` otherwise.
    fn decreases(&self, before: &Element, after: &Element) -> Result<bool> {
        if self.ordinal {
            let a = self.space.element_order_type(before)?;
            let b = self.space.element_order_type(after)?;
            return Ok(b < a);
        }
        Ok(!self.space.leq(before, after)?)
    }

    pub fn mode(&self) -> RankingMode {
        if self.ordinal {
            RankingMode::OrdinalDescent
        } else if self.space.is_well_order() {
            RankingMode::StrictDescent
        } else {
            RankingMode::QuasiRanking
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankingMode {
    /// Ranks in a well order, checked for strict decrease per step.
    StrictDescent,
    /// Ranks compared through their order types.
    OrdinalDescent,
    /// Ranks in a wqo, checked for `f(c) ≰ f(c')` per step only. This is
    /// sufficient for the condition along longer runs only when
    /// incomparability composes, which the check does not establish.
    QuasiRanking,
}

impl std::fmt::Display for RankingMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RankingMode::StrictDescent => "strict-descent",
            RankingMode::OrdinalDescent => "ordinal-descent",
            RankingMode::QuasiRanking => "quasi-ranking (per step)",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub from: Configuration,
    pub to: Configuration,
    /// The transition fired, for single steps.
    pub transition: Option<usize>,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankingReport {
    pub verdict: Verdict,
    pub mode: RankingMode,
    /// Configurations whose successors were checked.
    pub explored: u64,
    pub counterexample: Option<Counterexample>,
}

fn fail(
    from: &Configuration,
    to: &Configuration,
    t: Option<usize>,
    reason: String,
) -> Counterexample {
    Counterexample {
        from: from.clone(),
        to: to.clone(),
        transition: t,
        reason,
    }
}

/// Checks `spec` on every step between configurations reachable from
/// `starts`. Sources outside the domain are skipped; steps from inside the
/// domain must stay inside it.
pub fn check_ranking(
    sys: &TransitionSystem,
    spec: &RankingSpec,
    starts: &[Configuration],
    max_configs: u64,
) -> Result<RankingReport> {
    let mode = spec.mode();
    if mode == RankingMode::OrdinalDescent && !spec.space.is_well_order() {
        return Err(Error::NotAWellOrder(spec.space.to_string()));
    }
    let mut seen: HashSet<Configuration> = HashSet::new();
    let mut queue: VecDeque<Configuration> = VecDeque::new();
    for s in starts {
        sys.validate(s)?;
        if seen.insert(s.clone()) {
            queue.push_back(s.clone());
        }
    }
    let mut explored = 0u64;
    let report = |verdict, explored, cx| RankingReport {
        verdict,
        mode,
        explored,
        counterexample: cx,
    };
    while let Some(c) = queue.pop_front() {
        if !spec.in_domain(&c) {
            continue;
        }
        if explored >= max_configs {
            return Err(Error::BudgetExceeded {
                what: "configurations",
                consumed: explored,
            });
        }
        explored += 1;
        let Some(fc) = spec.rank(&c) else {
            let cx = fail(&c, &c, None, "rank lies outside the space".into());
            return Ok(report(Verdict::Fails, explored, Some(cx)));
        };
        for (t, next) in sys.step(&c)? {
            let name = &sys.transitions[t].name;
            let problem = if !spec.in_domain(&next) {
                Some(format!("transition {name} leaves the domain"))
            } else {
                match spec.rank(&next) {
                    None => Some(format!("rank after {name} lies outside the space")),
                    Some(fn_) if !spec.decreases(&fc, &fn_)? => Some(format!(
                        "rank does not decrease along {name}: {fc} then {fn_}"
                    )),
                    Some(_) => None,
                }
            };
            if let Some(reason) = problem {
                let cx = fail(&c, &next, Some(t), reason);
                return Ok(report(Verdict::Fails, explored, Some(cx)));
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(report(Verdict::Holds, explored, None))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ControlReport {
    pub n0: Nat,
    /// Steps taken by the deterministic run.
    pub steps: u64,
    pub halted: bool,
    /// `|f(c')| ≤ g(|f(c)|)` for every step.
    pub per_step: Verdict,
    pub per_step_failure: Option<Counterexample>,
    /// `|f(c_i)| ≤ g^i(n0)` for every `i`.
    pub sequence: Verdict,
    /// First index where the sequence condition fails.
    pub sequence_failure: Option<usize>,
}

/// Checks both control conditions along the deterministic run from
/// `start`, stepping one transition at a time within `caps` (`max_blocks`
/// counts steps). `n0` defaults to the largest absolute value in `start`.
/// A run that neither halts nor fails within the caps is inconclusive.
pub fn check_control(
    sys: &TransitionSystem,
    spec: &RankingSpec,
    start: &Configuration,
    n0: Option<Nat>,
    caps: &RunCaps,
) -> Result<ControlReport> {
    sys.validate(start)?;
    let n0 = n0.unwrap_or_else(|| {
        start
            .values
            .iter()
            .map(|v| v.magnitude().clone())
            .max()
            .unwrap_or_default()
    });
    let g = &spec.control;
    let norm = |c: &Configuration| -> Result<Option<Nat>> {
        if !spec.in_domain(c) {
            return Ok(None);
        }
        spec.rank(c).map(|e| spec.rank_norm(&e)).transpose()
    };

    let mut per_step_failure = None;
    let mut sequence_failure = None;
    let mut stopped: Option<String> = None;
    let mut halted = false;
    let mut steps = 0u64;
    // g^i(n0); once it is wider than any norm the caps allow, it stops growing
    let mut bound = n0.clone();
    let saturation = caps.max_bits + 64;

    let mut cur = start.clone();
    let Some(mut prev) = norm(&cur)? else {
        let cx = fail(&cur, &cur, None, "rank lies outside the space".into());
        return Ok(ControlReport {
            n0,
            steps,
            halted,
            per_step: Verdict::Fails,
            per_step_failure: Some(cx),
            sequence: Verdict::Fails,
            sequence_failure: Some(0),
        });
    };
    if prev > bound {
        sequence_failure = Some(0);
    }
    while per_step_failure.is_none() || sequence_failure.is_none() {
        if steps >= caps.max_blocks {
            stopped = Some(format!("no halt within {steps} steps"));
            break;
        }
        let Some((t, next)) = sys.step_deterministic(&cur)? else {
            halted = true;
            break;
        };
        if let Some(v) = next.values.iter().find(|v| v.bits() > caps.max_bits) {
            stopped = Some(format!("a value reached {} bits", v.bits()));
            break;
        }
        steps += 1;
        let Some(n) = norm(&next)? else {
            let cx = fail(&cur, &next, Some(t), "rank lies outside the space".into());
            per_step_failure.get_or_insert(cx);
            sequence_failure.get_or_insert(steps as usize);
            break;
        };
        if per_step_failure.is_none() && n > g.apply(&prev) {
            per_step_failure = Some(fail(
                &cur,
                &next,
                Some(t),
                format!("|f| goes from {prev} to {n} > g({prev})"),
            ));
        }
        if bound.bits() <= saturation {
            bound = g.apply(&bound);
        } else if n.bits() >= bound.bits() {
            stopped = Some(format!("|f| reached {} bits", n.bits()));
            break;
        }
        if sequence_failure.is_none() && n > bound {
            sequence_failure = Some(steps as usize);
        }
        prev = n;
        cur = next;
    }

    let verdict = |failed: bool| match (&stopped, failed) {
        (_, true) => Verdict::Fails,
        (Some(why), false) => Verdict::Inconclusive(why.clone()),
        (None, false) => Verdict::Holds,
    };
    Ok(ControlReport {
        n0,
        steps,
        halted,
        per_step: verdict(per_step_failure.is_some()),
        per_step_failure,
        sequence: verdict(sequence_failure.is_some()),
        sequence_failure,
    })
}

/// A relation `T` given by a guard over `x` and `x'`, with a rank into ℕ
/// that must decrease on `T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    /// Over variable indices `0..k` (before) and `k..2k` (after).
    pub guard: Vec<Constraint>,
    pub rank: AffineExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DisjunctiveArgument {
    pub relations: Vec<Relation>,
}

impl DisjunctiveArgument {
    /// Parses `rel T1 when x > 0, x' < x rank x; …`.
    pub fn parse(sys: &TransitionSystem, text: &str) -> Result<Self> {
        let relations = super::dsl::parse_relations(&sys.variables, text)?
            .into_iter()
            .map(|(name, guard, rank)| Relation { name, guard, rank })
            .collect();
        Ok(DisjunctiveArgument { relations })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjunctiveReport {
    pub verdict: Verdict,
    pub pairs_checked: u64,
    /// The pair budget ran out before every reachable pair was seen.
    pub horizon_reached: bool,
    pub witness: Option<Counterexample>,
}

pub const DEFAULT_HORIZON_PAIRS: u64 = 10_000;

/// Checks, for pairs `c →⁺ c'` with `c` reachable from `starts`, that some
/// relation holds and that the rank of every relation holding on the pair
/// is a natural number that decreases. At most `horizon_pairs` pairs.
pub fn check_disjunctive(
    sys: &TransitionSystem,
    arg: &DisjunctiveArgument,
    starts: &[Configuration],
    horizon_pairs: u64,
) -> Result<DisjunctiveReport> {
    let mut reachable: Vec<Configuration> = Vec::new();
    let mut seen: HashSet<Configuration> = HashSet::new();
    for s in starts {
        sys.validate(s)?;
        if seen.insert(s.clone()) {
            reachable.push(s.clone());
        }
    }
    let mut pairs = 0u64;
    let mut i = 0;
    while i < reachable.len() {
        let c = reachable[i].clone();
        i += 1;
        // descendants of c, in breadth-first order
        let mut desc_seen: HashSet<Configuration> = HashSet::new();
        let mut queue: VecDeque<Configuration> = VecDeque::new();
        for (_, n) in sys.step(&c)? {
            if desc_seen.insert(n.clone()) {
                queue.push_back(n);
            }
        }
        while let Some(d) = queue.pop_front() {
            if pairs >= horizon_pairs {
                return Ok(DisjunctiveReport {
                    verdict: Verdict::Holds,
                    pairs_checked: pairs,
                    horizon_reached: true,
                    witness: None,
                });
            }
            pairs += 1;
            if let Some(w) = pair_violation(arg, &c, &d) {
                return Ok(DisjunctiveReport {
                    verdict: Verdict::Fails,
                    pairs_checked: pairs,
                    horizon_reached: false,
                    witness: Some(w),
                });
            }
            for (_, n) in sys.step(&d)? {
                if desc_seen.insert(n.clone()) {
                    queue.push_back(n);
                }
            }
            if seen.insert(d.clone()) {
                reachable.push(d);
            }
        }
    }
    Ok(DisjunctiveReport {
        verdict: Verdict::Holds,
        pairs_checked: pairs,
        horizon_reached: false,
        witness: None,
    })
}

fn pair_violation(
    arg: &DisjunctiveArgument,
    c: &Configuration,
    d: &Configuration,
) -> Option<Counterexample> {
    let joint: Vec<BigInt> = c.values.iter().chain(&d.values).cloned().collect();
    let mut covered = false;
    for r in &arg.relations {
        if !all_hold(&r.guard, &joint) {
            continue;
        }
        covered = true;
        let (before, after) = (r.rank.eval(&c.values), r.rank.eval(&d.values));
        if before.is_negative() || after.is_negative() || after >= before {
            return Some(fail(
                c,
                d,
                None,
                format!("rank of {} goes from {before} to {after}", r.name),
            ));
        }
    }
    (!covered).then(|| fail(c, d, None, "no relation contains the pair".into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub steps: Nat,
    pub x_final: Nat,
    pub n_final: Nat,
    /// `g_{ω·y+x}(n)` for `g = mul:2`.
    pub cichon: Nat,
    /// `g^{ω·y+x}(n)` when it has at most `HARDY_PRINT_BITS` bits.
    pub hardy: Option<Nat>,
    /// `steps + x_final = g_{ω·y+x}(n)`.
    pub length_identity: Verdict,
    /// `2^{x_final}·n_final = g^{ω·y+x}(n)`.
    pub value_identity: Verdict,
    /// `steps = g_{ω·y+x}(n)`, which holds only when `x_final = 0`.
    pub uncorrected_length: bool,
    /// `n_final = g^{ω·y+x}(n)`.
    pub uncorrected_value: bool,
}

pub const HARDY_PRINT_BITS: u64 = 4096;

/// `(e, o)` with `v = 2^e·o` and `o` odd; `None` for zero.
fn two_adic(shift: &Nat, v: &Nat) -> Option<(Nat, Nat)> {
    let tz = v.trailing_zeros()?;
    Some((shift + tz, v >> tz))
}

/// Runs `fig1` from `(x, y, n)` and compares the result with the hierarchies
/// of `mul:2` at `ω·y + x`.
pub fn execution_length_identity(
    x: &Nat,
    y: &Nat,
    n: &Nat,
    caps: &RunCaps,
    budget: &EvalBudget,
) -> Result<IdentityReport> {
    let sys = fig1();
    let to_int = |v: &Nat| BigInt::from_biguint(Sign::Plus, v.clone());
    let c0 = Configuration {
        location: 0,
        values: vec![to_int(x), to_int(y), to_int(n)],
    };
    let run = super::run_accelerated(&sys, &c0, caps)?;
    if !run.halted {
        return Err(Error::BudgetExceeded {
            what: "run blocks",
            consumed: run.blocks.len() as u64,
        });
    }
    let last = run.final_config();
    let x_final = last.values[0].to_biguint().expect("x stays non-negative");
    let n_final = last.values[2].to_biguint().expect("n stays non-negative");

    let g = ControlFunction::mul(2)?;
    let alpha = Ordinal::omega()
        .mul(&Ordinal::finite(y.clone()))
        .add(&Ordinal::finite(x.clone()));
    let cichon_value = cichon(&g, &alpha, n, budget)?;
    let (k, base) = hardy_deferred(&g, &alpha, n, budget)?;

    let lhs = two_adic(&x_final, &n_final);
    let rhs = two_adic(&k, &base);
    let value_holds = lhs == rhs;
    let hardy = (k
        .to_u64()
        .is_some_and(|k| k + base.bits() <= HARDY_PRINT_BITS))
    .then(|| base.clone() << k.to_u64().expect("checked"));
    let uncorrected_value = x_final.is_zero() && value_holds;

    Ok(IdentityReport {
        length_identity: Verdict::from_bool(&run.steps + &x_final == cichon_value),
        value_identity: Verdict::from_bool(value_holds),
        uncorrected_length: run.steps == cichon_value,
        uncorrected_value,
        steps: run.steps,
        x_final,
        n_final,
        cichon: cichon_value,
        hardy,
    })
}

/// Whether `steps ≤ g_α(n0)`, decided without evaluating `g_α(n0)` in full.
pub fn corollary_bound(
    steps: &Nat,
    g: &ControlFunction,
    alpha: &Ordinal,
    n0: &Nat,
    budget: &EvalBudget,
) -> Result<Verdict> {
    Verdict::from_result(cichon_at_least(g, alpha, n0, steps, budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat;

    fn cfg(v: &[i64]) -> Configuration {
        Configuration::new(0, v)
    }

    fn starts() -> Vec<Configuration> {
        let mut out = Vec::new();
        for x in 0..3 {
            for y in 0..3 {
                for n in 0..3 {
                    out.push(cfg(&[x, y, n]));
                }
            }
        }
        out
    }

    fn lex_spec(sys: &TransitionSystem, map: &str) -> RankingSpec {
        let space: Space = "lex(nat,nat)".parse().unwrap();
        let map = RankingSpec::parse_map(sys, &space, map).unwrap();
        RankingSpec::new(map, space, ControlFunction::mul(2).unwrap())
    }

    #[test]
    fn lex_rank_passes_and_swapped_fails_on_b() {
        let p = fig1();
        let ok = check_ranking(&p, &lex_spec(&p, "(y, x)"), &starts(), 100_000).unwrap();
        assert_eq!(ok.verdict, Verdict::Holds);
        assert_eq!(ok.mode, RankingMode::StrictDescent);
        let bad = check_ranking(&p, &lex_spec(&p, "(x, y)"), &starts(), 100_000).unwrap();
        assert_eq!(bad.verdict, Verdict::Fails);
        assert_eq!(bad.counterexample.unwrap().transition, p.transition("b"));
    }

    #[test]
    fn multiset_rank_passes() {
        let p = fig1();
        let space: Space = "mset(fin:2)".parse().unwrap();
        let map = RankingSpec::parse_map(&p, &space, "{1: y, 0: x}").unwrap();
        let spec = RankingSpec::new(map, space, ControlFunction::mul(2).unwrap());
        let r = check_ranking(&p, &spec, &starts(), 100_000).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
    }

    #[test]
    fn ordinal_mode_agrees_on_lex() {
        let p = fig1();
        let mut spec = lex_spec(&p, "(y, x)");
        spec.ordinal = true;
        let r = check_ranking(&p, &spec, &starts(), 100_000).unwrap();
        assert_eq!(
            (r.verdict, r.mode),
            (Verdict::Holds, RankingMode::OrdinalDescent)
        );
    }

    #[test]
    fn negative_ranks_fail_unless_excluded() {
        let p = fig1();
        let spec = lex_spec(&p, "(y, x)");
        let r = check_ranking(&p, &spec, &[cfg(&[-1, 5, 0])], 100).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let mut spec = spec;
        spec.domain = p.parse_guard("x >= 0, y >= 0").unwrap();
        let r = check_ranking(&p, &spec, &[cfg(&[-1, 5, 0])], 100).unwrap();
        assert_eq!((r.verdict, r.explored), (Verdict::Holds, 0));
    }

    #[test]
    fn control_conditions() {
        let p = fig1();
        let spec = lex_spec(&p, "(y, x)");
        let caps = RunCaps {
            max_blocks: 10_000,
            max_bits: 10_000,
        };
        let r = check_control(&p, &spec, &cfg(&[2, 2, 2]), None, &caps).unwrap();
        assert_eq!(r.n0, nat(2));
        assert!(r.halted);
        assert_eq!((r.per_step, r.sequence), (Verdict::Fails, Verdict::Holds));
        let r = check_control(&p, &spec, &cfg(&[0, 3, 50]), None, &caps).unwrap();
        assert_eq!(r.per_step, Verdict::Fails);
        assert_eq!(r.per_step_failure.unwrap().transition, p.transition("b"));
        assert!(matches!(r.sequence, Verdict::Inconclusive(_)));
        let constant = RankingSpec::new(
            RankMap::Tuple(vec![AffineExpr::constant(3)]),
            Space::Naturals,
            ControlFunction::Successor,
        );
        let r = check_control(&p, &constant, &cfg(&[1, 1, 1]), Some(nat(3)), &caps).unwrap();
        assert!(r.per_step.holds() && r.sequence.holds());
    }

    #[test]
    fn disjunctive_arguments() {
        let p = fig1();
        let both = DisjunctiveArgument::parse(
            &p,
            "rel T1 when x > 0, x' < x rank x; rel T2 when y > 0, y' < y rank y;",
        )
        .unwrap();
        let r = check_disjunctive(&p, &both, &starts(), DEFAULT_HORIZON_PAIRS).unwrap();
        assert_eq!(r.verdict, Verdict::Holds);
        assert!(r.pairs_checked > 0);
        let one = DisjunctiveArgument {
            relations: both.relations[..1].to_vec(),
        };
        let r = check_disjunctive(&p, &one, &starts(), DEFAULT_HORIZON_PAIRS).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let w = r.witness.unwrap();
        assert!(w.to.values[1] < w.from.values[1]);
        let r = check_disjunctive(&p, &DisjunctiveArgument::default(), &starts(), 100).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
    }

    #[test]
    fn identity_examples() {
        let caps = RunCaps::default();
        let b = EvalBudget::default();
        let r = execution_length_identity(&nat(1), &nat(1), &nat(1), &caps, &b).unwrap();
        assert_eq!(
            (r.steps.clone(), r.x_final.clone(), r.cichon.clone()),
            (nat(2), nat(2), nat(4))
        );
        assert_eq!(r.hardy, Some(nat(16)));
        assert!(r.length_identity.holds() && r.value_identity.holds());
        assert!(!r.uncorrected_length);
        let r = execution_length_identity(&nat(0), &nat(0), &nat(5), &caps, &b).unwrap();
        assert_eq!((r.steps, r.cichon), (nat(0), nat(0)));
        let r = execution_length_identity(&nat(0), &nat(1), &nat(1), &caps, &b).unwrap();
        assert_eq!((r.steps, r.x_final, r.cichon), (nat(1), nat(1), nat(2)));
    }

    #[test]
    fn identity_with_zero_n() {
        let r = execution_length_identity(
            &nat(2),
            &nat(2),
            &nat(0),
            &RunCaps::default(),
            &EvalBudget::default(),
        )
        .unwrap();
        assert!(r.length_identity.holds() && r.value_identity.holds());
    }

    #[test]
    fn corollary_examples() {
        let g = ControlFunction::mul(2).unwrap();
        let w2: Ordinal = "w^2".parse().unwrap();
        let b = EvalBudget::default();
        assert!(corollary_bound(&nat(2), &g, &w2, &nat(1), &b)
            .unwrap()
            .holds());
        // g_{ω²}(0) = 1
        assert_eq!(
            corollary_bound(&nat(2), &g, &w2, &nat(0), &b).unwrap(),
            Verdict::Fails
        );
    }
}
