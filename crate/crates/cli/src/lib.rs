//! Command-line front end. Every command prints `RESULT: <value>` as its
//! first line, followed by details.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or input error,
//! 3 a budget ran out.

use std::fmt::Write as _;
use std::path::Path;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigUint;

use ordlen::classify::{classify_bound, classify_complexity, control_class_index, ordinal_add};
use ordlen::hierarchy::{cichon, hardy, hardy_via_cichon_check, ControlFunction, EvalBudget};
use ordlen::lengths::{
    check_product_bound, length_search, length_wo_dp, verify_proposition, verify_theorem,
    ControlledSequence, SearchCaps, DEFAULT_MAX_NODES,
};
use ordlen::ordinal::pointwise_leq;
use ordlen::termination::{
    check_control, check_disjunctive, check_ranking, execution_length_identity, run_accelerated,
    Configuration, Counterexample, DisjunctiveArgument, RankingSpec, RunCaps, TransitionSystem,
    DEFAULT_HORIZON_PAIRS, DEFAULT_TRACE_STEPS,
};
use ordlen::wqo::DEFAULT_ELEMENT_CAP;
use ordlen::{Error, Nat, Ordinal, Space, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

const GRAMMARS: &str = "\
input syntax:
  ordinal   0 | w | w^2 | w^(w+1)*3 + w*2 + 5      (w stands for omega)
  control   succ | add:k | mul:k | affine:a:b
  space     fin:d | eq:d | nat | lex(S,T) | prod(S,T) | mset(S) | ord(alpha)
  element   7 | (1, 2) | (1, 2, 3) | {1:2, 0:3}
  program   fig1, a file, or text such as
            var x; loc l; trans t: l -> l when x > 0 do x := x - 1;
  config    (l0, 3, 1, 4) or 3, 1, 4 for single-location programs";

#[derive(Debug, Parser)]
#[command(
    name = "ordlen",
    version,
    about = "Ordinals, hierarchies, length functions and termination checks"
)]
pub struct Cli {
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Recursion steps, or execution steps for program runs [default:
    /// 10000000 for evaluation and accelerated runs, 10000 for traced runs].
    #[arg(long, global = true)]
    pub max_steps: Option<u64>,
    /// Search-tree nodes.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_NODES)]
    pub max_nodes: u64,
    /// Bit length of any intermediate value.
    #[arg(long, global = true, default_value_t = ordlen::hierarchy::DEFAULT_MAX_VALUE_BITS)]
    pub max_bits: u64,
}

impl BudgetArgs {
    fn steps(&self) -> u64 {
        self.max_steps
            .unwrap_or(ordlen::hierarchy::DEFAULT_MAX_STEPS)
    }

    fn trace_steps(&self) -> u64 {
        self.max_steps.unwrap_or(DEFAULT_TRACE_STEPS)
    }

    fn eval(&self) -> Result<EvalBudget, Error> {
        EvalBudget::new(self.steps(), self.max_bits)
    }

    fn search(&self) -> Result<SearchCaps, Error> {
        Ok(SearchCaps {
            max_nodes: self.max_nodes,
            max_elements: DEFAULT_ELEMENT_CAP,
            eval: self.eval()?,
        })
    }

    fn run(&self) -> RunCaps {
        RunCaps {
            max_blocks: self.steps(),
            max_bits: self.max_bits,
        }
    }
}

#[derive(Debug, Args)]
pub struct ProgramArg {
    /// Built-in name, file path or program text.
    #[arg(long, default_value = "fig1")]
    pub program: String,
}

#[derive(Debug, Args)]
pub struct StartsArg {
    /// Start configuration; repeatable.
    #[arg(long = "start")]
    pub starts: Vec<String>,
    /// Also start from every configuration with values in 0..=K at the first location.
    #[arg(long)]
    pub grid: Option<u64>,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Rank map: `(y, x)` for tuples, `{1: y, 0: x}` for multisets.
    #[arg(long)]
    pub rank: String,
    #[arg(long, default_value = "nat")]
    pub space: String,
    /// Compare ranks by their order types.
    #[arg(long)]
    pub ordinal: bool,
    #[arg(long, default_value = "succ")]
    pub g: String,
    /// Guard restricting where ranks must be valid.
    #[arg(long, default_value = "")]
    pub domain: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare two ordinals; with --x also decide the pointwise order.
    OrdCompare {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        x: Option<BigUint>,
    },
    /// Norm and kind of an ordinal.
    OrdNorm {
        #[arg(long)]
        alpha: String,
    },
    /// x-th element of the fundamental sequence of a limit.
    OrdFund {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        x: BigUint,
    },
    /// Predecessor P_x(alpha).
    OrdPred {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        x: BigUint,
    },
    /// Largest beta < alpha with norm at most x.
    OrdMaxBelow {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        x: BigUint,
    },
    /// Every beta < alpha with norm at most x, in increasing order.
    OrdEnum {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        x: BigUint,
        #[arg(long)]
        csv: bool,
    },
    /// Ordinal sum a + b.
    OrdAdd {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// g(x), or g^i(x) with --i.
    Control {
        #[arg(long)]
        g: String,
        #[arg(long)]
        x: BigUint,
        #[arg(long)]
        i: Option<BigUint>,
    },
    /// Hardy function g^alpha(x).
    Hardy {
        #[arg(long)]
        g: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        x: BigUint,
    },
    /// Cichon function g_alpha(x).
    Cichon {
        #[arg(long)]
        g: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        x: BigUint,
    },
    /// Check g^alpha(x) = g^(g_alpha(x))(x).
    Bridge {
        #[arg(long)]
        g: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        x: BigUint,
    },
    /// Quasi-order comparison of two elements.
    WqoLeq {
        #[arg(long)]
        space: String,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Norm of an element, and its order type in well orders.
    WqoNorm {
        #[arg(long)]
        space: String,
        #[arg(long)]
        e: String,
    },
    /// Every element of norm at most n.
    WqoElements {
        #[arg(long)]
        space: String,
        #[arg(long)]
        n: BigUint,
        #[arg(long)]
        csv: bool,
    },
    /// Order type of a space.
    OrderType {
        #[arg(long)]
        space: String,
    },
    /// Whether a sequence is bad and (g, n0)-controlled.
    CheckSequence {
        #[arg(long)]
        space: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        n0: BigUint,
        /// Elements separated by ';'.
        #[arg(long)]
        items: String,
    },
    /// Longest controlled bad sequence by exhaustive search.
    LengthSearch {
        #[arg(long)]
        space: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        n0: BigUint,
        #[arg(long)]
        csv: bool,
    },
    /// Longest controlled descending sequence below alpha by dynamic programming.
    LengthDp {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        n0: BigUint,
    },
    /// Compare the descent length with g_alpha(x).
    VerifyTheorem {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        x: BigUint,
    },
    /// Check the max-over-predecessors recursion for g_alpha(x).
    VerifyProp {
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        x: BigUint,
    },
    /// Compare the product-order length over N^d with h_{w^d}(d x), h = d g.
    CheckProductBound {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        g: String,
        #[arg(long)]
        x: BigUint,
    },
    /// Successors of one configuration.
    Step {
        #[command(flatten)]
        program: ProgramArg,
        #[arg(long)]
        config: String,
    },
    /// Deterministic run; prints the trace, or blocks with --accelerate.
    RunProgram {
        #[command(flatten)]
        program: ProgramArg,
        #[arg(long)]
        start: String,
        #[arg(long)]
        accelerate: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Check a ranking function on the configurations reachable from the starts.
    CheckRanking {
        #[command(flatten)]
        program: ProgramArg,
        #[command(flatten)]
        rank: RankArgs,
        #[command(flatten)]
        starts: StartsArg,
        /// Configurations to explore.
        #[arg(long, default_value_t = 1_000_000)]
        max_configs: u64,
    },
    /// Check the per-step and the sequence control conditions along a run.
    CheckControl {
        #[command(flatten)]
        program: ProgramArg,
        #[command(flatten)]
        rank: RankArgs,
        #[arg(long)]
        start: String,
        /// Defaults to the largest absolute start value.
        #[arg(long)]
        n0: Option<BigUint>,
    },
    /// Check a disjunctive termination argument on pairs c ->+ c'.
    CheckDisjunctive {
        #[command(flatten)]
        program: ProgramArg,
        /// `rel T1 when x > 0, x' < x rank x; ...`
        #[arg(long, default_value = "")]
        relations: String,
        #[command(flatten)]
        starts: StartsArg,
        #[arg(long, default_value_t = DEFAULT_HORIZON_PAIRS)]
        horizon: u64,
    },
    /// Run fig1 from (x, y, n) and compare with the mul:2 hierarchies at w*y + x.
    ExecIdentity {
        #[arg(long)]
        x: BigUint,
        #[arg(long)]
        y: BigUint,
        #[arg(long)]
        n: BigUint,
    },
    /// Fast-growing class of a g_{w^alpha} bound.
    Classify {
        /// Exponent alpha of the bound g_{w^alpha}.
        #[arg(long, conflicts_with = "complexity")]
        alpha: Option<String>,
        /// Any complexity index, rounded up to an omega-power.
        #[arg(long)]
        complexity: Option<String>,
        /// Index gamma with g in F_{<gamma}.
        #[arg(long, conflicts_with = "g")]
        gamma: Option<String>,
        /// Control function, mapped to gamma by the built-in table.
        #[arg(long)]
        g: Option<String>,
    },
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: i32,
    result: String,
    body: String,
}

impl Report {
    fn value(v: impl ToString) -> Self {
        Report {
            code: EXIT_OK,
            result: v.to_string(),
            body: String::new(),
        }
    }

    fn verdict(v: &Verdict) -> Self {
        let code = match v {
            Verdict::Holds => EXIT_OK,
            Verdict::Fails => EXIT_FAIL,
            Verdict::Inconclusive(_) => EXIT_BUDGET,
        };
        let mut r = Report {
            code,
            result: v.to_string(),
            body: String::new(),
        };
        if let Verdict::Inconclusive(why) = v {
            r.line(format!("reason: {why}"));
        }
        r
    }

    fn line(&mut self, s: impl AsRef<str>) -> &mut Self {
        self.body.push_str(s.as_ref());
        self.body.push('\n');
        self
    }
}

type Res<T> = Result<T, Error>;

fn ordinal(s: &str) -> Res<Ordinal> {
    s.parse()
}

fn control(s: &str) -> Res<ControlFunction> {
    s.parse()
}

fn space(s: &str) -> Res<Space> {
    s.parse()
}

fn program(p: &ProgramArg) -> Res<TransitionSystem> {
    if let Some(sys) = TransitionSystem::builtin(&p.program) {
        return Ok(sys);
    }
    let path = Path::new(&p.program);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Program(format!("{}: {e}", path.display())))?;
        return TransitionSystem::parse(&text);
    }
    TransitionSystem::parse(&p.program)
}

fn starts(sys: &TransitionSystem, s: &StartsArg) -> Res<Vec<Configuration>> {
    let mut out = s
        .starts
        .iter()
        .map(|t| sys.parse_config(t))
        .collect::<Res<Vec<_>>>()?;
    if let Some(k) = s.grid {
        let k =
            i64::try_from(k).map_err(|_| Error::PreconditionViolated("grid too large".into()))?;
        let vars = sys.variables.len();
        let mut values = vec![0i64; vars];
        loop {
            out.push(Configuration::new(0, &values));
            // odometer over 0..=k in every coordinate
            let Some(i) = (0..vars).rev().find(|&i| values[i] < k) else {
                break;
            };
            values[i] += 1;
            for v in &mut values[i + 1..] {
                *v = 0;
            }
        }
    }
    if out.is_empty() {
        return Err(Error::PreconditionViolated(
            "give at least one --start or a --grid".into(),
        ));
    }
    Ok(out)
}

fn ranking_spec(sys: &TransitionSystem, r: &RankArgs) -> Res<RankingSpec> {
    let sp = space(&r.space)?;
    let map = RankingSpec::parse_map(sys, &sp, &r.rank)?;
    let mut spec = RankingSpec::new(map, sp, control(&r.g)?);
    spec.ordinal = r.ordinal;
    spec.domain = sys.parse_guard(&r.domain)?;
    Ok(spec)
}

fn show_cx(sys: &TransitionSystem, cx: &Counterexample) -> String {
    let via = cx
        .transition
        .map(|t| format!(" --{}-> ", sys.transitions[t].name))
        .unwrap_or_else(|| " ->+ ".to_string());
    format!(
        "counterexample: {}{via}{}: {}",
        sys.show(&cx.from),
        sys.show(&cx.to),
        cx.reason
    )
}

/// Fails if either fails, else inconclusive if either is.
fn both(a: &Verdict, b: &Verdict) -> Verdict {
    match (a, b) {
        (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
        (Verdict::Inconclusive(w), _) | (_, Verdict::Inconclusive(w)) => {
            Verdict::Inconclusive(w.clone())
        }
        _ => Verdict::Holds,
    }
}

fn with_reason(v: &Verdict) -> String {
    match v {
        Verdict::Inconclusive(why) => format!("{v} ({why})"),
        _ => v.to_string(),
    }
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

fn execute(cli: &Cli) -> Res<Report> {
    let b = &cli.budget;
    Ok(match &cli.command {
        Command::OrdCompare { a, b: bb, x } => {
            let (a, bb) = (ordinal(a)?, ordinal(bb)?);
            let mut r = Report::value(match a.cmp(&bb) {
                std::cmp::Ordering::Less => "<",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => ">",
            });
            if let Some(x) = x {
                let le = pointwise_leq(&a, &bb, x);
                r.line(format!("pointwise_leq_{x}: {le}"));
            }
            r
        }
        Command::OrdNorm { alpha } => {
            let a = ordinal(alpha)?;
            let mut r = Report::value(a.norm());
            r.line(format!("kind: {}", a.kind()));
            r
        }
        Command::OrdFund { alpha, x } => Report::value(ordinal(alpha)?.fundamental(x)?),
        Command::OrdPred { alpha, x } => {
            Report::value(ordinal(alpha)?.predecessor_with_budget(x, b.steps())?)
        }
        Command::OrdMaxBelow { alpha, x } => Report::value(ordinal(alpha)?.max_below_with_norm(x)?),
        Command::OrdEnum { alpha, x, csv } => {
            let all = ordinal(alpha)?.enumerate_below(x)?;
            let mut r = Report::value(all.len());
            if *csv {
                let rows: Vec<Vec<String>> = all
                    .iter()
                    .map(|o| vec![o.to_string(), o.norm().to_string()])
                    .collect();
                r.body = csv_text(&["ordinal", "norm"], &rows);
            } else {
                for o in &all {
                    r.line(o.to_string());
                }
            }
            r
        }
        Command::OrdAdd { a, b: bb } => Report::value(ordinal_add(&ordinal(a)?, &ordinal(bb)?)),
        Command::Control { g, x, i } => {
            let g = control(g)?;
            match i {
                None => Report::value(g.apply(x)),
                Some(i) => Report::value(g.iterate(i, x, &b.eval()?)?),
            }
        }
        Command::Hardy { g, alpha, x } => {
            Report::value(hardy(&control(g)?, &ordinal(alpha)?, x, &b.eval()?)?)
        }
        Command::Cichon { g, alpha, x } => {
            Report::value(cichon(&control(g)?, &ordinal(alpha)?, x, &b.eval()?)?)
        }
        Command::Bridge { g, alpha, x } => {
            let ok = hardy_via_cichon_check(&control(g)?, &ordinal(alpha)?, x, &b.eval()?);
            Report::verdict(&Verdict::from_result(ok)?)
        }
        Command::WqoLeq { space: s, a, b: bb } => {
            let sp = space(s)?;
            Report::value(sp.leq(&sp.parse_element(a)?, &sp.parse_element(bb)?)?)
        }
        Command::WqoNorm { space: s, e } => {
            let sp = space(s)?;
            let e = sp.parse_element(e)?;
            let mut r = Report::value(sp.norm_of(&e)?);
            if sp.is_well_order() {
                r.line(format!("order_type: {}", sp.element_order_type(&e)?));
            }
            r
        }
        Command::WqoElements { space: s, n, csv } => {
            let sp = space(s)?;
            let all = sp.elements_up_to(n)?;
            let mut r = Report::value(all.len());
            if *csv {
                let rows: Vec<Vec<String>> = all
                    .iter()
                    .map(|e| Ok(vec![e.to_string(), sp.norm_of(e)?.to_string()]))
                    .collect::<Res<_>>()?;
                r.body = csv_text(&["element", "norm"], &rows);
            } else {
                for e in &all {
                    r.line(e.to_string());
                }
            }
            r
        }
        Command::OrderType { space: s } => Report::value(space(s)?.order_type()?),
        Command::CheckSequence {
            space: s,
            g,
            n0,
            items,
        } => {
            let sp = space(s)?;
            let items = items
                .split(';')
                .filter(|t| !t.trim().is_empty())
                .map(|t| sp.parse_element(t))
                .collect::<Res<Vec<_>>>()?;
            let seq = ControlledSequence {
                space: sp,
                control: control(g)?,
                initial_norm: n0.clone(),
                items,
            };
            let (bad, controlled) = (seq.is_bad()?, seq.is_controlled()?);
            let mut r = Report::verdict(&Verdict::from_bool(bad && controlled));
            r.line(format!("length: {}", seq.len()));
            r.line(format!("bad: {bad}"));
            r.line(format!("controlled: {controlled}"));
            r
        }
        Command::LengthSearch {
            space: s,
            g,
            n0,
            csv,
        } => {
            let sp = space(s)?;
            let g = control(g)?;
            let res = length_search(&sp, &g, n0, &b.search()?)?;
            let mut r = if res.exact {
                Report::value(&res.length)
            } else {
                let mut r = Report::verdict(&Verdict::Inconclusive("node cap reached".into()));
                r.line(format!("lower_bound: {}", res.length));
                r
            };
            if *csv {
                let row = vec![
                    sp.to_string(),
                    g.to_string(),
                    n0.to_string(),
                    res.length.to_string(),
                    res.nodes_explored.to_string(),
                ];
                r.body.push_str(&csv_text(
                    &["space", "control", "n0", "length", "nodes"],
                    &[row],
                ));
            } else {
                r.line(format!("nodes: {}", res.nodes_explored));
                let w: Vec<String> = res.witness.items.iter().map(|e| e.to_string()).collect();
                r.line(format!("witness: {}", w.join("; ")));
            }
            r
        }
        Command::LengthDp { alpha, g, n0 } => Report::value(length_wo_dp(
            &ordinal(alpha)?,
            &control(g)?,
            n0,
            &b.search()?,
        )?),
        Command::VerifyTheorem { alpha, g, x } => Report::verdict(&verify_theorem(
            &ordinal(alpha)?,
            &control(g)?,
            x,
            &b.search()?,
        )?),
        Command::VerifyProp { alpha, g, x } => Report::verdict(&verify_proposition(
            &ordinal(alpha)?,
            &control(g)?,
            x,
            &b.search()?,
        )?),
        Command::CheckProductBound { d, g, x } => {
            let pb = check_product_bound(*d, &control(g)?, x, &b.search()?)?;
            let mut r = Report::verdict(&pb.verdict);
            r.line(format!(
                "length: {}{}",
                pb.search.length,
                if pb.search.exact {
                    ""
                } else {
                    " (lower bound)"
                }
            ));
            match &pb.rhs {
                Some(v) => r.line(format!("bound: {v}")),
                None => r.line("bound: too large to print"),
            };
            r
        }
        Command::Step { program: p, config } => {
            let sys = program(p)?;
            let c = sys.parse_config(config)?;
            let succ = sys.step(&c)?;
            let mut r = Report::value(succ.len());
            for (t, n) in &succ {
                r.line(format!("{}: {}", sys.transitions[*t].name, sys.show(n)));
            }
            r
        }
        Command::RunProgram {
            program: p,
            start,
            accelerate,
            csv,
        } => {
            let sys = program(p)?;
            let c0 = sys.parse_config(start)?;
            let mut rows: Vec<Vec<String>> = Vec::new();
            let row = |fired: &str, count: String, c: &Configuration| {
                let mut v = vec![fired.to_string(), count, sys.locations[c.location].clone()];
                v.extend(c.values.iter().map(|x| x.to_string()));
                v
            };
            rows.push(row("", String::new(), &c0));
            let (steps, halted) = if *accelerate {
                let run = run_accelerated(&sys, &c0, &b.run())?;
                for blk in &run.blocks {
                    let name = &sys.transitions[blk.transition].name;
                    rows.push(row(name, blk.count.to_string(), &blk.after));
                }
                (run.steps, run.halted)
            } else {
                let run = sys.run(&c0, b.trace_steps())?;
                for (t, c) in run.fired.iter().zip(&run.trace[1..]) {
                    rows.push(row(&sys.transitions[*t].name, "1".into(), c));
                }
                (Nat::from(run.fired.len()), run.halted)
            };
            let mut r = Report::value(&steps);
            if !halted {
                r.code = EXIT_BUDGET;
            }
            r.line(format!("halted: {halted}"));
            if *csv {
                let mut header = vec!["transition", "count", "location"];
                header.extend(sys.variables.iter().map(String::as_str));
                r.body.push_str(&csv_text(&header, &rows));
            } else {
                for v in &rows {
                    let c = format!("({})", v[2..].join(", "));
                    if v[0].is_empty() {
                        r.line(c);
                    } else if v[1] == "1" {
                        r.line(format!("-{}-> {c}", v[0]));
                    } else {
                        r.line(format!("-{}^{}-> {c}", v[0], v[1]));
                    }
                }
            }
            r
        }
        Command::CheckRanking {
            program: p,
            rank,
            starts: st,
            max_configs,
        } => {
            let sys = program(p)?;
            let spec = ranking_spec(&sys, rank)?;
            let rep = check_ranking(&sys, &spec, &starts(&sys, st)?, *max_configs)?;
            let mut r = Report::verdict(&rep.verdict);
            r.line(format!("mode: {}", rep.mode));
            r.line(format!("explored: {}", rep.explored));
            if let Some(cx) = &rep.counterexample {
                r.line(show_cx(&sys, cx));
            }
            r
        }
        Command::CheckControl {
            program: p,
            rank,
            start,
            n0,
        } => {
            let sys = program(p)?;
            let spec = ranking_spec(&sys, rank)?;
            let c0 = sys.parse_config(start)?;
            let rep = check_control(
                &sys,
                &spec,
                &c0,
                n0.clone(),
                &RunCaps {
                    max_blocks: b.trace_steps(),
                    max_bits: b.max_bits,
                },
            )?;
            let mut r = Report::verdict(&both(&rep.per_step, &rep.sequence));
            r.line(format!("n0: {}", rep.n0));
            r.line(format!("steps: {} (halted: {})", rep.steps, rep.halted));
            r.line(format!("per_step: {}", with_reason(&rep.per_step)));
            if let Some(cx) = &rep.per_step_failure {
                r.line(show_cx(&sys, cx));
            }
            r.line(format!("sequence: {}", with_reason(&rep.sequence)));
            if let Some(i) = rep.sequence_failure {
                r.line(format!("sequence fails at index {i}"));
            }
            r
        }
        Command::CheckDisjunctive {
            program: p,
            relations,
            starts: st,
            horizon,
        } => {
            let sys = program(p)?;
            let arg = DisjunctiveArgument::parse(&sys, relations)?;
            let rep = check_disjunctive(&sys, &arg, &starts(&sys, st)?, *horizon)?;
            let mut r = Report::verdict(&rep.verdict);
            r.line(format!("pairs: {}", rep.pairs_checked));
            r.line(format!("horizon_reached: {}", rep.horizon_reached));
            if let Some(cx) = &rep.witness {
                r.line(show_cx(&sys, cx));
            }
            r
        }
        Command::ExecIdentity { x, y, n } => {
            let rep = execution_length_identity(x, y, n, &b.run(), &b.eval()?)?;
            let mut r = Report::verdict(&both(&rep.length_identity, &rep.value_identity));
            r.line(format!("steps: {}", rep.steps));
            r.line(format!("x_final: {}", rep.x_final));
            r.line(format!("n_final: {}", rep.n_final));
            r.line(format!("cichon: {}", rep.cichon));
            match &rep.hardy {
                Some(h) => r.line(format!("hardy: {h}")),
                None => r.line("hardy: too large to print"),
            };
            r.line(format!("steps + x_final = cichon: {}", rep.length_identity));
            r.line(format!(
                "2^x_final * n_final = hardy: {}",
                rep.value_identity
            ));
            r.line(format!("steps = cichon: {}", rep.uncorrected_length));
            r.line(format!("n_final = hardy: {}", rep.uncorrected_value));
            r
        }
        Command::Classify {
            alpha,
            complexity,
            gamma,
            g,
        } => {
            let gamma_value = match (gamma, g) {
                (Some(gm), _) => ordinal(gm)?,
                (None, Some(g)) => control_class_index(&control(g)?),
                (None, None) => Ordinal::one(),
            };
            let (class, exact) = match (alpha, complexity) {
                (Some(a), _) => (classify_bound(&gamma_value, &ordinal(a)?)?, true),
                (None, Some(c)) => {
                    let g = g
                        .as_deref()
                        .map(control)
                        .transpose()?
                        .unwrap_or(ControlFunction::Successor);
                    let (class, exact) = classify_complexity(&g, &ordinal(c)?)?;
                    if gamma.is_some() {
                        let e = ordlen::classify::round_up_exponent(&ordinal(c)?);
                        (classify_bound(&gamma_value, &e)?, exact)
                    } else {
                        (class, exact)
                    }
                }
                (None, None) => {
                    return Err(Error::PreconditionViolated(
                        "give --alpha or --complexity".into(),
                    ))
                }
            };
            let mut r = Report::value(class.label());
            if let Some(m) = class.milestone {
                r.line(format!("milestone: {m}"));
            }
            r.line(format!("gamma: {gamma_value}"));
            if gamma.is_none() {
                r.line("note: gamma comes from the built-in control table");
            }
            if !exact {
                r.line("note: index rounded up to an omega-power; upper bound only");
            }
            r
        }
    })
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        code: EXIT_OK,
                        stdout: text,
                        stderr: String::new(),
                    }
                }
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: format!("{text}\n{GRAMMARS}\n"),
                },
            };
        }
    };
    match execute(&cli) {
        Ok(r) => {
            let mut stdout = format!("RESULT: {}\n", r.result);
            stdout.push_str(&r.body);
            Outcome {
                code: r.code,
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) if e.is_budget() => Outcome {
            code: EXIT_BUDGET,
            stdout: format!("RESULT: inconclusive\nreason: {e}\n"),
            stderr: String::new(),
        },
        Err(e) => {
            let mut stderr = String::new();
            let _ = writeln!(stderr, "error: {e}");
            if matches!(e, Error::Syntax { .. }) {
                let _ = writeln!(stderr, "{GRAMMARS}");
            }
            Outcome {
                code: EXIT_USAGE,
                stdout: String::new(),
                stderr,
            }
        }
    }
}
