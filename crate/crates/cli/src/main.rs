use std::io::{self, Read, Write};
use std::process::ExitCode;

use asyncpi::checker::{run_suite, Budgets, Criterion, GenMode, GeneratorConfig};
use asyncpi::congruence::EqBudget;
use asyncpi::reduction::{
    may_succeed_within, reduces_to_within, BudgetUsed, Limits, Outcome, Step, Trace, Witness,
};
use asyncpi::{
    parse, reduct_candidates, struct_eq_bounded, to_normal_form, EncodingScheme, Encoder, Error,
    Mutation, Name, Process,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const USAGE_ERROR: u8 = 3;

#[derive(Parser)]
#[command(name = "asyncpi", version, about = "Synchronous and asynchronous pi-calculus workbench")]
struct Cli {
    /// Emit one JSON record per line instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Translate a term into the asynchronous fragment.
    Encode {
        #[arg(long, default_value = "boudol")]
        scheme: SchemeArg,
        #[arg(long)]
        mutation: Option<String>,
        /// Term, or `-` to read standard input.
        term: String,
    },
    /// List the one-step reducts of a term.
    Step {
        #[arg(long)]
        scheme: Option<SchemeArg>,
        term: String,
    },
    /// Run a term, or search for a reduction sequence to `--to`.
    Trace {
        #[arg(long, default_value_t = 16)]
        max: usize,
        /// Encode the term (and the goal) first.
        #[arg(long)]
        scheme: Option<SchemeArg>,
        #[arg(long)]
        to: Option<String>,
        #[arg(long, default_value_t = 2)]
        unfolds: usize,
        term: String,
    },
    /// Print the structural normal form.
    Normalize { term: String },
    /// Decide structural congruence, unfolding replications up to `--unfolds` times.
    Eq {
        #[arg(long, default_value_t = 2)]
        unfolds: usize,
        #[arg(long, default_value_t = 10_000)]
        candidates: usize,
        left: String,
        right: String,
    },
    /// Search for a reachable state with a top-level `ok`.
    Succeeds {
        #[arg(long, default_value_t = 64)]
        max: usize,
        #[arg(long)]
        scheme: Option<SchemeArg>,
        term: String,
    },
    /// Check the validity criteria over a generated corpus.
    Check(CheckArgs),
    /// Print a generated corpus.
    Gen(CorpusArgs),
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, default_value_t = 4)]
    max_nodes: usize,
    /// Free names: one letter each (`xy`) or comma-separated (`a,b`).
    #[arg(long, default_value = "xy")]
    names: String,
    #[arg(long)]
    seed: Option<u64>,
    /// Draw this many random terms instead of enumerating.
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    no_replication: bool,
    #[arg(long)]
    no_success: bool,
    /// Only asynchronous terms.
    #[arg(long = "async")]
    async_only: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value = "all")]
    criteria: String,
    #[arg(long, default_value = "both")]
    scheme: SchemeChoice,
    #[arg(long)]
    mutation: Option<String>,
    #[arg(long, default_value_t = 64)]
    step_budget: usize,
    #[arg(long, default_value_t = 2)]
    unfolds: usize,
    #[arg(long, default_value_t = 10_000)]
    candidates: usize,
    #[command(flatten)]
    corpus: CorpusArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    #[value(alias = "b")]
    Boudol,
    #[value(alias = "honda-tokoro")]
    Ht,
}

impl From<SchemeArg> for EncodingScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Boudol => EncodingScheme::Boudol,
            SchemeArg::Ht => EncodingScheme::HondaTokoro,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeChoice {
    Boudol,
    Ht,
    Both,
}

impl SchemeChoice {
    fn schemes(self) -> Vec<EncodingScheme> {
        match self {
            SchemeChoice::Boudol => vec![EncodingScheme::Boudol],
            SchemeChoice::Ht => vec![EncodingScheme::HondaTokoro],
            SchemeChoice::Both => EncodingScheme::ALL.to_vec(),
        }
    }
}

fn exit_for(outcomes: impl IntoIterator<Item = Outcome>) -> u8 {
    let mut code = 0;
    for o in outcomes {
        match o {
            Outcome::Violated => return 1,
            Outcome::Inconclusive => code = 2,
            Outcome::Holds => {}
        }
    }
    code
}

fn read_term(src: &str) -> Result<Process, Error> {
    if src == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Error::Usage(format!("cannot read standard input: {e}")))?;
        parse(&buf)
    } else {
        parse(src)
    }
}

fn parse_names(spec: &str) -> Result<Vec<Name>, Error> {
    let names: Vec<String> = if spec.contains(',') {
        spec.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
    } else {
        spec.chars().map(String::from).collect()
    };
    names.iter().map(|n| asyncpi::text::parse_name(n)).collect()
}

fn encoder(scheme: EncodingScheme, mutation: Option<&str>) -> Result<Encoder, Error> {
    Ok(match mutation {
        Some(m) => Encoder::mutated(scheme, m.parse::<Mutation>()?),
        None => Encoder::from(scheme),
    })
}

fn maybe_encode(p: Process, scheme: Option<SchemeArg>) -> Process {
    match scheme {
        Some(s) => Encoder::from(EncodingScheme::from(s)).encode(&p),
        None => p,
    }
}

struct Out {
    json: bool,
    stdout: io::StdoutLock<'static>,
}

impl Out {
    fn record<T: Serialize>(&mut self, value: &T) {
        let line = serde_json::to_string(value).expect("records serialize");
        let _ = writeln!(self.stdout, "{line}");
    }

    fn text(&mut self, line: impl std::fmt::Display) {
        let _ = writeln!(self.stdout, "{line}");
    }
}

#[derive(Serialize)]
struct TermRecord<'a> {
    term: &'a Process,
}

#[derive(Serialize)]
struct StepRecord<'a> {
    #[serde(flatten)]
    step: &'a Step,
}

#[derive(Serialize)]
struct VerdictRecord<'a> {
    command: &'a str,
    outcome: Outcome,
    witness: Option<&'a Witness>,
    budget_used: BudgetUsed,
}

#[derive(Serialize)]
struct CheckRecord<'a> {
    criterion: Criterion,
    scheme: EncodingScheme,
    mutation: Option<Mutation>,
    term: &'a Process,
    outcome: Outcome,
    witness: Option<&'a Witness>,
    budget_used: BudgetUsed,
}

fn print_trace(out: &mut Out, t: &Trace) {
    out.text(format!("   {}", t.start));
    for s in &t.steps {
        let tag = if s.redex.inert { "inert" } else { "step" };
        out.text(format!("-> {}    [{tag} on {}]", s.result, s.redex.subject));
    }
}

fn outcome_word(o: Outcome, yes: &str, no: &str) -> String {
    match o {
        Outcome::Holds => yes.to_string(),
        Outcome::Violated => no.to_string(),
        Outcome::Inconclusive => "unknown (budget exhausted)".to_string(),
    }
}

fn run(cli: Cli, out: &mut Out) -> Result<u8, Error> {
    match cli.command {
        Command::Encode { scheme, mutation, term } => {
            let enc = encoder(scheme.into(), mutation.as_deref())?;
            let t = enc.encode(&read_term(&term)?);
            if out.json {
                out.record(&TermRecord { term: &t });
            } else {
                out.text(&t);
            }
            Ok(0)
        }
        Command::Step { scheme, term } => {
            let p = maybe_encode(read_term(&term)?, scheme);
            for (redex, result) in reduct_candidates(&p, 1) {
                let step = Step { redex, result };
                if out.json {
                    out.record(&StepRecord { step: &step });
                } else {
                    let tag = if step.redex.inert { " [inert]" } else { "" };
                    out.text(format!("{}{tag}", step.result));
                }
            }
            Ok(0)
        }
        Command::Trace { max, scheme, to, unfolds, term } => {
            let p = maybe_encode(read_term(&term)?, scheme);
            match to {
                Some(goal) => {
                    let goal = maybe_encode(read_term(&goal)?, scheme);
                    let budget = EqBudget {
                        max_unfolds: unfolds,
                        ..EqBudget::default()
                    };
                    let v = reduces_to_within(&p, &goal, Limits::steps(max), budget);
                    if out.json {
                        out.record(&VerdictRecord {
                            command: "trace",
                            outcome: v.outcome,
                            witness: v.witness.as_ref(),
                            budget_used: v.budget_used,
                        });
                    } else {
                        match v.trace() {
                            Some(t) if v.is_holds() => print_trace(out, t),
                            _ => out.text(outcome_word(v.outcome, "reached", "unreachable")),
                        }
                    }
                    Ok(exit_for([v.outcome]))
                }
                None => {
                    let t = run_greedy(&p, max);
                    if out.json {
                        for s in &t.steps {
                            out.record(&StepRecord { step: s });
                        }
                    } else {
                        print_trace(out, &t);
                    }
                    Ok(0)
                }
            }
        }
        Command::Normalize { term } => {
            let nf = to_normal_form(&read_term(&term)?).rebuild();
            if out.json {
                out.record(&TermRecord { term: &nf });
            } else {
                out.text(&nf);
            }
            Ok(0)
        }
        Command::Eq { unfolds, candidates, left, right } => {
            let (l, r) = (read_term(&left)?, read_term(&right)?);
            let v = struct_eq_bounded(
                &l,
                &r,
                EqBudget {
                    max_unfolds: unfolds,
                    max_candidates: candidates,
                },
            );
            if out.json {
                out.record(&VerdictRecord {
                    command: "eq",
                    outcome: v.outcome,
                    witness: v.witness.as_ref(),
                    budget_used: v.budget_used,
                });
            } else {
                out.text(outcome_word(v.outcome, "equivalent", "not equivalent"));
            }
            Ok(exit_for([v.outcome]))
        }
        Command::Succeeds { max, scheme, term } => {
            let p = maybe_encode(read_term(&term)?, scheme);
            let v = may_succeed_within(&p, Limits::steps(max));
            if out.json {
                out.record(&VerdictRecord {
                    command: "succeeds",
                    outcome: v.outcome,
                    witness: v.witness.as_ref(),
                    budget_used: v.budget_used,
                });
            } else {
                match v.trace() {
                    Some(t) if v.is_holds() => {
                        out.text("succeeds");
                        print_trace(out, t);
                    }
                    _ => out.text(outcome_word(v.outcome, "succeeds", "never succeeds")),
                }
            }
            Ok(exit_for([v.outcome]))
        }
        Command::Check(args) => check(args, out),
        Command::Gen(args) => {
            for t in asyncpi::checker::generate_terms(&corpus_config(&args)?)? {
                if out.json {
                    out.record(&TermRecord { term: &t });
                } else {
                    out.text(&t);
                }
            }
            Ok(0)
        }
    }
}

/// Follows inert steps when available, otherwise the first reduct.
fn run_greedy(p: &Process, max: usize) -> Trace {
    let mut trace = Trace::empty(p.clone());
    let mut cur = p.clone();
    for _ in 0..max {
        let mut reducts = reduct_candidates(&cur, 1);
        let pick = reducts.iter().position(|(d, _)| d.inert).unwrap_or(0);
        if reducts.is_empty() {
            break;
        }
        let (redex, result) = reducts.swap_remove(pick);
        cur = result.clone();
        trace.steps.push(Step { redex, result });
    }
    trace
}

fn corpus_config(args: &CorpusArgs) -> Result<GeneratorConfig, Error> {
    let alphabet = parse_names(&args.names)?;
    if alphabet.is_empty() {
        return Err(Error::EmptyAlphabet);
    }
    let mode = match (args.seed, args.count) {
        (seed, Some(count)) => GenMode::Random {
            seed: seed.unwrap_or(0),
            count,
        },
        (Some(_), None) => return Err(Error::Usage("--seed needs --count".into())),
        (None, None) => GenMode::Exhaustive,
    };
    Ok(GeneratorConfig {
        max_nodes: args.max_nodes,
        alphabet,
        allow_replication: !args.no_replication,
        allow_success: !args.no_success,
        async_only: args.async_only,
        mode,
    })
}

fn check(args: CheckArgs, out: &mut Out) -> Result<u8, Error> {
    let criteria = Criterion::parse_list(&args.criteria)?;
    let encoders = args
        .scheme
        .schemes()
        .into_iter()
        .map(|s| encoder(s, args.mutation.as_deref()))
        .collect::<Result<Vec<_>, _>>()?;
    let budgets = Budgets {
        step_budget: args.step_budget,
        eq: EqBudget {
            max_unfolds: args.unfolds,
            max_candidates: args.candidates,
        },
        ..Budgets::default()
    };
    let reports = run_suite(&corpus_config(&args.corpus)?, &encoders, &criteria, &budgets)?;
    for r in &reports {
        if out.json {
            for e in &r.entries {
                out.record(&CheckRecord {
                    criterion: r.criterion,
                    scheme: r.scheme,
                    mutation: r.mutation,
                    term: &e.term,
                    outcome: e.verdict.outcome,
                    witness: e.verdict.witness.as_ref(),
                    budget_used: e.verdict.budget_used,
                });
            }
            continue;
        }
        out.text(format!(
            "{:<7} {:<17} {:>6} terms  {:>6} holds  {:>6} violated  {:>6} inconclusive",
            r.scheme.to_string(),
            r.criterion.to_string(),
            r.total(),
            r.holds,
            r.violated,
            r.inconclusive
        ));
        if let Some(v) = r.first_violation() {
            out.text(format!("  first violation: {}", v.term));
        }
    }
    Ok(exit_for(
        reports
            .iter()
            .flat_map(|r| r.entries.iter().map(|e| e.verdict.outcome)),
    ))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE_ERROR } else { 0 });
        }
    };
    let mut out = Out {
        json: cli.json,
        stdout: io::stdout().lock(),
    };
    match run(cli, &mut out) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(USAGE_ERROR)
        }
    }
}
