use std::collections::BTreeSet;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use convexalg::distlaw;
use convexalg::finsupp::parse_basis;
use convexalg::monad_cf;
use convexalg::report::Report;
use convexalg::sampling::DEFAULT_SEED;
use convexalg::semiring::{self, check_property, Property, SemiringSpec, Verdict};
use convexalg::theory::{self, Interval, Term};
use convexalg::{BasisElement, Bool, ConvexSet, Error, Nat, QPlus, Semiring, SemiringKind};

const EXIT_UNEQUAL: u8 = 1;
const EXIT_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_SEMANTIC: u8 = 3;
const EXIT_RESOURCE: u8 = 4;

/// Convex sets of semiring-weighted functions: evaluate terms, compare them
/// and run the law suites.
#[derive(Parser, Debug)]
#[command(name = "convexalg", version)]
struct Cli {
    /// Semiring: bool, rat or nat.
    #[arg(long, global = true, default_value = "rat")]
    semiring: SemiringKind,

    /// Comma-separated basis; defaults to the variables of the terms.
    #[arg(long, global = true)]
    basis: Option<String>,

    /// Seed for every random choice.
    #[arg(long, global = true, env = "CONVEXALG_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Basis size for the law suites.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    max_size: Option<u64>,

    /// Sample count for sampled checks.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    samples: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    WeakLaw,
    Thm2,
    Monad,
    Pentagon,
    Axioms,
    Kleisli,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the convex set a term denotes.
    Eval { term: String },
    /// Exit 0 when two terms denote the same set, 1 otherwise.
    Equal { left: String, right: String },
    /// Run a law suite.
    Laws {
        #[arg(long, value_enum)]
        suite: Suite,
    },
    /// Report the algebraic properties of the semiring.
    CheckSemiring,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. } | Error::InvalidLiteral(_) => EXIT_PARSE,
        Error::ResourceLimit { .. } => EXIT_RESOURCE,
        _ => EXIT_SEMANTIC,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.semiring {
        SemiringKind::Bool => run::<Bool>(&cli),
        SemiringKind::Rat => run::<QPlus>(&cli),
        SemiringKind::Nat => run::<Nat>(&cli),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run<S: Semiring>(cli: &Cli) -> convexalg::Result<u8> {
    match &cli.command {
        Command::Eval { term } => cmd_eval::<S>(cli, term),
        Command::Equal { left, right } => cmd_equal::<S>(cli, left, right),
        Command::Laws { suite } => cmd_laws::<S>(cli, *suite),
        Command::CheckSemiring => cmd_check_semiring::<S>(cli),
    }
}

fn basis_for<S: Semiring>(cli: &Cli, terms: &[&Term<S>]) -> Arc<BTreeSet<BasisElement>> {
    Arc::new(match &cli.basis {
        Some(text) => parse_basis(text),
        None => terms
            .iter()
            .flat_map(|t| t.variables())
            .map(|v| BasisElement::name(&v))
            .collect(),
    })
}

/// The interval reading of a one-variable rat term.
fn interval_of<S: Semiring>(term_text: &str, basis: &BTreeSet<BasisElement>) -> convexalg::Result<Option<Interval>> {
    if S::KIND != SemiringKind::Rat || basis.len() != 1 {
        return Ok(None);
    }
    let term: Term<QPlus> = theory::parse(term_text)?;
    Ok(Some(theory::interval_eval(&term)?))
}

fn cmd_eval<S: Semiring>(cli: &Cli, text: &str) -> convexalg::Result<u8> {
    let term: Term<S> = theory::parse(text)?;
    let basis = basis_for(cli, &[&term]);
    let set = theory::eval(&term, &basis)?;
    let interval = interval_of::<S>(text, &basis)?;
    match cli.format {
        Format::Text => {
            println!("{set}");
            if let Some(i) = &interval {
                println!("interval {i}");
            }
        }
        Format::Json => {
            let mut out = json!({ "term": term.to_string(), "set": set_json(&set) });
            if let Some(i) = interval {
                out["interval"] = match i {
                    Interval::Empty => json!("empty"),
                    Interval::Closed(lo, hi) => json!([lo.to_string(), hi.to_string()]),
                };
            }
            print_json(&out);
        }
    }
    Ok(0)
}

fn cmd_equal<S: Semiring>(cli: &Cli, left: &str, right: &str) -> convexalg::Result<u8> {
    let t1: Term<S> = theory::parse(left)?;
    let t2: Term<S> = theory::parse(right)?;
    let basis = basis_for(cli, &[&t1, &t2]);
    let a = theory::eval(&t1, &basis)?;
    let b = theory::eval(&t2, &basis)?;
    let equal = a.equal(&b)?;
    match cli.format {
        Format::Text => {
            println!("{}", if equal { "equal" } else { "not equal" });
            println!("  {t1} = {a}");
            println!("  {t2} = {b}");
        }
        Format::Json => print_json(&json!({
            "equal": equal,
            "left": set_json(&a),
            "right": set_json(&b),
        })),
    }
    Ok(if equal { 0 } else { EXIT_UNEQUAL })
}

fn bool_only<S: Semiring>(suite: &str) -> convexalg::Result<()> {
    if S::KIND == SemiringKind::Bool {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "the {suite} suite runs over bool only"
        )))
    }
}

fn cmd_laws<S: Semiring>(cli: &Cli, suite: Suite) -> convexalg::Result<u8> {
    let n = cli.max_size.unwrap_or(2) as usize;
    let samples = |default: u64| cli.samples.unwrap_or(default) as usize;
    let seed = cli.seed;
    let report = match suite {
        Suite::WeakLaw => {
            bool_only::<S>("weak-law")?;
            distlaw::check_weak_law(n, samples(200), seed)?
        }
        Suite::Thm2 => {
            bool_only::<S>("thm2")?;
            distlaw::check_thm2_equivalence(n, samples(500), seed)?
        }
        Suite::Pentagon => {
            bool_only::<S>("pentagon")?;
            monad_cf::check_pentagon(n, seed)?
        }
        Suite::Monad => monad_cf::check_monad_laws::<S>(n, samples(200), seed)?,
        Suite::Kleisli => monad_cf::check_kleisli_order::<S>(n, samples(200), seed)?,
        Suite::Axioms => {
            let basis = Arc::new(match &cli.basis {
                Some(text) => parse_basis(text),
                None => default_names(n),
            });
            theory::check_axiom_suite::<S>(&basis, samples(100), seed)?
        }
    };
    emit(cli, &report);
    Ok(if report.passed() { 0 } else { EXIT_FAILED })
}

/// `x, y, z, u, v, w`, then `x6, x7, …`.
fn default_names(n: usize) -> BTreeSet<BasisElement> {
    (0..n)
        .map(|i| match "xyzuvw".chars().nth(i) {
            Some(c) => BasisElement::name(&c.to_string()),
            None => BasisElement::name(&format!("x{i}")),
        })
        .collect()
}

fn cmd_check_semiring<S: Semiring>(cli: &Cli) -> convexalg::Result<u8> {
    let spec = SemiringSpec::<S>::of();
    let budget = cli.samples.unwrap_or(200) as usize;
    let mut report = Report::new(format!("semiring {}", S::KIND), cli.seed);
    let violations = semiring::check_axioms(&spec, budget, cli.seed);
    report.check(
        "semiring axioms",
        violations.first().map(|v| {
            let w: Vec<String> = v.witness.iter().map(|x| x.to_string()).collect();
            format!("{}: {}", v.axiom, w.join(", "))
        }),
    );
    let mut notes = Vec::new();
    for prop in Property::ALL {
        let name = format!("{prop}: {}", prop.statement());
        match check_property(&spec, prop, budget, cli.seed) {
            Ok(v @ Verdict::Fails { .. }) => report.fail(name, v.to_string()),
            Ok(v) => report.pass_with(name, v.to_string()),
            Err(Error::Unsupported(why)) => notes.push(format!("{prop} not checked: {why}")),
            Err(e) => return Err(e),
        }
    }
    emit(cli, &report);
    if cli.format == Format::Text {
        for note in notes {
            println!("note: {note}");
        }
    }
    Ok(if violations.is_empty() { 0 } else { EXIT_FAILED })
}

fn set_json<S: Semiring>(set: &ConvexSet<S>) -> Value {
    serde_json::to_value(set).expect("convex sets serialize")
}

fn emit(cli: &Cli, report: &Report) {
    match cli.format {
        Format::Text => print!("{report}"),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(report).expect("reports serialize")
        ),
    }
}

fn print_json(value: &Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("values serialize")
    );
}
