//! `agclone`: runs the verification scenarios and exposes the clone engine.
//!
//! Exit codes: 0 confirmed, 2 falsified, 3 inconclusive, 1 for usage and
//! input errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use agclone_core::clone::{
    classify_symmetric_2clone, free_binary_part, glue, patchwork, random_free_targets,
    symmetric_closure, two_closure, Budget, CaseOneRealizer, ExtensionKind, PostClass,
};
use agclone_core::clone::extension::dependent_part_matches;
use agclone_core::rules::{classify_coalition, CayleyRule, DecisiveCoalition, SpecialRule};
use agclone_core::scenarios::{run_scenario, Params, Status, REGISTRY};
use agclone_core::{BooleanFunction, Error, TwoFunction};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

const BUDGET_ENV: &str = "AGCLONE_BUDGET";

#[derive(Parser)]
#[command(name = "agclone", version, about = "Checks claims about local aggregation rules and 2-clones")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario, by id (S1..S10) or name.
    Verify {
        id: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Exact decimal, e.g. 0.6.
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = BUDGET_ENV)]
        budget: Option<u64>,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        #[arg(long)]
        text: bool,
    },
    /// List scenarios and the claims they check.
    List,
    /// Post class of a decisive coalition given as JSON or a JSON file.
    Classify {
        #[arg(long)]
        coalition: String,
    },
    /// Closure, classification or realization for a generator file.
    Clone {
        #[arg(long)]
        generators: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
        /// Arity of the closure slice.
        #[arg(long, default_value_t = 2)]
        arity: usize,
        /// Close the generators under relabeling first.
        #[arg(long)]
        symmetric: bool,
        /// Realize this target (a generator spec, JSON or file).
        #[arg(long, conflicts_with = "random")]
        target: Option<String>,
        /// Realize this many seeded random targets of the clone's class.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Closure element cap.
        #[arg(long, env = BUDGET_ENV)]
        budget: Option<u64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Closure,
    Classify,
    Realize,
}

/// One generator, either as a raw table or by construction.
#[derive(Deserialize)]
#[serde(untagged)]
enum GeneratorSpec {
    Table(TwoFunction),
    Lift { lift: BooleanFunction },
    Patchwork { patchwork: PostClass },
    Rule { rule: SpecialRule },
    Cayley { cayley: CayleyRule },
    Glue { slices: Vec<BooleanFunction> },
}

impl GeneratorSpec {
    fn build(self, m: usize) -> agclone_core::Result<TwoFunction> {
        let g = match self {
            Self::Table(g) => g,
            Self::Lift { lift } => TwoFunction::lift(m, &lift)?,
            Self::Patchwork { patchwork: class } => patchwork(m, class)?,
            Self::Rule { rule } => rule.two_function(m)?,
            Self::Cayley { cayley } => cayley.two_function(),
            Self::Glue { slices } => glue(m, &slices)?,
        };
        if g.m() != m {
            return Err(Error::SizeMismatch(format!("generator over {} alternatives, file says {m}", g.m())));
        }
        Ok(g)
    }
}

#[derive(Deserialize)]
struct GeneratorFile {
    m: usize,
    generators: Vec<GeneratorSpec>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            match e.downcast_ref::<Error>() {
                Some(Error::BudgetExceeded(_)) => ExitCode::from(Status::Inconclusive.exit_code() as u8),
                Some(Error::Falsified(_)) => ExitCode::from(Status::Falsified.exit_code() as u8),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> Result<u8, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Verify { id, m, n, alpha, seed, budget, json: _, text } => {
            let report = run_scenario(&id, &Params { m, n, alpha, seed, budget })?;
            if text {
                print!("{}", report.to_text());
            } else {
                println!("{}", report.to_json());
            }
            eprintln!("runtime: {:.3} s", report.runtime.as_secs_f64());
            Ok(report.status.exit_code() as u8)
        }
        Command::List => {
            for s in &REGISTRY {
                println!("{:<4} {:<20} {}", s.id, s.name, s.claim);
            }
            Ok(0)
        }
        Command::Classify { coalition } => {
            let k: DecisiveCoalition = serde_json::from_str(&read_arg(&coalition)?)?;
            let (status, class) = match classify_coalition(&k) {
                Ok(class) => (Status::Confirmed, Some(class)),
                Err(Error::Falsified(_)) => (Status::Falsified, None),
                Err(e) => return Err(e.into()),
            };
            let out = json!({
                "coalition": k,
                "status": status,
                "class": class,
                "equivalent_rule": class.and_then(SpecialRule::from_class),
                "monotone": k.is_monotone(),
                "dictator": k.dictator(),
                "parity_support": k.parity_support(),
            });
            println!("{}", serde_json::to_string_pretty(&out)?);
            Ok(status.exit_code() as u8)
        }
        Command::Clone { generators, op, arity, symmetric, target, random, seed, budget } => {
            let budget = budget.map_or_else(Budget::default, |b| Budget::elements(b as usize));
            let (m, gens) = load_generators(&generators)?;
            let out = match op {
                Op::Closure => {
                    let gens = if symmetric { symmetric_closure(&gens)? } else { gens };
                    let slice = two_closure(m, &gens, arity, budget)?;
                    (Status::Confirmed, json!({"m": m, "arity": arity, "generators": gens.len(), "size": slice.len()}))
                }
                Op::Classify => classify(m, &gens, budget)?,
                Op::Realize => realize(m, &gens, target, random, seed, budget)?,
            };
            println!("{}", serde_json::to_string_pretty(&out.1)?);
            Ok(out.0.exit_code() as u8)
        }
    }
}

/// The argument itself, or the contents of the file it names.
fn read_arg(arg: &str) -> std::io::Result<String> {
    let path = Path::new(arg);
    if !arg.trim_start().starts_with(['{', '[']) && path.is_file() {
        std::fs::read_to_string(path)
    } else {
        Ok(arg.to_string())
    }
}

fn load_generators(path: &Path) -> Result<(usize, Vec<TwoFunction>), Box<dyn std::error::Error>> {
    let file: GeneratorFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let m = file.m;
    let gens = file.generators.into_iter().map(|g| g.build(m)).collect::<agclone_core::Result<Vec<_>>>()?;
    Ok((m, gens))
}

type Outcome = (Status, serde_json::Value);

fn classify(m: usize, gens: &[TwoFunction], budget: Budget) -> Result<Outcome, Box<dyn std::error::Error>> {
    let c = classify_symmetric_2clone(gens)?;
    let (matches, detail) = match c.kind {
        ExtensionKind::Free => {
            let part = free_binary_part(gens, budget)?;
            (part.matches_free_extension(), json!(part))
        }
        ExtensionKind::Dependent => {
            let (got, want, eq) = dependent_part_matches(gens, c.base, 3, budget)?;
            (eq, json!({"ternary_size": got, "expected_size": want}))
        }
    };
    let status = if matches { Status::Confirmed } else { Status::Falsified };
    Ok((status, json!({"m": m, "status": status, "classification": c, "check": detail})))
}

fn realize(
    m: usize,
    gens: &[TwoFunction],
    target: Option<String>,
    random: Option<usize>,
    seed: u64,
    budget: Budget,
) -> Result<Outcome, Box<dyn std::error::Error>> {
    let mut r = CaseOneRealizer::new(gens, budget)?;
    let targets = match (target, random) {
        (Some(t), _) => {
            let spec: GeneratorSpec = serde_json::from_str(&read_arg(&t)?)?;
            vec![spec.build(m)?]
        }
        (None, count) => random_free_targets(m, r.class(), 3, count.unwrap_or(1), seed)?,
    };
    let mut results = Vec::new();
    let mut exact = true;
    for t in &targets {
        let out = r.realize(t)?;
        exact &= out.function == *t;
        results.push(json!({
            "patched_blocks": out.patched_blocks,
            "dag_size": out.dag_size,
            "exact": out.function == *t,
        }));
    }
    r.derivation().replay()?;
    let status = if exact { Status::Confirmed } else { Status::Falsified };
    Ok((status, json!({"m": m, "class": r.class(), "status": status, "targets": results})))
}
