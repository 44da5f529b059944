//! `htc`: batch checks and constructions on JSON documents.
//!
//! Exit status 0 means the check held, 1 that it was decided false, 2 an
//! input error and 3 an exhausted search budget.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::Failure;

#[derive(Debug, Parser)]
#[command(name = "htc", version, about = "Covers, transition cocycles, gerbes, bundles and classifying maps")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Direct,
    Skeletal,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Input documents, in the order the verb expects.
    #[arg(long = "input", short = 'i', num_args = 1.., required = true)]
    pub inputs: Vec<PathBuf>,
    /// Report path; standard output when absent.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    /// Node limit for exhaustive searches.
    #[arg(long, default_value_t = htc_core::search::DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, allow_negative_numbers = true)]
    pub max_degree: Option<i64>,
    #[arg(long, value_enum, default_value_t = Mode::Direct)]
    pub mode: Mode,
}

#[derive(Debug, Subcommand)]
enum Verb {
    /// Check that a complex document is well formed.
    ValidateComplex(Common),
    /// Integral homology of a complex.
    Homology(Common),
    /// Nerve of a cover.
    Nerve(Common),
    /// Whether a cover covers its base and has contractible intersections.
    CoverCheck(Common),
    /// Validate a transition cocycle.
    CocycleCheck(Common),
    /// Decide whether two cocycles on one cover are equivalent.
    CocycleEquiv(Common),
    /// Build the total space of a cocycle.
    BundleBuild(Common),
    /// Pull a bundle back along a map.
    Pullback(Common),
    /// Compare cocycle classes with conjugacy classes of representations.
    Classify(Common),
    /// Validate a gerbe cocycle.
    GerbeCheck(Common),
    /// Class of a gerbe cocycle, or equivalence of two.
    GerbeClass(Common),
    /// Homology of a finite group via the bar construction.
    BarHomology(Common),
    /// Validate a point of the coordinate model.
    MilnorCheck(Common),
}

impl Verb {
    fn split(self) -> (&'static str, Common) {
        match self {
            Verb::ValidateComplex(c) => ("validate-complex", c),
            Verb::Homology(c) => ("homology", c),
            Verb::Nerve(c) => ("nerve", c),
            Verb::CoverCheck(c) => ("cover-check", c),
            Verb::CocycleCheck(c) => ("cocycle-check", c),
            Verb::CocycleEquiv(c) => ("cocycle-equiv", c),
            Verb::BundleBuild(c) => ("bundle-build", c),
            Verb::Pullback(c) => ("pullback", c),
            Verb::Classify(c) => ("classify", c),
            Verb::GerbeCheck(c) => ("gerbe-check", c),
            Verb::GerbeClass(c) => ("gerbe-class", c),
            Verb::BarHomology(c) => ("bar-homology", c),
            Verb::MilnorCheck(c) => ("milnor-check", c),
        }
    }
}

fn main() -> ExitCode {
    let (name, common) = Cli::parse().verb.split();
    let outcome = match commands::run(name, &common) {
        Ok(o) => o,
        Err(Failure::Input(e)) => {
            eprintln!("htc {name}: input error: {e:#}");
            return ExitCode::from(2);
        }
        Err(Failure::Budget(e)) => {
            eprintln!("htc {name}: {e}");
            return ExitCode::from(3);
        }
    };
    let text = report::render(name, outcome.verdict, outcome.details);
    let written = match &common.output {
        Some(path) => report::write_atomic(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("htc {name}: cannot write report: {e:#}");
        return ExitCode::from(2);
    }
    eprintln!("htc {name}: {}", outcome.summary);
    ExitCode::from(if outcome.verdict { 0 } else { 1 })
}
