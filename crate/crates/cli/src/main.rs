use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod io;
mod run;

#[derive(Parser, Debug)]
#[command(name = "steiner-ramsey", version, about = "Ramsey witnesses and arrow oracles for Steiner systems")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Cap on vertices of constructed systems.
    #[arg(long, global = true)]
    pub max_vertices: Option<usize>,
    /// Cap on coloured copies handed to the exhaustive oracle.
    #[arg(long, global = true)]
    pub max_copies: Option<usize>,
    /// Worker threads for the parallel verifiers.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Write the JSON record here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Predicates on a single system or a copy.
    Check {
        predicate: Predicate,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        r: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
        /// Host system, for `induced` and `strong`.
        #[arg(long)]
        host: Option<PathBuf>,
        /// Comma-separated image of each pattern vertex, for `induced` and `strong`.
        #[arg(long, value_delimiter = ',')]
        map: Vec<usize>,
    },
    /// Whether a class has the Ramsey property for a pattern.
    Status {
        #[arg(long)]
        class: String,
        #[arg(long)]
        pattern: PathBuf,
    },
    /// Copies of a pattern in a host, one per image.
    Copies {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        host: PathBuf,
        #[arg(long, default_value = "induced")]
        kind: String,
        #[arg(long)]
        ordered: bool,
    },
    /// Hales-Jewett numbers.
    Hj {
        #[command(subcommand)]
        action: HjAction,
    },
    /// Build witnesses.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Exhaustive arrow checks.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Colourings without monochromatic targets.
    Negative {
        #[command(subcommand)]
        action: NegativeAction,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Predicate {
    Steiner,
    Homogeneous,
    Complete,
    Induced,
    Strong,
}

#[derive(Subcommand, Debug)]
pub enum HjAction {
    /// Least n up to the bound with every c-colouring of Q^n having a monochromatic line.
    Search {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        c: usize,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Decide a single dimension.
    Verify {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum Construct {
    /// Hales-Jewett power of an F-hypergraph.
    Prelim {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        c: usize,
        /// Fixed dimension; checked by the oracle when small enough.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Partite construction over the power witness.
    Clean {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        c: usize,
    },
    /// Ordered host Z with Z -> (X)^F strongly induced.
    Theorem {
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        c: usize,
        #[arg(long, value_enum, default_value_t = Strategy::Auto)]
        strategy: Strategy,
        /// Also confirm the arrow on the result by exhaustion or sampling.
        #[arg(long)]
        check: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Strategy {
    Auto,
    Classical,
    Exhaustive,
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// Does every c-colouring of the pattern copies in host leave a target copy monochromatic?
    Arrows {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        target: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        c: usize,
        #[arg(long, default_value = "induced")]
        target_kind: String,
        #[arg(long, default_value = "induced")]
        pattern_kind: String,
        #[arg(long)]
        ordered: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum NegativeAction {
    Demo {
        #[arg(long, value_enum)]
        mode: NegativeMode,
        #[arg(long)]
        pattern: PathBuf,
        /// Host to colour; defaults to the blocking target itself.
        #[arg(long)]
        host: Option<PathBuf>,
        /// Random insertions per host size in `ordering` mode.
        #[arg(long, default_value_t = 64)]
        tries: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum NegativeMode {
    Incomplete,
    Nonhomogeneous,
    Ordering,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(io::EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = run::dispatch(&cli);
    ExitCode::from(io::finish(outcome, cli.global.out.as_deref()))
}

