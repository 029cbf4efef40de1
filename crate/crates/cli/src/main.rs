//! `sfkit`: batch front end for sunflower extraction, bound evaluation,
//! inequality sweeps, exhaustive search and randomized experiments.

mod commands;
mod report;

use std::io::{IsTerminal, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sfkit_core::harness::DistributionKind;
use sfkit_core::Error;

use report::{Format, Status};

#[derive(Parser, Debug)]
#[command(name = "sfkit", version, about = "Sunflower toolkit")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value = "json-lines", global = true)]
    format: Format,
    /// Worker threads for parallel operations.
    #[arg(long, env = "SFKIT_JOBS", global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check whether members of a family form a sunflower.
    Verify {
        file: PathBuf,
        /// Comma-separated 0-based member indices (default: all).
        #[arg(long, value_delimiter = ',')]
        indices: Option<Vec<usize>>,
    },
    /// Search a family for a k-sunflower.
    Extract {
        file: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, value_enum, default_value = "er")]
        method: Method,
        /// Largest subset size tried by augmentation.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        j_max: u64,
        /// Candidate budget per augmentation move.
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// Evaluate and compare the bounds at (k, s, ε).
    Bounds {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        k: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        s: u64,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
    },
    /// Run one inequality sweep.
    Lemmas {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Upper end of the sweep grid (suite default when omitted).
        #[arg(long)]
        max: Option<u64>,
        /// ε values for the Φ₂ suites (default 0.01,0.05,0.124).
        #[arg(long, value_delimiter = ',')]
        epsilon: Option<Vec<f64>>,
    },
    /// Exhaustive search for the largest sunflower-free family.
    Oracle {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        s: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
        ground: u32,
        #[arg(long, default_value_t = 100_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        budget_nodes: u64,
        #[arg(long, default_value_t = 600.0)]
        budget_seconds: f64,
        /// Whether the empty set may be a member.
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        allow_empty: bool,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        /// Write the extremal witness family here.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Look for families above the classic bound without a sunflower.
    Hunt {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        s: u32,
        #[arg(long)]
        trials: u64,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, value_enum, default_value = "uniform-at-most")]
        dist: Dist,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        /// Directory for counterexample reproducer files.
        #[arg(long)]
        reproducer_dir: Option<PathBuf>,
        /// Also tabulate extraction rates for sizes LO..=HI.
        #[arg(long, value_parser = parse_range)]
        sizes: Option<(usize, usize)>,
        /// Ground size for the size table (default: smallest that fits HI).
        #[arg(long)]
        ground: Option<u32>,
    },
    /// Audit the lemma chains on a family file or a seeded corpus.
    Audit {
        /// Family file; omit to audit a seeded corpus.
        file: Option<PathBuf>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: Option<u64>,
        #[arg(long, default_value_t = 0.05)]
        epsilon: f64,
        /// Corpus size.
        #[arg(long)]
        instances: Option<u64>,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Draw a seeded random family in the family text format.
    Generate {
        #[arg(long, value_enum, default_value = "uniform-j-subsets")]
        dist: Dist,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=128))]
        ground: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=128))]
        set_size: u32,
        #[arg(long)]
        size: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Write the family here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct SeedArg {
    /// Random seed; required unless standard output is a terminal.
    #[arg(long)]
    seed: Option<u64>,
}

/// Seed used when an interactive user omits `--seed`.
const INTERACTIVE_SEED: u64 = 0;

impl SeedArg {
    fn resolve(self) -> Result<u64, String> {
        match self.seed {
            Some(s) => Ok(s),
            None if std::io::stdout().is_terminal() => Ok(INTERACTIVE_SEED),
            None => Err("--seed is required when output is not a terminal".into()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Er,
    Augment,
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Stirling,
    Binomial,
    Phi2Recurrence,
    Stirling2,
    Product,
    Phi2Upper,
    Constants,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    UniformJSubsets,
    UniformAtMost,
    StarUnion,
    DisjointBlocks,
    SunflowerFreeConstruction,
}

impl From<Dist> for DistributionKind {
    fn from(d: Dist) -> Self {
        match d {
            Dist::UniformJSubsets => DistributionKind::UniformJSubsets,
            Dist::UniformAtMost => DistributionKind::UniformAtMost,
            Dist::StarUnion => DistributionKind::StarUnion,
            Dist::DisjointBlocks => DistributionKind::DisjointBlocks,
            Dist::SunflowerFreeConstruction => DistributionKind::SunflowerFreeConstruction,
        }
    }
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LO..HI, got {s:?}"))?;
    let lo: usize = lo.parse().map_err(|e| format!("bad lower end: {e}"))?;
    let hi: usize = hi
        .trim_start_matches('=')
        .parse()
        .map_err(|e| format!("bad upper end: {e}"))?;
    if lo == 0 || lo > hi {
        return Err("need 1 <= LO <= HI".into());
    }
    Ok((lo, hi))
}

/// A failure before or during a command.
pub enum Failure {
    Usage(String),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<&str> for Failure {
    fn from(e: &str) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(usize::from(n))
            .build_global();
    }
    match commands::run(cli.command) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(report.render(cli.format).as_bytes());
            ExitCode::from(report.status as u8)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(Status::Usage as u8)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            let status = match e {
                Error::BudgetExceeded { .. } => Status::Negative,
                _ => Status::Usage,
            };
            ExitCode::from(status as u8)
        }
    }
}
