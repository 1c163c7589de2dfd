//! `lfs`: runs the constructions at finite horizons and prints their tables.
//! Exit status 0 on success, 1 if a construction fails its own checks, 2 on
//! usage or input errors.

mod commands;
mod corpus;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use lfs_core::blum::BudgetSchedule;
use lfs_core::dump::parse_requirements;
use lfs_core::machine::Enumeration;

#[derive(Parser)]
#[command(
    name = "lfs",
    version,
    about = "Low-for-speed constructions at finite horizons"
)]
struct Cli {
    /// Assembler file of planted machines (default: the built-in corpus).
    #[arg(long, global = true)]
    corpus: Option<PathBuf>,
    /// Write the JSON Lines trace here.
    #[arg(long, global = true)]
    trace: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite-extension construction of a sparse oracle.
    Fe {
        /// Number of stages (default: every pair below the corpus sweep count).
        #[arg(long)]
        stages: Option<u64>,
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
    },
    /// Dump construction of a c.e. set.
    Ce {
        #[arg(long, default_value_t = 60)]
        stages: u64,
        /// Comma-separated requirements such as `P3,L9/1`.
        #[arg(long, default_value = "P3,L9/1,P8")]
        requirements: String,
    },
    /// The one-string-per-length diagonal set R.
    Blum {
        #[arg(long, default_value = "2exp")]
        schedule: BudgetSchedule,
        /// Largest length (default: one below the corpus sweep count).
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Computing R from advice, against the full construction.
    Speedup {
        #[arg(long, default_value = "square")]
        schedule: BudgetSchedule,
        #[arg(long, default_value_t = 8)]
        max_len: usize,
        /// A single advice size (default: every k up to the maximum length).
        #[arg(long)]
        k: Option<u64>,
        /// Length up to which the advice lists are read off (default: the maximum length).
        #[arg(long)]
        horizon: Option<usize>,
    },
    /// Exact error measures of the block functional.
    Schnorr {
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(0..=20))]
        n: u64,
        #[arg(long, default_value = "2exp")]
        schedule: BudgetSchedule,
    },
    /// The tripling-based Ψ on every input below a bound.
    Dnc {
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        /// Inputs `0..bound` (default: every string up to the maximum length).
        #[arg(long)]
        bound: Option<u64>,
    },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("lfs: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let corpus = match corpus::load(cli.corpus.as_deref()) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let sweep = corpus.sweep;
    let en = Enumeration::new(corpus.programs);
    let report = match cli.command {
        Command::Fe { stages, budget } => {
            commands::fe(&en, stages.unwrap_or(sweep * (sweep + 1) / 2), budget)
        }
        Command::Ce {
            stages,
            requirements,
        } => match parse_requirements(&requirements) {
            Ok(reqs) => commands::ce(&en, &reqs, stages),
            Err(e) => return usage(format!("--requirements: {e}")),
        },
        Command::Blum { schedule, max_len } => commands::blum(
            &en,
            schedule,
            max_len.unwrap_or(sweep.saturating_sub(1) as usize),
        ),
        Command::Speedup {
            schedule,
            max_len,
            k,
            horizon,
        } => {
            let ks: Vec<u64> = match k {
                Some(k) => vec![k],
                None => (0..=max_len as u64).collect(),
            };
            commands::speedup(&en, schedule, max_len, &ks, horizon.unwrap_or(max_len))
        }
        Command::Schnorr { n, schedule } => commands::schnorr(&en, schedule, n as usize),
        Command::Dnc { max_len, bound } => {
            if max_len >= 40 {
                return usage("--max-len must be below 40");
            }
            commands::dnc(&en, max_len, bound.unwrap_or((1u64 << (max_len + 1)) - 1))
        }
    };
    print!("{}", report.out);
    if let Some(path) = &cli.trace {
        if let Err(e) = std::fs::write(path, report.trace.to_jsonl()) {
            return usage(format!("{}: {e}", path.display()));
        }
    }
    if report.violations.is_empty() {
        ExitCode::SUCCESS
    } else {
        for v in &report.violations {
            eprintln!("invariant violated: {v}");
        }
        ExitCode::from(1)
    }
}
