//! Command-line front end for `hammctr`.
//!
//! Every command prints one `key=value` record per result (or one JSON object
//! with `--json`). Exit codes: 0 success, 1 a failed check (`certify`,
//! `bench --verify`), 2 input, parse or usage errors, 3 budget errors.

pub mod bench;
pub mod certify;
pub mod config;
pub mod gen;
pub mod record;
pub mod reduce;
pub mod solve;

use std::io::Write;

use clap::{Parser, Subcommand};
use hammctr::Error;

pub use config::{select, Algo, RunConfig};
pub use record::Record;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hammctr",
    version,
    about = "Exact Closest/Remotest String solvers"
)]
pub struct Cli {
    /// Worker threads; 1 runs every loop sequentially.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Emit one JSON object per result instead of key=value lines.
    #[arg(long, global = true)]
    pub json: bool,
    /// Memory budget in MiB (overrides HAMMCTR_BUDGET_MB).
    #[arg(long, global = true)]
    pub memory_mb: Option<u64>,
    /// Cap on exhaustive enumerations (candidates, assignments).
    #[arg(long, global = true)]
    pub enumeration_cap: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one instance.
    Solve(solve::SolveArgs),
    /// Generate a seeded instance or formula.
    Gen(gen::GenArgs),
    /// Transform an instance and write the sidecar map.
    Reduce(reduce::ReduceArgs),
    /// Check the SAT gadget against exhaustive search.
    Certify(certify::CertifyArgs),
    /// Run a named benchmark suite.
    Bench(bench::BenchArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Solve(_) => "solve",
            Command::Gen(_) => "gen",
            Command::Reduce(_) => "reduce",
            Command::Certify(_) => "certify",
            Command::Bench(_) => "bench",
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_budget() {
        EXIT_BUDGET
    } else {
        EXIT_INPUT
    }
}

fn configure_threads(threads: Option<usize>) {
    #[cfg(feature = "parallel")]
    if let Some(t) = threads.filter(|&t| t > 1) {
        // A pool may already exist when several commands run in one process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    configure_threads(cli.threads);
    let mut cfg = RunConfig::new(cli.command.name(), cli.threads, cli.json);
    if let Some(mb) = cli.memory_mb {
        cfg.budget = cfg.budget.with_memory_mb(mb);
    }
    if let Some(cap) = cli.enumeration_cap {
        cfg.budget = cfg.budget.with_enumeration_cap(cap);
    }
    let outcome = match &cli.command {
        Command::Solve(a) => {
            cfg = cfg.with_tau(a.tau);
            solve::cmd_solve(a, &cfg).map(|r| (r, None, true))
        }
        Command::Gen(a) => {
            cfg.seed = a.seed;
            gen::cmd_gen(a).map(|(r, bytes)| (r, bytes, true))
        }
        Command::Reduce(a) => reduce::cmd_reduce(a, &cfg).map(|r| (r, None, true)),
        Command::Certify(a) => {
            cfg.seed = a.seed;
            certify::cmd_certify(a, &cfg).map(|(r, ok)| (r, None, ok))
        }
        Command::Bench(a) => {
            cfg.seed = a.seed;
            bench::cmd_bench(a, &cfg).map(|(r, csv, ok)| (r, csv.map(String::into_bytes), ok))
        }
    };
    match outcome {
        Ok((records, raw, ok)) => {
            let written = (|| -> std::io::Result<()> {
                if let Some(bytes) = raw {
                    out.write_all(&bytes)?;
                }
                for r in &records {
                    r.write(out, cfg.json)?;
                }
                out.flush()
            })();
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_INPUT;
            }
            if ok {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
