use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::Args;
use hammctr::inclexcl::{build_sum_table, inclexcl_closest, inclexcl_remotest};
use hammctr::matmul::{distance_matrix, matmul_closest, matmul_remotest, Tau};
use hammctr::naive::{
    brute_continuous_closest, brute_continuous_remotest, naive_closest, naive_distance_matrix,
    naive_remotest,
};
use hammctr::{read_instance, Error, Mode, Result, SolveResult, StringSet};

use crate::config::{select, Algo, RunConfig};
use crate::record::{millis, Record};

#[derive(Debug, Clone, Args)]
pub struct SolveArgs {
    /// Instance file.
    #[arg(long, short)]
    pub input: PathBuf,
    /// discrete-closest, discrete-remotest, continuous-closest or
    /// continuous-remotest.
    #[arg(long, default_value = "discrete-closest")]
    pub mode: Mode,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    pub algo: Algo,
    /// Heavy/light threshold for the matrix solver ("auto" or a positive
    /// integer). Setting it disables the binary popcount path.
    #[arg(long)]
    pub tau: Option<Tau>,
    /// Write the distance matrix as little-endian u32, row-major.
    #[arg(long)]
    pub dump_distances: Option<PathBuf>,
    /// Write the inclusion-exclusion sum table as CSV.
    #[arg(long)]
    pub dump_sums: Option<PathBuf>,
}

pub fn read_set(path: &Path) -> Result<StringSet> {
    read_instance(&std::fs::read(path)?)
}

/// Runs `algo` (already resolved, never `Auto`) on `set`.
pub fn run_solver(algo: Algo, mode: Mode, set: &StringSet, cfg: &RunConfig) -> Result<SolveResult> {
    let (b, exec) = (&cfg.budget, cfg.exec);
    match (algo, mode) {
        (Algo::Naive, Mode::DiscreteClosest) => Ok(naive_closest(set, exec)),
        (Algo::Naive, Mode::DiscreteRemotest) => naive_remotest(set, exec),
        (Algo::Inclexcl, Mode::DiscreteClosest) => inclexcl_closest(set, b, exec),
        (Algo::Inclexcl, Mode::DiscreteRemotest) => inclexcl_remotest(set, b, exec),
        (Algo::Matmul, Mode::DiscreteClosest) => matmul_closest(set, cfg.matmul, b, exec),
        (Algo::Matmul, Mode::DiscreteRemotest) => matmul_remotest(set, cfg.matmul, b, exec),
        (Algo::BruteContinuous, Mode::ContinuousClosest) => brute_continuous_closest(set, b, exec),
        (Algo::BruteContinuous, Mode::ContinuousRemotest) => {
            brute_continuous_remotest(set, b, exec)
        }
        (algo, mode) => Err(Error::Unsupported(format!(
            "algorithm {algo} does not solve {mode}"
        ))),
    }
}

pub fn resolve(algo: Algo, mode: Mode, set: &StringSet, cfg: &RunConfig) -> Result<Algo> {
    if !algo.supports(mode) {
        return Err(Error::Unsupported(format!(
            "algorithm {algo} does not solve {mode}"
        )));
    }
    Ok(match algo {
        Algo::Auto => select(mode, set, &cfg.budget),
        other => other,
    })
}

pub fn result_record(r: &SolveResult, elapsed: Option<std::time::Duration>) -> Record {
    let mut rec = Record::new();
    rec.push("mode", r.mode.as_str())
        .push("algorithm", r.algorithm)
        .push("objective", r.objective)
        .push("index", r.center_index.map(|i| i as u64))
        .push("center", r.center_string());
    if let Some(e) = elapsed {
        rec.push("wall_ms", millis(e));
    }
    for (k, v) in &r.counters {
        rec.push(*k, *v);
    }
    rec
}

pub fn cmd_solve(args: &SolveArgs, cfg: &RunConfig) -> Result<Vec<Record>> {
    let set = read_set(&args.input)?;
    let algo = resolve(args.algo, args.mode, &set, cfg)?;
    let start = Instant::now();
    let result = run_solver(algo, args.mode, &set, cfg)?;
    let elapsed = start.elapsed();
    if let Some(path) = &args.dump_distances {
        let dm = if algo == Algo::Matmul {
            distance_matrix(&set, cfg.matmul, &cfg.budget, cfg.exec)?.0
        } else {
            naive_distance_matrix(&set, cfg.exec)
        };
        std::fs::write(path, dm.to_le_bytes())?;
    }
    if let Some(path) = &args.dump_sums {
        std::fs::write(path, build_sum_table(&set, &cfg.budget, cfg.exec)?.to_csv())?;
    }
    Ok(vec![result_record(&result, Some(elapsed))])
}
