//! Named benchmark suites and their CSV output.
//!
//! CSV columns, in order: `suite, algorithm, variant, mode, n, d, sigma,
//! seed, objective, center_index, wall_ms, counters`. `variant` is `default`
//! except for the matrix solver forced onto the heavy/light split (`split`).
//! `counters` is a `;`-separated list of `name=value`.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use hammctr::gen::random_instance;
use hammctr::matmul::{MatmulOptions, Tau};
use hammctr::{Error, Mode, Result, SolveResult, SplitMix64};

use crate::config::{Algo, RunConfig};
use crate::record::Record;
use crate::solve::run_solver;

pub const SUITES: [&str; 3] = ["smoke", "smalld", "larged"];
pub const CSV_HEADER: &str =
    "suite,algorithm,variant,mode,n,d,sigma,seed,objective,center_index,wall_ms,counters";

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// One of smoke, smalld, larged.
    #[arg(long)]
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// CSV destination; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Cross-check objectives and matrix work bounds.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub algo: Algo,
    pub variant: &'static str,
    pub matmul: MatmulOptions,
}

const fn run(algo: Algo) -> Run {
    Run {
        algo,
        variant: "default",
        matmul: MatmulOptions {
            tau: Tau::Auto,
            binary_popcount: true,
        },
    }
}

const SPLIT: Run = Run {
    algo: Algo::Matmul,
    variant: "split",
    matmul: MatmulOptions {
        tau: Tau::Auto,
        binary_popcount: false,
    },
};

#[derive(Debug, Clone)]
pub struct Case {
    pub n: usize,
    pub d: usize,
    pub sigma: u32,
    pub mode: Mode,
    pub runs: Vec<Run>,
}

pub fn suite_cases(name: &str) -> Result<Vec<Case>> {
    let case = |n, d, sigma, mode, runs: &[Run]| Case {
        n,
        d,
        sigma,
        mode,
        runs: runs.to_vec(),
    };
    let all = [run(Algo::Naive), run(Algo::Inclexcl), run(Algo::Matmul)];
    Ok(match name {
        "smoke" => {
            let mut v = Vec::new();
            for d in [6, 10] {
                for mode in [Mode::DiscreteClosest, Mode::DiscreteRemotest] {
                    v.push(case(48, d, 3, mode, &all));
                }
            }
            v.push(case(
                48,
                64,
                2,
                Mode::DiscreteClosest,
                &[run(Algo::Naive), run(Algo::Matmul), SPLIT],
            ));
            v
        }
        "smalld" => (8..=16)
            .map(|d| {
                case(
                    4096,
                    d,
                    4,
                    Mode::DiscreteClosest,
                    &[run(Algo::Naive), run(Algo::Inclexcl)],
                )
            })
            .collect(),
        "larged" => [
            (256, 512, 2),
            (256, 512, 16),
            (1024, 1024, 4),
            (2048, 2048, 2),
        ]
        .into_iter()
        .map(|(n, d, sigma)| {
            let runs: &[Run] = if sigma == 2 {
                &[run(Algo::Naive), run(Algo::Matmul), SPLIT]
            } else {
                &[run(Algo::Naive), run(Algo::Matmul)]
            };
            case(n, d, sigma, Mode::DiscreteClosest, runs)
        })
        .collect(),
        other => {
            return Err(Error::InvalidParam(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    })
}

#[derive(Debug, Clone)]
pub struct BenchRow {
    pub case: usize,
    pub run: Run,
    pub n: usize,
    pub d: usize,
    pub sigma: u32,
    pub seed: u64,
    pub result: SolveResult,
    pub wall_ms: f64,
}

impl BenchRow {
    pub fn csv(&self, suite: &str) -> String {
        let counters: Vec<String> = self
            .result
            .counters
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        format!(
            "{suite},{},{},{},{},{},{},{},{},{},{:.3},{}",
            self.result.algorithm,
            self.run.variant,
            self.result.mode,
            self.n,
            self.d,
            self.sigma,
            self.seed,
            self.result.objective,
            self.result
                .center_index
                .map_or(String::from("-"), |i| i.to_string()),
            self.wall_ms,
            counters.join(";")
        )
    }

    /// Bound violations of a split-path matrix run.
    pub fn work_bound_violation(&self) -> Option<String> {
        let c = &self.result.counters;
        if self.run.algo != Algo::Matmul || c.get("popcount") != Some(&0) {
            return None;
        }
        let nd = (self.n * self.d) as u64;
        let tau = c["tau"];
        if c["light_pair_increments"] > tau * nd {
            return Some(format!(
                "light increments {} > tau*n*d = {}",
                c["light_pair_increments"],
                tau * nd
            ));
        }
        if c["heavy_columns"] * tau > nd {
            return Some(format!(
                "heavy columns {} > n*d/tau with tau={tau}",
                c["heavy_columns"]
            ));
        }
        None
    }
}

/// Per-case instance seeds drawn from one stream, so the row set depends only
/// on the suite and the base seed.
pub fn run_suite(name: &str, seed: u64, cfg: &RunConfig) -> Result<Vec<BenchRow>> {
    let cases = suite_cases(name)?;
    let mut rng = SplitMix64::new(seed);
    let mut rows = Vec::new();
    for (ci, case) in cases.iter().enumerate() {
        let case_seed = rng.next_u64();
        let set = random_instance(case.n, case.d, case.sigma, case_seed)?;
        for r in &case.runs {
            let mut local = cfg.clone();
            local.matmul = r.matmul;
            let start = Instant::now();
            let result = run_solver(r.algo, case.mode, &set, &local)?;
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            rows.push(BenchRow {
                case: ci,
                run: *r,
                n: case.n,
                d: case.d,
                sigma: case.sigma,
                seed: case_seed,
                result,
                wall_ms,
            });
        }
    }
    Ok(rows)
}

/// Mismatches between rows of the same case, plus work-bound violations.
pub fn verify_rows(rows: &[BenchRow]) -> Vec<String> {
    let mut problems = Vec::new();
    for row in rows {
        let first = rows.iter().find(|r| r.case == row.case).unwrap();
        let got = (row.result.objective, row.result.center_index);
        let want = (first.result.objective, first.result.center_index);
        if got != want {
            problems.push(format!(
                "case {}: {} ({}) gave {got:?}, {} gave {want:?}",
                row.case, row.result.algorithm, row.run.variant, first.result.algorithm
            ));
        }
        if let Some(v) = row.work_bound_violation() {
            problems.push(format!("case {}: {v}", row.case));
        }
    }
    problems
}

pub fn cmd_bench(args: &BenchArgs, cfg: &RunConfig) -> Result<(Vec<Record>, Option<String>, bool)> {
    let rows = run_suite(&args.suite, args.seed, cfg)?;
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        writeln!(csv, "{}", r.csv(&args.suite)).unwrap();
    }
    let mut rec = Record::new();
    rec.push("suite", args.suite.as_str())
        .push("seed", args.seed)
        .push("rows", rows.len() as u64);
    let mut ok = true;
    if args.verify {
        let problems = verify_rows(&rows);
        ok = problems.is_empty();
        rec.push("verify", if ok { "PASS" } else { "FAIL" });
        if !ok {
            rec.push("problems", problems.join("; ").replace(' ', "_"));
        }
    }
    let stdout_csv = match &args.output {
        Some(path) => {
            std::fs::write(path, &csv)?;
            rec.push("output", path.display().to_string());
            None
        }
        None => Some(csv),
    };
    Ok((vec![rec], stdout_csv, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_are_defined() {
        for s in SUITES {
            assert!(!suite_cases(s).unwrap().is_empty());
        }
        let smalld = suite_cases("smalld").unwrap();
        assert_eq!(
            smalld.iter().map(|c| c.d).collect::<Vec<_>>(),
            (8..=16).collect::<Vec<_>>()
        );
        assert!(suite_cases("huge").is_err());
    }

    #[test]
    fn smoke_rows_agree() {
        let cfg = RunConfig::new("bench", None, false);
        let rows = run_suite("smoke", 3, &cfg).unwrap();
        assert!(verify_rows(&rows).is_empty());
        let again = run_suite("smoke", 3, &cfg).unwrap();
        let strip = |rs: &[BenchRow]| {
            rs.iter()
                .map(|r| (r.seed, r.result.clone()))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&rows), strip(&again));
    }
}
