//! Resolved run configuration and the solver selector.

use std::fmt;

use clap::ValueEnum;
use hammctr::matmul::{MatmulOptions, Tau};
use hammctr::{Budget, Exec, Mode, StringSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Naive,
    Inclexcl,
    Matmul,
    BruteContinuous,
    Auto,
}

impl Algo {
    pub fn as_str(self) -> &'static str {
        match self {
            Algo::Naive => "naive",
            Algo::Inclexcl => "inclexcl",
            Algo::Matmul => "matmul",
            Algo::BruteContinuous => "brute-continuous",
            Algo::Auto => "auto",
        }
    }

    pub fn supports(self, mode: Mode) -> bool {
        match self {
            Algo::BruteContinuous => !mode.is_discrete(),
            Algo::Auto => true,
            _ => mode.is_discrete(),
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Smallest `n` for which the selector considers the matrix solver.
pub const MATMUL_MIN_N: usize = 64;

/// Picks a concrete solver for `mode` on `set`.
///
/// Continuous modes always use exhaustive search. For discrete modes:
/// inclusion-exclusion when `n 2^d <= n^2 d` and `d <= d_max`; the matrix
/// solver when an `n x n` table fits in memory, `d >= n^0.1` and
/// `n >= MATMUL_MIN_N`; otherwise the pairwise sweep.
pub fn select(mode: Mode, set: &StringSet, budget: &Budget) -> Algo {
    if !mode.is_discrete() {
        return Algo::BruteContinuous;
    }
    let (n, d) = (set.n() as f64, set.d());
    if d <= budget.d_max as usize && (d as f64).exp2() <= n * d as f64 {
        return Algo::Inclexcl;
    }
    let matrix_bytes = (set.n() as u128).pow(2) * 4;
    if set.n() >= MATMUL_MIN_N
        && matrix_bytes <= u128::from(budget.memory_bytes)
        && d as f64 >= n.powf(0.1)
    {
        return Algo::Matmul;
    }
    Algo::Naive
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub exec: Exec,
    pub budget: Budget,
    pub json: bool,
    pub seed: u64,
    pub matmul: MatmulOptions,
}

impl RunConfig {
    pub fn new(command: &'static str, threads: Option<usize>, json: bool) -> Self {
        RunConfig {
            command,
            exec: if threads == Some(1) {
                Exec::Sequential
            } else {
                Exec::Parallel
            },
            budget: Budget::from_env(),
            json,
            seed: 0,
            matmul: MatmulOptions::default(),
        }
    }

    pub fn with_tau(mut self, tau: Option<Tau>) -> Self {
        if let Some(t) = tau {
            self.matmul = MatmulOptions::split(t);
        }
        self
    }
}
