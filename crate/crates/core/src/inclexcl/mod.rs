//! Inclusion-exclusion solvers for discrete Closest and Remotest String in
//! `O(n 2^d)` time.
//!
//! For a row `x` and radius `k < d`, the number of rows within distance `k`
//! of `x` is
//!
//! ```text
//! sum_{l = d-k}^{d} (-1)^{l-d+k} C(l-1, d-k-1) S[x, l]
//! ```
//!
//! so `r(x, X) <= k` iff that count is `n`, and `x` is farther than `k` from
//! every other row iff the count is `1`.

mod binomial;
mod partition;
mod tables;

pub use binomial::{hd_leq_indicator, one_sum_identity, zero_sum_identity, BinomialTable};
pub use partition::{Partition, PositionRefiner, RefineScratch};
pub use tables::{build_count_tables, build_sum_table, subsets_by_size, CountTables, SumTable};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::instance::StringSet;
use crate::par::Exec;
use crate::result::{Mode, SolveResult};

pub const INCLEXCL: &str = "inclexcl";

/// Evaluates the signed sums for one sum table.
#[derive(Debug, Clone)]
pub struct Counter<'a> {
    sums: &'a SumTable,
    binom: BinomialTable,
}

impl<'a> Counter<'a> {
    /// Fails when the largest intermediate term,
    /// `n C(d-1, ceil((d-1)/2)) C(d, ceil(d/2))`, could overflow `i128`.
    pub fn new(sums: &'a SumTable) -> Result<Self> {
        let (n, d) = (sums.n(), sums.d());
        if d >= BinomialTable::LIMIT {
            return Err(Error::InvalidParam(format!("dimension {d} too large")));
        }
        let binom = BinomialTable::new(d);
        let bound = (n as u128)
            .checked_mul(binom.get(d.saturating_sub(1), d.saturating_sub(1).div_ceil(2)))
            .and_then(|v| v.checked_mul(binom.get(d, d.div_ceil(2))))
            .and_then(|v| v.checked_mul(d as u128 + 1));
        match bound {
            Some(b) if b <= i128::MAX as u128 => Ok(Counter { sums, binom }),
            _ => Err(Error::Budget(format!(
                "signed sums for n={n}, d={d} could overflow 128-bit accumulators"
            ))),
        }
    }

    /// Number of rows `y` (with multiplicity) with `HD(x, y) <= k`.
    pub fn within(&self, x: usize, k: usize) -> i128 {
        let d = self.sums.d();
        debug_assert!(k < d);
        let lo = d - k;
        let mut acc = 0i128;
        for l in lo..=d {
            let term = self.binom.signed(l - 1, lo - 1) * self.sums.get(x, l) as i128;
            if (l - lo) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        acc
    }

    fn check_k(&self, k: usize) -> Result<()> {
        if k >= self.sums.d() {
            return Err(Error::InvalidParam(format!(
                "need 0 <= k < d, got k={k} d={}",
                self.sums.d()
            )));
        }
        Ok(())
    }

    /// `r(x, X) <= k`.
    pub fn radius_leq(&self, x: usize, k: usize) -> Result<bool> {
        self.check_k(k)?;
        Ok(self.within(x, k) == self.sums.n() as i128)
    }

    /// `d(x, X \ {x}) > k`. A duplicated row is at distance 0 from its copy,
    /// so it never qualifies.
    pub fn remoteness_gt(&self, x: usize, k: usize) -> Result<bool> {
        self.check_k(k)?;
        if self.sums.multiplicity(x) > 1 {
            return Ok(false);
        }
        Ok(self.within(x, k) == 1)
    }
}

pub fn radius_leq(sums: &SumTable, x: usize, k: usize) -> Result<bool> {
    Counter::new(sums)?.radius_leq(x, k)
}

pub fn remoteness_gt(sums: &SumTable, x: usize, k: usize) -> Result<bool> {
    Counter::new(sums)?.remoteness_gt(x, k)
}

fn with_counters(r: SolveResult, d: usize) -> SolveResult {
    r.with_counter("subsets", 1u64 << d)
        .with_counter("refinements", (1u64 << d) - 1)
}

/// Scans `k = 0, 1, ...` and returns the first row whose radius is at most
/// `k`; radius `d` (row 0) when no smaller radius exists.
pub fn inclexcl_closest(set: &StringSet, budget: &Budget, exec: Exec) -> Result<SolveResult> {
    let sums = build_sum_table(set, budget, exec)?;
    let counter = Counter::new(&sums)?;
    let (n, d) = (set.n(), set.d());
    for k in 0..d {
        for x in 0..n {
            if counter.radius_leq(x, k)? {
                return Ok(with_counters(
                    SolveResult::discrete(Mode::DiscreteClosest, INCLEXCL, set, x, k as u32),
                    d,
                ));
            }
        }
    }
    Ok(with_counters(
        SolveResult::discrete(Mode::DiscreteClosest, INCLEXCL, set, 0, d as u32),
        d,
    ))
}

/// Scans `k = d-1, d-2, ...` and returns the first row farther than `k` from
/// all others, with objective `k + 1`; objective 0 (row 0) when none is.
pub fn inclexcl_remotest(set: &StringSet, budget: &Budget, exec: Exec) -> Result<SolveResult> {
    if set.n() < 2 {
        return Err(Error::Undefined(
            "remoteness undefined on fewer than two strings",
        ));
    }
    let sums = build_sum_table(set, budget, exec)?;
    let counter = Counter::new(&sums)?;
    let (n, d) = (set.n(), set.d());
    for k in (0..d).rev() {
        for x in 0..n {
            if counter.remoteness_gt(x, k)? {
                return Ok(with_counters(
                    SolveResult::discrete(Mode::DiscreteRemotest, INCLEXCL, set, x, k as u32 + 1),
                    d,
                ));
            }
        }
    }
    Ok(with_counters(
        SolveResult::discrete(Mode::DiscreteRemotest, INCLEXCL, set, 0, 0),
        d,
    ))
}
