//! Reference solvers.
//!
//! The discrete solvers compare every unordered pair once, symbol by symbol,
//! and are the oracle for everything else. The continuous solvers enumerate
//! all `sigma^d` candidates in lexicographic order (position 0 most
//! significant) and keep the first strict improvement, so ties resolve to the
//! lexicographically smallest center.

use crate::budget::{checked_pow, Budget};
use crate::error::{Error, Result};
use crate::hamming::hamming_unchecked;
use crate::instance::{StringSet, Symbol};
use crate::par::{self, Exec};
use crate::result::{Mode, SolveResult};

pub const NAIVE: &str = "naive";
pub const BRUTE: &str = "brute-continuous";

/// Upper bound on per-worker scratch arrays in the pair sweep.
const MAX_SWEEP_CHUNKS: usize = 64;

pub fn naive_closest(set: &StringSet, exec: Exec) -> SolveResult {
    let radii = pair_sweep(set, exec, 0, u32::max);
    let (index, radius) = first_min(&radii);
    SolveResult::discrete(Mode::DiscreteClosest, NAIVE, set, index, radius)
        .with_counter("pairs", pair_count(set.n()))
}

pub fn naive_remotest(set: &StringSet, exec: Exec) -> Result<SolveResult> {
    if set.n() < 2 {
        return Err(Error::Undefined(
            "remoteness undefined on fewer than two strings",
        ));
    }
    let dists = pair_sweep(set, exec, u32::MAX, u32::min);
    let (index, dist) = first_max(&dists);
    Ok(
        SolveResult::discrete(Mode::DiscreteRemotest, NAIVE, set, index, dist)
            .with_counter("pairs", pair_count(set.n())),
    )
}

/// Radius of every string (maximum distance to the set).
pub fn radii(set: &StringSet, exec: Exec) -> Vec<u32> {
    pair_sweep(set, exec, 0, u32::max)
}

/// Remoteness of every string (minimum distance to the other rows); all
/// `u32::MAX` when `n == 1`.
pub fn remoteness(set: &StringSet, exec: Exec) -> Vec<u32> {
    pair_sweep(set, exec, u32::MAX, u32::min)
}

/// Full distance matrix by direct comparison.
pub fn naive_distance_matrix(set: &StringSet, exec: Exec) -> crate::DistanceMatrix {
    let n = set.n();
    let rows = par::map_range(exec, n, |i| {
        let x = set.row(i);
        set.rows()
            .map(|y| hamming_unchecked(x, y))
            .collect::<Vec<_>>()
    });
    crate::DistanceMatrix::from_entries(n, rows.concat()).expect("n x n entries")
}

fn pair_count(n: usize) -> u64 {
    (n as u64) * (n as u64).saturating_sub(1) / 2
}

/// Folds `op` over the distances from each row to every other row. Each
/// unordered pair is compared once; rows are dealt round-robin to workers so
/// the triangular workload stays balanced.
fn pair_sweep(set: &StringSet, exec: Exec, init: u32, op: fn(u32, u32) -> u32) -> Vec<u32> {
    let n = set.n();
    let workers = par::chunk_count(exec).min(MAX_SWEEP_CHUNKS).min(n).max(1);
    let partials = par::map_range(exec, workers, |t| {
        let mut acc = vec![init; n];
        for i in (t..n).step_by(workers) {
            let x = set.row(i);
            let mut own = acc[i];
            for (j, slot) in acc.iter_mut().enumerate().skip(i + 1) {
                let h = hamming_unchecked(x, set.row(j));
                own = op(own, h);
                *slot = op(*slot, h);
            }
            acc[i] = own;
        }
        acc
    });
    let mut iter = partials.into_iter();
    let mut out = iter.next().unwrap();
    for part in iter {
        for (o, p) in out.iter_mut().zip(part) {
            *o = op(*o, p);
        }
    }
    out
}

fn first_min(values: &[u32]) -> (usize, u32) {
    let mut best = (0, values[0]);
    for (i, &v) in values.iter().enumerate() {
        if v < best.1 {
            best = (i, v);
        }
    }
    best
}

fn first_max(values: &[u32]) -> (usize, u32) {
    let mut best = (0, values[0]);
    for (i, &v) in values.iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best
}

pub fn brute_continuous_closest(
    set: &StringSet,
    budget: &Budget,
    exec: Exec,
) -> Result<SolveResult> {
    brute(set, budget, exec, true)
}

pub fn brute_continuous_remotest(
    set: &StringSet,
    budget: &Budget,
    exec: Exec,
) -> Result<SolveResult> {
    brute(set, budget, exec, false)
}

/// Number of candidates `sigma^d`, checked against the enumeration cap.
pub fn candidate_count(sigma: u32, d: usize, budget: &Budget) -> Result<u64> {
    match checked_pow(u64::from(sigma), d) {
        Some(total) if total <= budget.enumeration_cap => Ok(total),
        _ => Err(Error::Budget(format!(
            "exhaustive search over sigma^d = {sigma}^{d} candidates exceeds the enumeration cap of {} candidates",
            budget.enumeration_cap
        ))),
    }
}

struct ChunkBest {
    value: u32,
    center: Vec<Symbol>,
}

fn brute(set: &StringSet, budget: &Budget, exec: Exec, closest: bool) -> Result<SolveResult> {
    let total = candidate_count(set.sigma(), set.d(), budget)?;
    // Closest enumerates; remotest reads the distance field. Keeping the two
    // independent lets the complement identity serve as a cross-check.
    let (value, center) = if closest {
        let w = enumerate(set, total, exec, true);
        (w.value, w.center)
    } else {
        remotest_from_field(set, total, budget)?
    };
    Ok(SolveResult {
        mode: if closest {
            Mode::ContinuousClosest
        } else {
            Mode::ContinuousRemotest
        },
        algorithm: BRUTE,
        center_index: None,
        center,
        objective: value,
        counters: [("candidates", total)].into_iter().collect(),
    })
}

fn enumerate(set: &StringSet, total: u64, exec: Exec, closest: bool) -> ChunkBest {
    let ranges = par::split_ranges(total as usize, par::chunk_count(exec) * 4);
    let bests = par::map_range(exec, ranges.len(), |c| {
        brute_range(set, ranges[c].start as u64, ranges[c].end as u64, closest)
    });
    let mut winner: Option<ChunkBest> = None;
    for b in bests.into_iter().flatten() {
        let better = match &winner {
            None => true,
            Some(w) if closest => b.value < w.value,
            Some(w) => b.value > w.value,
        };
        if better {
            winner = Some(b);
        }
    }
    winner.expect("at least one candidate")
}

/// Distance from every candidate (indexed in lexicographic order, position 0
/// most significant) to its nearest row, by breadth-first search over the
/// Hamming graph seeded with all rows at once.
pub fn remoteness_field(set: &StringSet, budget: &Budget) -> Result<Vec<u8>> {
    let (d, sigma) = (set.d(), set.sigma() as usize);
    let total = candidate_count(set.sigma(), d, budget)? as usize;
    if total as u64 > budget.memory_bytes {
        return Err(Error::Budget(format!(
            "distance field over {total} candidates exceeds the memory budget of {} bytes",
            budget.memory_bytes
        )));
    }
    let weights: Vec<usize> = (0..d).map(|k| sigma.pow((d - 1 - k) as u32)).collect();
    let mut dist = vec![u8::MAX; total];
    let mut queue = Vec::with_capacity(total);
    for row in set.rows() {
        let idx: usize = row
            .iter()
            .zip(&weights)
            .map(|(&a, &w)| a as usize * w)
            .sum();
        if dist[idx] == u8::MAX {
            dist[idx] = 0;
            queue.push(idx as u32);
        }
    }
    let mut head = 0;
    while head < queue.len() {
        let idx = queue[head] as usize;
        head += 1;
        let next = dist[idx] + 1;
        for &w in &weights {
            let digit = idx / w % sigma;
            let base = idx - digit * w;
            for a in 0..sigma {
                let nb = base + a * w;
                if dist[nb] == u8::MAX {
                    dist[nb] = next;
                    queue.push(nb as u32);
                }
            }
        }
    }
    Ok(dist)
}

/// First maximum of the distance field, i.e. the lexicographically smallest
/// remotest candidate.
fn remotest_from_field(set: &StringSet, total: u64, budget: &Budget) -> Result<(u32, Vec<Symbol>)> {
    let field = remoteness_field(set, budget)?;
    let mut best = (0, field[0]);
    for (c, &v) in field.iter().enumerate() {
        if v > best.1 {
            best = (c, v);
        }
    }
    debug_assert_eq!(field.len() as u64, total);
    let sigma = u64::from(set.sigma());
    let mut rest = best.0 as u64;
    let mut center = vec![0 as Symbol; set.d()];
    for k in (0..set.d()).rev() {
        center[k] = (rest % sigma) as Symbol;
        rest /= sigma;
    }
    Ok((u32::from(best.1), center))
}

/// Scans candidates `start..end`. Rows that cut a candidate short are moved
/// to the front of the scan order, which makes later cuts cheap.
fn brute_range(set: &StringSet, start: u64, end: u64, closest: bool) -> Option<ChunkBest> {
    if start >= end {
        return None;
    }
    let (n, d, sigma) = (set.n(), set.d(), u64::from(set.sigma()));
    let packed = set.packed();
    let mut digits = vec![0 as Symbol; d];
    let mut rest = start;
    for k in (0..d).rev() {
        digits[k] = (rest % sigma) as Symbol;
        rest /= sigma;
    }
    let mut cand = packed.pack(&digits);
    let mut order: Vec<usize> = (0..n).collect();
    let mut best: Option<ChunkBest> = None;
    let full = d as u32;

    for _ in start..end {
        let mut running = if closest { 0 } else { u32::MAX };
        let mut cut = None;
        for (pos, &j) in order.iter().enumerate() {
            let h = packed.distance_to(&cand, j);
            let stop = if closest {
                running = running.max(h);
                best.as_ref().is_some_and(|b| running >= b.value)
            } else {
                running = running.min(h);
                best.as_ref().is_some_and(|b| running <= b.value)
            };
            if stop {
                cut = Some(pos);
                break;
            }
        }
        match cut {
            Some(pos) => order[..=pos].rotate_right(1),
            None => {
                best = Some(ChunkBest {
                    value: running,
                    center: digits.clone(),
                });
                let optimal = if closest {
                    running == 0
                } else {
                    running == full
                };
                if optimal {
                    break;
                }
            }
        }
        // Odometer step, last position least significant.
        for k in (0..d).rev() {
            let next = digits[k] + 1;
            if u64::from(next) < sigma {
                digits[k] = next;
                packed.write_symbol(&mut cand, k, next);
                break;
            }
            digits[k] = 0;
            packed.write_symbol(&mut cand, k, 0);
        }
    }
    best
}
