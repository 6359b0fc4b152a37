//! Match-count tables `T[x, I] = |{y : x[I] = y[I]}|` and their per-size
//! aggregates `S[x, l] = sum_{|I| = l} T[x, I]`.

use std::fmt::Write as _;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::instance::StringSet;
use crate::par::{self, Exec};

use super::partition::{Partition, PositionRefiner, RefineScratch};

/// `S[x, l]` for every row `x` and `l in 0..=d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumTable {
    n: usize,
    d: usize,
    sums: Vec<u64>,
}

impl SumTable {
    fn zeros(n: usize, d: usize) -> Self {
        SumTable {
            n,
            d,
            sums: vec![0; n * (d + 1)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, x: usize, l: usize) -> u64 {
        self.sums[x * (self.d + 1) + l]
    }

    pub fn row(&self, x: usize) -> &[u64] {
        &self.sums[x * (self.d + 1)..(x + 1) * (self.d + 1)]
    }

    /// Multiplicity of row `x` in the instance.
    pub fn multiplicity(&self, x: usize) -> u64 {
        self.get(x, self.d)
    }

    fn add(&mut self, other: &SumTable) {
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            *a += b;
        }
    }

    /// CSV with one row per string: `x,l0,...,ld`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x");
        for l in 0..=self.d {
            write!(out, ",l{l}").unwrap();
        }
        out.push('\n');
        for x in 0..self.n {
            write!(out, "{x}").unwrap();
            for v in self.row(x) {
                write!(out, ",{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Full tables: `T` stored subset-major (`t[I * n + x]`) plus `S`.
#[derive(Debug, Clone)]
pub struct CountTables {
    n: usize,
    d: usize,
    t: Vec<u32>,
    sums: SumTable,
}

impl CountTables {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `T[x, I]` with `I` given as a bitmask over positions.
    #[inline]
    pub fn t(&self, x: usize, subset: u32) -> u32 {
        self.t[subset as usize * self.n + x]
    }

    pub fn s(&self, x: usize, l: usize) -> u64 {
        self.sums.get(x, l)
    }

    pub fn sums(&self) -> &SumTable {
        &self.sums
    }

    pub fn into_sums(self) -> SumTable {
        self.sums
    }
}

/// Rejects instances outside the configured dimension and work limits.
pub(crate) fn check_limits(set: &StringSet, budget: &Budget) -> Result<()> {
    let (n, d) = (set.n(), set.d());
    if d > budget.d_max as usize {
        return Err(Error::Budget(format!(
            "inclusion-exclusion needs d <= d_max = {}, got d = {d}; use the naive or matmul solver",
            budget.d_max
        )));
    }
    let work = (n as u128) << d;
    if work > u128::from(budget.subset_work_cap) {
        return Err(Error::Budget(format!(
            "n * 2^d = {work} exceeds the subset work cap {}; use the naive solver",
            budget.subset_work_cap
        )));
    }
    Ok(())
}

fn check_memory(bytes: u128, what: &str, budget: &Budget) -> Result<()> {
    if bytes > u128::from(budget.memory_bytes) {
        return Err(Error::Budget(format!(
            "{what} needs {bytes} bytes, over the memory budget of {} bytes; use the naive solver",
            budget.memory_bytes
        )));
    }
    Ok(())
}

/// All subsets of `0..d` grouped by size, ascending numerically within a
/// group.
pub fn subsets_by_size(d: usize) -> Vec<Vec<u32>> {
    let mut layers = vec![Vec::new(); d + 1];
    for subset in 0u32..(1u32 << d) {
        layers[subset.count_ones() as usize].push(subset);
    }
    layers
}

/// Builds `T` for every subset in order of nondecreasing size. Each
/// partition `P_I` comes from `P_{I'}` with `I' = I` minus its lowest
/// position, refined by that position.
pub fn build_count_tables(set: &StringSet, budget: &Budget) -> Result<CountTables> {
    check_limits(set, budget)?;
    let (n, d) = (set.n(), set.d());
    check_memory(((n as u128) << d) * 4, "the full count table", budget)?;
    let refiner = PositionRefiner::new(set);
    let mut scratch = RefineScratch::new(n);
    let mut t = vec![0u32; n << d];
    let mut sums = SumTable::zeros(n, d);

    let layers = subsets_by_size(d);
    let mut prev: Vec<Partition> = vec![Partition::trivial(n)];
    t[..n].fill(n as u32);
    for x in 0..n {
        sums.sums[x * (d + 1)] = n as u64;
    }
    for l in 1..=d {
        let prev_layer = &layers[l - 1];
        let mut current = Vec::with_capacity(layers[l].len());
        for &subset in &layers[l] {
            let low = subset.trailing_zeros() as usize;
            let pred = subset & (subset - 1);
            let pred_idx = prev_layer.binary_search(&pred).unwrap();
            let mut part = Partition::trivial(0);
            refiner.refine_into(&prev[pred_idx], low, &mut scratch, &mut part);
            let base = subset as usize * n;
            for x in 0..n {
                let c = part.size_of(x);
                t[base + x] = c;
                sums.sums[x * (d + 1) + l] += u64::from(c);
            }
            current.push(part);
        }
        prev = current;
    }
    Ok(CountTables { n, d, t, sums })
}

/// Computes only `S`, streaming over the same predecessor tree depth-first.
/// Memory is `O(n d)` per worker; independent subtrees run in parallel and
/// their integer sums are added, so the result does not depend on `exec`.
pub fn build_sum_table(set: &StringSet, budget: &Budget, exec: Exec) -> Result<SumTable> {
    check_limits(set, budget)?;
    let (n, d) = (set.n(), set.d());
    let roots = split_tree(
        d,
        if exec.is_parallel() {
            par::chunk_count(exec)
        } else {
            1
        },
    );
    let per_task = (n as u128) * (d as u128 + 1) * 8 + (n as u128) * (d as u128 + 2) * 8;
    let concurrent = roots.len().min(par::chunk_count(exec)).max(1) as u128;
    check_memory(per_task * concurrent, "the streamed sum tables", budget)?;

    let refiner = PositionRefiner::new(set);
    let partials = par::map_range(exec, roots.len(), |r| {
        let root = roots[r];
        let mut walker = Walker::new(&refiner, d);
        let mut sums = SumTable::zeros(n, d);
        walker.walk_from(root, &mut sums);
        sums
    });
    let mut iter = partials.into_iter();
    let mut total = iter.next().unwrap();
    for part in iter {
        total.add(&part);
    }
    Ok(total)
}

/// A task: either a single subset (`whole = false`) or a subset together
/// with all of its descendants in the predecessor tree.
#[derive(Debug, Clone, Copy)]
struct Root {
    subset: u32,
    whole: bool,
}

/// Descendants of `I` add one position below its lowest set bit, so the
/// subtree under `I` has `2^{lowbit(I)}` nodes (the root has `2^d`). Large
/// subtrees are split until there are enough tasks to balance.
fn split_tree(d: usize, tasks: usize) -> Vec<Root> {
    let low = |s: u32| {
        if s == 0 {
            d
        } else {
            s.trailing_zeros() as usize
        }
    };
    let mut roots = vec![Root {
        subset: 0,
        whole: true,
    }];
    let target = ((1usize << d) / (tasks.max(1) * 2)).max(1);
    while let Some(pos) = roots
        .iter()
        .position(|r| r.whole && (1usize << low(r.subset)) > target && tasks > 1)
    {
        let r = roots[pos];
        roots[pos].whole = false;
        for i in 0..low(r.subset) {
            roots.push(Root {
                subset: r.subset | 1 << i,
                whole: true,
            });
        }
        if roots.len() >= tasks * 4 {
            break;
        }
    }
    roots
}

struct Walker<'a> {
    refiner: &'a PositionRefiner,
    d: usize,
    stack: Vec<Partition>,
    scratch: RefineScratch,
}

impl<'a> Walker<'a> {
    fn new(refiner: &'a PositionRefiner, d: usize) -> Self {
        let n = refiner.n();
        Walker {
            refiner,
            d,
            stack: (0..=d).map(|_| Partition::trivial(n)).collect(),
            scratch: RefineScratch::new(n),
        }
    }

    fn walk_from(&mut self, root: Root, sums: &mut SumTable) {
        // Build P_root from scratch, highest position first so every prefix
        // is itself a node of the tree.
        let depth = root.subset.count_ones() as usize;
        let mut level = 0;
        for i in (0..self.d).rev() {
            if root.subset >> i & 1 == 1 {
                self.step(level, i);
                level += 1;
            }
        }
        debug_assert_eq!(level, depth);
        self.accumulate(depth, sums);
        if root.whole {
            let low = if root.subset == 0 {
                self.d
            } else {
                root.subset.trailing_zeros() as usize
            };
            self.descend(depth, low, sums);
        }
    }

    fn descend(&mut self, depth: usize, low: usize, sums: &mut SumTable) {
        for i in 0..low {
            self.step(depth, i);
            self.accumulate(depth + 1, sums);
            self.descend(depth + 1, i, sums);
        }
    }

    /// `stack[level + 1] = stack[level] ∩ P_{position}`.
    fn step(&mut self, level: usize, position: usize) {
        let (lo, hi) = self.stack.split_at_mut(level + 1);
        self.refiner
            .refine_into(&lo[level], position, &mut self.scratch, &mut hi[0]);
    }

    fn accumulate(&mut self, depth: usize, sums: &mut SumTable) {
        let part = &self.stack[depth];
        let stride = self.d + 1;
        for (x, cell) in sums.sums.iter_mut().skip(depth).step_by(stride).enumerate() {
            *cell += u64::from(part.size_of(x));
        }
    }
}
