//! All-pairs Hamming distances through the symbol-indicator Gram matrix.
//!
//! With `A[i, (k, a)] = [x_i[k] = a]`, the product `A A^T` counts matching
//! positions, so `D = d - A A^T`. Columns with at least `tau` nonzeros are
//! *heavy* and go through a dense bit-packed product; the remaining *light*
//! columns are handled by enumerating pairs of rows that share them, which
//! costs at most `tau` increments per nonzero.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::instance::StringSet;
use crate::par::{self, Exec};
use crate::result::{DistanceMatrix, Mode, SolveResult};

pub const MATMUL: &str = "matmul";

/// Rows per output tile in both products.
pub const TILE: usize = 64;

/// Sparse `n x (d sigma)` indicator matrix: row `i` holds the column ids
/// `k sigma + x_i[k]` for `k = 0..d`, already sorted.
#[derive(Debug, Clone)]
pub struct IndicatorMatrix {
    n: usize,
    d: usize,
    sigma: u32,
    cols: Vec<u32>,
}

impl IndicatorMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn num_columns(&self) -> usize {
        self.d * self.sigma as usize
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.cols[i * self.d..(i + 1) * self.d]
    }

    /// `(position, symbol)` of a column id.
    pub fn column_key(&self, col: u32) -> (usize, u32) {
        ((col / self.sigma) as usize, col % self.sigma)
    }

    /// Nonzero count of every column.
    pub fn column_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.num_columns()];
        for &c in &self.cols {
            counts[c as usize] += 1;
        }
        counts
    }

    /// Column-major copy: `(offsets, rows)` with the rows of column `c` at
    /// `rows[offsets[c]..offsets[c + 1]]`, ascending.
    pub fn to_csc(&self) -> (Vec<u32>, Vec<u32>) {
        let counts = self.column_counts();
        let mut offsets = Vec::with_capacity(counts.len() + 1);
        offsets.push(0u32);
        let mut acc = 0u32;
        for c in &counts {
            acc += c;
            offsets.push(acc);
        }
        let mut fill = offsets.clone();
        let mut rows = vec![0u32; self.cols.len()];
        for i in 0..self.n {
            for &c in self.row(i) {
                rows[fill[c as usize] as usize] = i as u32;
                fill[c as usize] += 1;
            }
        }
        (offsets, rows)
    }
}

pub fn build_indicator(set: &StringSet) -> Result<IndicatorMatrix> {
    let (n, d, sigma) = (set.n(), set.d(), set.sigma());
    if (d as u64) * u64::from(sigma) > u64::from(u32::MAX) {
        return Err(Error::Budget(format!(
            "indicator matrix with d * sigma = {} columns does not fit 32-bit column ids",
            d as u64 * u64::from(sigma)
        )));
    }
    let cols = set
        .rows()
        .flat_map(|row| {
            row.iter()
                .enumerate()
                .map(move |(k, &a)| k as u32 * sigma + u32::from(a))
        })
        .collect();
    Ok(IndicatorMatrix { n, d, sigma, cols })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Tau {
    /// `ceil(n^{1 - eps})` with `eps = 0.3 min(1, log_n d)`.
    #[default]
    Auto,
    Fixed(u32),
}

impl Tau {
    pub fn resolve(self, n: usize, d: usize) -> u32 {
        match self {
            Tau::Fixed(t) => t.max(1),
            Tau::Auto => auto_tau(n, d),
        }
    }
}

impl std::str::FromStr for Tau {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Tau::Auto);
        }
        match s.parse::<u32>() {
            Ok(t) if t >= 1 => Ok(Tau::Fixed(t)),
            _ => Err(Error::InvalidParam(format!(
                "tau must be a positive integer or \"auto\", got {s:?}"
            ))),
        }
    }
}

pub fn auto_tau(n: usize, d: usize) -> u32 {
    if n <= 1 {
        return 1;
    }
    let nf = n as f64;
    let delta = (d as f64).ln() / nf.ln();
    let eps = 0.3 * delta.min(1.0);
    (nf.powf(1.0 - eps).ceil() as u32).max(1)
}

/// Partition of the nonempty columns by nonzero count.
#[derive(Debug, Clone)]
pub struct ColumnSplit {
    pub tau: u32,
    pub counts: Vec<u32>,
    pub heavy: Vec<u32>,
    pub light: Vec<u32>,
}

impl ColumnSplit {
    pub fn new(ind: &IndicatorMatrix, tau: u32) -> Self {
        let counts = ind.column_counts();
        let (mut heavy, mut light) = (Vec::new(), Vec::new());
        for (c, &cnt) in counts.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            if cnt >= tau {
                heavy.push(c as u32);
            } else {
                light.push(c as u32);
            }
        }
        ColumnSplit {
            tau,
            counts,
            heavy,
            light,
        }
    }

    pub fn is_heavy(&self, c: u32) -> bool {
        self.counts[c as usize] >= self.tau
    }
}

/// Work counters for one distance-matrix computation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MatmulStats {
    pub tau: u32,
    pub heavy_columns: u64,
    pub light_columns: u64,
    pub light_pair_increments: u64,
    pub heavy_word_ops: u64,
    pub popcount: bool,
}

impl MatmulStats {
    /// Checks the two work bounds of the split:
    /// light increments `<= tau n d` and heavy columns `<= n d / tau`.
    pub fn check_bounds(&self, n: usize, d: usize) -> Result<()> {
        let nd = n as u64 * d as u64;
        if self.popcount {
            return Ok(());
        }
        if self.light_pair_increments > u64::from(self.tau) * nd {
            return Err(Error::InvalidParam(format!(
                "light pair increments {} exceed tau*n*d = {}",
                self.light_pair_increments,
                u64::from(self.tau) * nd
            )));
        }
        if self.heavy_columns * u64::from(self.tau) > nd {
            return Err(Error::InvalidParam(format!(
                "{} heavy columns exceed n*d/tau = {}",
                self.heavy_columns,
                nd as f64 / f64::from(self.tau)
            )));
        }
        Ok(())
    }

    pub fn counters(&self) -> [(&'static str, u64); 5] {
        [
            ("tau", u64::from(self.tau)),
            ("heavy_columns", self.heavy_columns),
            ("light_columns", self.light_columns),
            ("light_pair_increments", self.light_pair_increments),
            ("heavy_word_ops", self.heavy_word_ops),
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MatmulOptions {
    pub tau: Tau,
    /// Use XOR/popcount over packed rows for binary instances.
    pub binary_popcount: bool,
}

impl Default for MatmulOptions {
    fn default() -> Self {
        MatmulOptions {
            tau: Tau::Auto,
            binary_popcount: true,
        }
    }
}

impl MatmulOptions {
    pub fn split(tau: Tau) -> Self {
        MatmulOptions {
            tau,
            binary_popcount: false,
        }
    }
}

fn check_square(n: usize, budget: &Budget, what: &str) -> Result<()> {
    let bytes = (n as u128) * (n as u128) * 4;
    if bytes > u128::from(budget.memory_bytes) {
        return Err(Error::Budget(format!(
            "{what}: {n} x {n} matrix needs {bytes} bytes, over the memory budget of {} bytes",
            budget.memory_bytes
        )));
    }
    Ok(())
}

/// `A_H A_H^T` over a densified, bit-packed copy of the heavy columns.
/// Returns the `n x n` counts and the number of 64-bit AND/popcount steps.
pub fn gram_heavy(
    ind: &IndicatorMatrix,
    split: &ColumnSplit,
    budget: &Budget,
    exec: Exec,
) -> Result<(Vec<u32>, u64)> {
    let n = ind.n();
    check_square(n, budget, "heavy Gram product")?;
    let h = split.heavy.len();
    let words = h.div_ceil(64);
    let dense_bytes = (n as u128) * (words as u128) * 8;
    if dense_bytes > u128::from(budget.memory_bytes) {
        return Err(Error::Budget(format!(
            "densifying {h} heavy columns needs {dense_bytes} bytes; raise tau"
        )));
    }
    let mut gram = vec![0u32; n * n];
    if h == 0 {
        return Ok((gram, 0));
    }
    let mut slot = vec![u32::MAX; ind.num_columns()];
    for (s, &c) in split.heavy.iter().enumerate() {
        slot[c as usize] = s as u32;
    }
    let mut bits = vec![0u64; n * words];
    for i in 0..n {
        for &c in ind.row(i) {
            let s = slot[c as usize];
            if s != u32::MAX {
                bits[i * words + s as usize / 64] |= 1 << (s % 64);
            }
        }
    }
    let bits = &bits;
    par::for_each_chunk_mut(exec, &mut gram, TILE * n, |block, out| {
        let i0 = block * TILE;
        let rows = out.len() / n;
        for j0 in (0..n).step_by(TILE) {
            let j1 = (j0 + TILE).min(n);
            for di in 0..rows {
                let a = &bits[(i0 + di) * words..(i0 + di + 1) * words];
                let out_row = &mut out[di * n..(di + 1) * n];
                for j in j0..j1 {
                    let b = &bits[j * words..(j + 1) * words];
                    out_row[j] = a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum();
                }
            }
        }
    });
    Ok((gram, (n as u64) * (n as u64) * words as u64))
}

/// `A_L A_L^T` by pair enumeration: for every row `i` and each of its light
/// columns, bump `(i, j)` for every row `j` in that column. Returns the
/// counts and the number of increments, `sum_c count(c)^2`.
pub fn gram_light(
    ind: &IndicatorMatrix,
    split: &ColumnSplit,
    budget: &Budget,
    exec: Exec,
) -> Result<(Vec<u32>, u64)> {
    let n = ind.n();
    check_square(n, budget, "light Gram product")?;
    let (offsets, rows) = ind.to_csc();
    let mut gram = vec![0u32; n * n];
    let (offsets, rows) = (&offsets, &rows);
    par::for_each_chunk_mut(exec, &mut gram, TILE * n, |block, out| {
        let i0 = block * TILE;
        for (di, out_row) in out.chunks_mut(n).enumerate() {
            for &c in ind.row(i0 + di) {
                if split.is_heavy(c) {
                    continue;
                }
                let (lo, hi) = (
                    offsets[c as usize] as usize,
                    offsets[c as usize + 1] as usize,
                );
                for &j in &rows[lo..hi] {
                    out_row[j as usize] += 1;
                }
            }
        }
    });
    let increments = split
        .light
        .iter()
        .map(|&c| u64::from(split.counts[c as usize]).pow(2))
        .sum();
    Ok((gram, increments))
}

/// Pairwise distances of `set` with work counters.
pub fn distance_matrix(
    set: &StringSet,
    options: MatmulOptions,
    budget: &Budget,
    exec: Exec,
) -> Result<(DistanceMatrix, MatmulStats)> {
    let (n, d) = (set.n(), set.d());
    if options.binary_popcount && set.is_binary() {
        check_square(n, budget, "distance matrix")?;
        return Ok(popcount_distances(set, exec));
    }
    let ind = build_indicator(set)?;
    let tau = options.tau.resolve(n, d);
    let split = ColumnSplit::new(&ind, tau);
    let (heavy, word_ops) = gram_heavy(&ind, &split, budget, exec)?;
    let (mut gram, increments) = gram_light(&ind, &split, budget, exec)?;
    let dd = d as u32;
    for (g, h) in gram.iter_mut().zip(heavy) {
        *g = dd - (*g + h);
    }
    let stats = MatmulStats {
        tau,
        heavy_columns: split.heavy.len() as u64,
        light_columns: split.light.len() as u64,
        light_pair_increments: increments,
        heavy_word_ops: word_ops,
        popcount: false,
    };
    stats.check_bounds(n, d)?;
    Ok((DistanceMatrix::from_entries(n, gram)?, stats))
}

/// Binary path: XOR and popcount over packed rows, no column split.
fn popcount_distances(set: &StringSet, exec: Exec) -> (DistanceMatrix, MatmulStats) {
    let n = set.n();
    let packed = set.packed();
    let mut entries = vec![0u32; n * n];
    par::for_each_chunk_mut(exec, &mut entries, TILE * n, |block, out| {
        let i0 = block * TILE;
        for (di, row) in out.chunks_mut(n).enumerate() {
            let a = packed.row_bits(i0 + di);
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = packed.distance_to(a, j);
            }
        }
    });
    let stats = MatmulStats {
        heavy_word_ops: (n as u64) * (n as u64) * packed.stride() as u64,
        popcount: true,
        ..MatmulStats::default()
    };
    (DistanceMatrix::from_entries(n, entries).unwrap(), stats)
}

fn with_stats(mut r: SolveResult, stats: &MatmulStats) -> SolveResult {
    for (k, v) in stats.counters() {
        r.counters.insert(k, v);
    }
    r.counters.insert("popcount", u64::from(stats.popcount));
    r
}

pub fn matmul_closest(
    set: &StringSet,
    options: MatmulOptions,
    budget: &Budget,
    exec: Exec,
) -> Result<SolveResult> {
    let (dm, stats) = distance_matrix(set, options, budget, exec)?;
    let (i, radius) = dm.closest();
    Ok(with_stats(
        SolveResult::discrete(Mode::DiscreteClosest, MATMUL, set, i, radius),
        &stats,
    ))
}

pub fn matmul_remotest(
    set: &StringSet,
    options: MatmulOptions,
    budget: &Budget,
    exec: Exec,
) -> Result<SolveResult> {
    if set.n() < 2 {
        return Err(Error::Undefined(
            "remoteness undefined on fewer than two strings",
        ));
    }
    let (dm, stats) = distance_matrix(set, options, budget, exec)?;
    let (i, dist) = dm.remotest()?;
    Ok(with_stats(
        SolveResult::discrete(Mode::DiscreteRemotest, MATMUL, set, i, dist),
        &stats,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::random_instance;
    use crate::naive::naive_distance_matrix;

    #[test]
    fn indicator_shape() {
        let set = StringSet::from_digit_strings(&["01"], 2).unwrap();
        let ind = build_indicator(&set).unwrap();
        assert_eq!(ind.row(0), &[0, 3]);
        assert_eq!(ind.column_key(3), (1, 1));
        let set = random_instance(30, 7, 3, 5).unwrap();
        let ind = build_indicator(&set).unwrap();
        let counts = ind.column_counts();
        for k in 0..7 {
            for a in 0..3u16 {
                let direct = set.rows().filter(|r| r[k] == a).count() as u32;
                assert_eq!(counts[k * 3 + a as usize], direct);
            }
        }
    }

    #[test]
    fn small_matrix() {
        let set = StringSet::from_digit_strings(&["00", "01", "11"], 2).unwrap();
        for opts in [
            MatmulOptions::default(),
            MatmulOptions::split(Tau::Fixed(2)),
        ] {
            let (dm, _) =
                distance_matrix(&set, opts, &Budget::default(), Exec::Sequential).unwrap();
            assert_eq!(dm.entries(), &[0, 1, 2, 1, 0, 1, 2, 1, 0]);
        }
        let b = Budget::default();
        let c = matmul_closest(&set, MatmulOptions::default(), &b, Exec::Sequential).unwrap();
        assert_eq!((c.center_index, c.objective), (Some(1), 1));
        let r = matmul_remotest(&set, MatmulOptions::default(), &b, Exec::Sequential).unwrap();
        assert_eq!((r.center_index, r.objective), (Some(0), 1));
    }

    #[test]
    fn heavy_light_extremes() {
        let b = Budget::default();
        let copies = StringSet::new(5, 4, 3, [0u16, 1, 2, 1].repeat(5)).unwrap();
        let ind = build_indicator(&copies).unwrap();
        let split = ColumnSplit::new(&ind, 5);
        let (g, _) = gram_heavy(&ind, &split, &b, Exec::Sequential).unwrap();
        assert!(g.iter().all(|&v| v == 4));
        let split = ColumnSplit::new(&ind, 6);
        let (g, _) = gram_heavy(&ind, &split, &b, Exec::Sequential).unwrap();
        assert!(g.iter().all(|&v| v == 0));

        let distinct = StringSet::from_digit_strings(&["0", "1", "2"], 3).unwrap();
        let ind = build_indicator(&distinct).unwrap();
        let split = ColumnSplit::new(&ind, 2);
        let (g, inc) = gram_light(&ind, &split, &b, Exec::Sequential).unwrap();
        assert_eq!(g, vec![1, 0, 0, 0, 1, 0, 0, 0, 1]);
        assert_eq!(inc, 3);
    }

    #[test]
    fn matches_naive_for_any_tau() {
        let b = Budget::default();
        let set = random_instance(64, 256, 8, 3).unwrap();
        let naive = naive_distance_matrix(&set, Exec::Sequential);
        for tau in [
            Tau::Auto,
            Tau::Fixed(1),
            Tau::Fixed(4),
            Tau::Fixed(16),
            Tau::Fixed(64),
            Tau::Fixed(1000),
        ] {
            for exec in [Exec::Sequential, Exec::Parallel] {
                let (dm, stats) =
                    distance_matrix(&set, MatmulOptions::split(tau), &b, exec).unwrap();
                assert_eq!(dm, naive, "{tau:?}");
                stats.check_bounds(64, 256).unwrap();
            }
        }
        let bin = random_instance(70, 130, 2, 4).unwrap();
        let (dm, stats) =
            distance_matrix(&bin, MatmulOptions::default(), &b, Exec::Parallel).unwrap();
        assert!(stats.popcount);
        assert_eq!(dm, naive_distance_matrix(&bin, Exec::Sequential));
    }

    #[test]
    fn auto_tau_values() {
        assert_eq!(auto_tau(1, 5), 1);
        // d = n: eps = 0.3, tau = ceil(n^0.7).
        assert_eq!(auto_tau(1024, 1024), 128);
        // d = 1: eps = 0, tau = n.
        assert_eq!(auto_tau(100, 1), 100);
        assert_eq!("auto".parse::<Tau>().unwrap(), Tau::Auto);
        assert_eq!("16".parse::<Tau>().unwrap(), Tau::Fixed(16));
        assert!("0".parse::<Tau>().is_err());
    }

    #[test]
    fn memory_budget() {
        let set = random_instance(300, 4, 3, 1).unwrap();
        let tiny = Budget::default().with_memory_mb(0);
        assert!(
            distance_matrix(&set, MatmulOptions::default(), &tiny, Exec::Sequential)
                .unwrap_err()
                .is_budget()
        );
    }
}
