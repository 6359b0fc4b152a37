//! Partitions of `0..n` with linear-time refinement.
//!
//! Storage is a flat part-id array plus part sizes. Refinement by a single
//! position uses a per-position order of the universe sorted (stably) by
//! symbol: walking that order, elements of the same old part and the same
//! symbol are contiguous in time, so a stamp per old part is enough to hand
//! out new ids without hashing.

use crate::error::{Error, Result};
use crate::instance::StringSet;

#[derive(Debug, Clone)]
pub struct Partition {
    part: Vec<u32>,
    sizes: Vec<u32>,
    generation: u32,
}

impl PartialEq for Partition {
    /// Equal as set partitions: same blocks, regardless of ids or history.
    fn eq(&self, other: &Self) -> bool {
        self.canonical_labels() == other.canonical_labels()
    }
}

impl Eq for Partition {}

impl Partition {
    /// The single-block partition `{[n]}`.
    pub fn trivial(n: usize) -> Self {
        Partition {
            part: vec![0; n],
            sizes: if n == 0 { vec![] } else { vec![n as u32] },
            generation: 0,
        }
    }

    /// Partition whose blocks are the level sets of `labels`.
    pub fn from_labels<T: Copy + Ord>(labels: &[T]) -> Self {
        let mut keys: Vec<T> = labels.to_vec();
        keys.sort_unstable();
        keys.dedup();
        let mut part = Vec::with_capacity(labels.len());
        let mut sizes = vec![0u32; keys.len()];
        for l in labels {
            let id = keys.binary_search(l).unwrap();
            part.push(id as u32);
            sizes[id] += 1;
        }
        Partition {
            part,
            sizes,
            generation: 0,
        }
    }

    /// Partition of the rows of `set` by their symbol at `position`.
    pub fn by_position(set: &StringSet, position: usize) -> Self {
        let labels: Vec<_> = set.rows().map(|r| r[position]).collect();
        Partition::from_labels(&labels)
    }

    pub fn universe(&self) -> usize {
        self.part.len()
    }

    pub fn num_parts(&self) -> usize {
        self.sizes.len()
    }

    /// Number of refinement steps that produced this partition.
    pub fn generation(&self) -> u32 {
        self.generation
    }

    #[inline]
    pub fn part_of(&self, x: usize) -> u32 {
        self.part[x]
    }

    #[inline]
    pub fn part_size(&self, p: u32) -> u32 {
        self.sizes[p as usize]
    }

    /// Size of the block containing `x`.
    #[inline]
    pub fn size_of(&self, x: usize) -> u32 {
        self.sizes[self.part[x] as usize]
    }

    pub fn sizes(&self) -> &[u32] {
        &self.sizes
    }

    /// Block labels renumbered by first occurrence.
    pub fn canonical_labels(&self) -> Vec<u32> {
        let mut remap = vec![u32::MAX; self.sizes.len()];
        let mut next = 0;
        self.part
            .iter()
            .map(|&p| {
                let slot = &mut remap[p as usize];
                if *slot == u32::MAX {
                    *slot = next;
                    next += 1;
                }
                *slot
            })
            .collect()
    }

    /// Blocks as sorted index lists, ordered by smallest element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let labels = self.canonical_labels();
        let mut blocks = vec![Vec::new(); self.sizes.len()];
        for (x, &l) in labels.iter().enumerate() {
            blocks[l as usize].push(x);
        }
        blocks
    }

    /// Common refinement `{P ∩ Q}` in `O(n + parts)`.
    pub fn refine(&self, other: &Partition) -> Result<Partition> {
        let n = self.universe();
        if other.universe() != n {
            return Err(Error::InvalidParam(format!(
                "cannot refine partitions of different universes ({n} vs {})",
                other.universe()
            )));
        }
        // Counting sort of the universe by block of `other`.
        let mut start = vec![0usize; other.num_parts() + 1];
        for &q in &other.part {
            start[q as usize + 1] += 1;
        }
        for i in 0..other.num_parts() {
            start[i + 1] += start[i];
        }
        let mut order = vec![0u32; n];
        let mut fill = start.clone();
        for (x, &q) in other.part.iter().enumerate() {
            order[fill[q as usize]] = x as u32;
            fill[q as usize] += 1;
        }
        let mut out = Partition {
            part: vec![0; n],
            sizes: Vec::new(),
            generation: self.generation.max(other.generation) + 1,
        };
        let mut stamp = vec![u32::MAX; self.num_parts()];
        let mut new_id = vec![0u32; self.num_parts()];
        for q in 0..other.num_parts() {
            for &x in &order[start[q]..start[q + 1]] {
                let p = self.part[x as usize] as usize;
                if stamp[p] != q as u32 {
                    stamp[p] = q as u32;
                    new_id[p] = out.sizes.len() as u32;
                    out.sizes.push(0);
                }
                out.part[x as usize] = new_id[p];
                out.sizes[new_id[p] as usize] += 1;
            }
        }
        Ok(out)
    }
}

/// Precomputed single-position refinements for one instance.
#[derive(Debug, Clone)]
pub struct PositionRefiner {
    n: usize,
    /// Per position: rows sorted stably by symbol.
    orders: Vec<Vec<u32>>,
    /// Per position: end offsets of each symbol run in `orders`.
    runs: Vec<Vec<u32>>,
}

/// Scratch buffers reused across refinements.
#[derive(Debug, Clone)]
pub struct RefineScratch {
    stamp: Vec<u64>,
    new_id: Vec<u32>,
    clock: u64,
}

impl RefineScratch {
    pub fn new(n: usize) -> Self {
        RefineScratch {
            stamp: vec![0; n],
            new_id: vec![0; n],
            clock: 0,
        }
    }
}

impl PositionRefiner {
    pub fn new(set: &StringSet) -> Self {
        let (n, d, sigma) = (set.n(), set.d(), set.sigma() as usize);
        let mut orders = Vec::with_capacity(d);
        let mut runs = Vec::with_capacity(d);
        let mut count = vec![0u32; sigma + 1];
        for k in 0..d {
            count.iter_mut().for_each(|c| *c = 0);
            for row in set.rows() {
                count[row[k] as usize + 1] += 1;
            }
            for a in 0..sigma {
                count[a + 1] += count[a];
            }
            let mut fill = count.clone();
            let mut order = vec![0u32; n];
            for (i, row) in set.rows().enumerate() {
                let a = row[k] as usize;
                order[fill[a] as usize] = i as u32;
                fill[a] += 1;
            }
            let mut ends: Vec<u32> = count[1..].to_vec();
            ends.dedup();
            orders.push(order);
            runs.push(ends);
        }
        PositionRefiner { n, orders, runs }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Writes `p ∩ P_{position}` into `out`, reusing its allocations.
    pub fn refine_into(
        &self,
        p: &Partition,
        position: usize,
        scratch: &mut RefineScratch,
        out: &mut Partition,
    ) {
        debug_assert_eq!(p.universe(), self.n);
        out.part.resize(self.n, 0);
        out.sizes.clear();
        out.generation = p.generation + 1;
        let order = &self.orders[position];
        let mut begin = 0usize;
        for &end in &self.runs[position] {
            scratch.clock += 1;
            let clock = scratch.clock;
            for &x in &order[begin..end as usize] {
                let old = p.part[x as usize] as usize;
                let id = if scratch.stamp[old] == clock {
                    scratch.new_id[old]
                } else {
                    scratch.stamp[old] = clock;
                    let id = out.sizes.len() as u32;
                    scratch.new_id[old] = id;
                    out.sizes.push(0);
                    id
                };
                out.part[x as usize] = id;
                out.sizes[id as usize] += 1;
            }
            begin = end as usize;
        }
    }

    pub fn refine(&self, p: &Partition, position: usize) -> Partition {
        let mut out = Partition::trivial(0);
        self.refine_into(p, position, &mut RefineScratch::new(self.n), &mut out);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn refine_examples() {
        let p = Partition::from_labels(&[0, 0, 1, 1]);
        let q = Partition::from_labels(&[0, 1, 0, 1]);
        let r = p.refine(&q).unwrap();
        assert_eq!(r.num_parts(), 4);
        assert_eq!(r.blocks(), vec![vec![0], vec![1], vec![2], vec![3]]);
        assert_eq!(p.refine(&Partition::trivial(4)).unwrap(), p);
        assert_eq!(p.refine(&p).unwrap(), p);
        assert!(p.refine(&Partition::trivial(3)).is_err());
    }

    #[test]
    fn sizes_and_generation() {
        let p = Partition::from_labels(&['a', 'b', 'a', 'c', 'a']);
        assert_eq!(p.size_of(0), 3);
        assert_eq!(p.size_of(3), 1);
        assert_eq!(p.sizes().iter().sum::<u32>(), 5);
        let r = p.refine(&Partition::trivial(5)).unwrap();
        assert_eq!(r.generation(), 1);
    }

    #[test]
    fn position_refiner_matches_generic() {
        let set =
            StringSet::from_digit_strings(&["0120", "0121", "1120", "0020", "0120"], 3).unwrap();
        let refiner = PositionRefiner::new(&set);
        let mut p = Partition::trivial(set.n());
        for k in [2usize, 0, 3, 1] {
            let fast = refiner.refine(&p, k);
            let slow = p.refine(&Partition::by_position(&set, k)).unwrap();
            assert_eq!(fast, slow);
            assert_eq!(fast.sizes().iter().sum::<u32>() as usize, set.n());
            p = fast;
        }
        assert_eq!(p.blocks(), vec![vec![0, 4], vec![1], vec![2], vec![3]]);
    }
}
