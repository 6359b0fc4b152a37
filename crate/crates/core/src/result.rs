use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::{format_symbols, StringSet, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    DiscreteClosest,
    DiscreteRemotest,
    ContinuousClosest,
    ContinuousRemotest,
}

impl Mode {
    pub const ALL: [Mode; 4] = [
        Mode::DiscreteClosest,
        Mode::DiscreteRemotest,
        Mode::ContinuousClosest,
        Mode::ContinuousRemotest,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::DiscreteClosest => "discrete-closest",
            Mode::DiscreteRemotest => "discrete-remotest",
            Mode::ContinuousClosest => "continuous-closest",
            Mode::ContinuousRemotest => "continuous-remotest",
        }
    }

    pub fn is_discrete(self) -> bool {
        matches!(self, Mode::DiscreteClosest | Mode::DiscreteRemotest)
    }

    pub fn is_closest(self) -> bool {
        matches!(self, Mode::DiscreteClosest | Mode::ContinuousClosest)
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidParam(format!("unknown mode {s:?}")))
    }
}

/// Outcome of a solver run.
///
/// `objective` is the radius for closest modes and the distance to the rest of
/// the set for remotest modes. `counters` holds deterministic work counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveResult {
    pub mode: Mode,
    pub algorithm: &'static str,
    pub center_index: Option<usize>,
    pub center: Vec<Symbol>,
    pub objective: u32,
    pub counters: BTreeMap<&'static str, u64>,
}

impl SolveResult {
    pub(crate) fn discrete(
        mode: Mode,
        algorithm: &'static str,
        set: &StringSet,
        index: usize,
        objective: u32,
    ) -> Self {
        SolveResult {
            mode,
            algorithm,
            center_index: Some(index),
            center: set.row(index).to_vec(),
            objective,
            counters: BTreeMap::new(),
        }
    }

    pub(crate) fn with_counter(mut self, name: &'static str, value: u64) -> Self {
        self.counters.insert(name, value);
        self
    }

    pub fn center_string(&self) -> String {
        format_symbols(&self.center)
    }

    /// Recomputes the objective of `center` against `set` from scratch.
    pub fn evaluate(&self, set: &StringSet) -> Result<u32> {
        evaluate(self.mode, set, &self.center, self.center_index)
    }
}

/// Objective of `center` for `mode`. Discrete remotest excludes one copy of
/// the center (its own row) from the minimum.
pub fn evaluate(
    mode: Mode,
    set: &StringSet,
    center: &[Symbol],
    index: Option<usize>,
) -> Result<u32> {
    if center.len() != set.d() {
        return Err(Error::LengthMismatch {
            left: center.len(),
            right: set.d(),
        });
    }
    let dists = set
        .rows()
        .enumerate()
        .filter(|(j, _)| !(mode == Mode::DiscreteRemotest && Some(*j) == index))
        .map(|(_, y)| crate::hamming::hamming_unchecked(center, y));
    let value = if mode.is_closest() {
        dists.max()
    } else {
        dists.min()
    };
    value.ok_or(Error::Undefined(
        "remoteness undefined on fewer than two strings",
    ))
}

/// Pairwise Hamming distances, row-major `n x n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<u32>,
}

impl DistanceMatrix {
    pub fn from_entries(n: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::InvalidParam(format!(
                "distance matrix of order {n} needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        Ok(DistanceMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    /// Row with the smallest maximum entry, lowest index on ties.
    pub fn closest(&self) -> (usize, u32) {
        let mut best = (0, u32::MAX);
        for i in 0..self.n {
            let radius = self.row(i).iter().copied().max().unwrap_or(0);
            if radius < best.1 {
                best = (i, radius);
            }
        }
        best
    }

    /// Row with the largest minimum off-diagonal entry, lowest index on ties.
    pub fn remotest(&self) -> Result<(usize, u32)> {
        if self.n < 2 {
            return Err(Error::Undefined(
                "remoteness undefined on fewer than two strings",
            ));
        }
        let mut best: Option<(usize, u32)> = None;
        for i in 0..self.n {
            let dist = self
                .row(i)
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &v)| v)
                .min()
                .unwrap();
            if best.map_or(true, |(_, b)| dist > b) {
                best = Some((i, dist));
            }
        }
        Ok(best.unwrap())
    }

    /// Symmetry, zero diagonal and the `[0, d]` range.
    pub fn check_basic(&self, d: usize) -> Result<()> {
        for i in 0..self.n {
            if self.get(i, i) != 0 {
                return Err(Error::InvalidParam(format!("nonzero diagonal at {i}")));
            }
            for j in 0..i {
                let v = self.get(i, j);
                if v != self.get(j, i) {
                    return Err(Error::InvalidParam(format!("asymmetric at ({i},{j})")));
                }
                if v as usize > d {
                    return Err(Error::InvalidParam(format!("entry {v} > d at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    /// Row-major little-endian `u32` dump.
    pub fn to_le_bytes(&self) -> Vec<u8> {
        self.entries.iter().flat_map(|v| v.to_le_bytes()).collect()
    }
}
