//! Objective-preserving transformations between problem variants.
//!
//! * `complement`: for binary strings `HD(x, y) = d - HD(x̄, y)`, so the
//!   continuous closest radius equals `d` minus the continuous remotest
//!   distance of the same set.
//! * `c2r`: discrete closest on `X` to discrete remotest on
//!   `{a_i = x_i ∘ c_i^r} ∪ {b_i = x̄_i ∘ 0^{r d''}}` where `c_i` are words of
//!   a constant-weight code of length `d''`, `r = 10 ceil(d / d'')`.
//!   The remotest objective of the target is `d + r d''/4` minus the closest
//!   objective of `X`.
//! * `r2c`: discrete remotest on `A` to discrete closest on
//!   `{x_i = a_i ∘ 0^{r d''}} ∪ {y_i = ā_i ∘ c_i^r}` with the mirrored
//!   objective relation.
//!
//! Every reduction returns a [`ReductionMap`] that can be serialized as
//! JSON lines and replayed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codes::{build_code, ConstantWeightCode};
use crate::error::{Error, Result};
use crate::hamming::hamming_unchecked;
use crate::instance::{StringSet, Symbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    ClosestToRemotest,
    RemotestToClosest,
    ContinuousComplement,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::ClosestToRemotest => "closest-to-remotest",
            Direction::RemotestToClosest => "remotest-to-closest",
            Direction::ContinuousComplement => "continuous-complement",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    A,
    B,
    X,
    Y,
    Same,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub target: usize,
    pub source: usize,
    pub role: Role,
}

/// Header line of the sidecar file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapHeader {
    pub direction: Direction,
    pub source_n: usize,
    pub source_d: usize,
    pub target_n: usize,
    pub target_d: usize,
    pub r: usize,
    pub code_length: usize,
    pub weight: usize,
    /// Source objective = `offset - target objective`.
    pub offset: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionMap {
    pub header: MapHeader,
    pub index_map: Vec<IndexEntry>,
}

impl ReductionMap {
    pub fn direction(&self) -> Direction {
        self.header.direction
    }

    pub fn offset(&self) -> u64 {
        self.header.offset
    }

    /// Source objective from a target objective.
    pub fn apply_transform(&self, target_objective: u64) -> Result<u64> {
        let h = &self.header;
        if target_objective > h.target_d as u64 || target_objective > h.offset {
            return Err(Error::InvalidParam(format!(
                "target objective {target_objective} outside [0, {}] for a {} map",
                h.offset.min(h.target_d as u64),
                h.direction
            )));
        }
        Ok(h.offset - target_objective)
    }

    /// Source index and role of a target row.
    pub fn source_index(&self, target: usize) -> Result<(usize, Role)> {
        self.index_map
            .get(target)
            .map(|e| (e.source, e.role))
            .ok_or_else(|| Error::InvalidParam(format!("target index {target} out of range")))
    }

    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = serde_json::to_string(&self.header)?;
        out.push('\n');
        for e in &self.index_map {
            out.push_str(&serde_json::to_string(e)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn from_jsonl(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty reduction map"))?;
        let header: MapHeader = serde_json::from_str(first)
            .map_err(|e| Error::parse(1, format!("bad map header: {e}")))?;
        let index_map = lines
            .map(|(i, l)| {
                serde_json::from_str(l)
                    .map_err(|e| Error::parse(i + 1, format!("bad map entry: {e}")))
            })
            .collect::<Result<Vec<IndexEntry>>>()?;
        Ok(ReductionMap { header, index_map })
    }
}

fn require_binary(set: &StringSet, what: &str) -> Result<()> {
    if !set.is_binary() {
        return Err(Error::Unsupported(format!(
            "{what} is defined for binary alphabets only, got sigma={}",
            set.sigma()
        )));
    }
    Ok(())
}

/// The identity instance with `closest radius = d - remotest distance`.
pub fn complement_continuous(set: &StringSet) -> Result<(StringSet, ReductionMap)> {
    require_binary(set, "the complement identity")?;
    let (n, d) = (set.n(), set.d());
    let map = ReductionMap {
        header: MapHeader {
            direction: Direction::ContinuousComplement,
            source_n: n,
            source_d: d,
            target_n: n,
            target_d: d,
            r: 0,
            code_length: 0,
            weight: 0,
            offset: d as u64,
        },
        index_map: (0..n)
            .map(|i| IndexEntry {
                target: i,
                source: i,
                role: Role::Same,
            })
            .collect(),
    };
    Ok((set.clone(), map))
}

/// Code used by the discrete reductions: at least two words so the code
/// length, and with it `r`, is positive.
pub fn reduction_code(n: usize) -> Result<ConstantWeightCode> {
    Ok(build_code(n.max(2))?.truncated(n))
}

fn complement(row: &[Symbol]) -> impl Iterator<Item = Symbol> + '_ {
    row.iter().map(|&b| 1 - b)
}

struct Layout {
    code: ConstantWeightCode,
    r: usize,
    d_target: usize,
}

fn layout(set: &StringSet) -> Result<Layout> {
    let code = reduction_code(set.n())?;
    let r = 10 * set.d().div_ceil(code.length);
    let d_target = set.d() + r * code.length;
    Ok(Layout { code, r, d_target })
}

fn header(direction: Direction, set: &StringSet, l: &Layout) -> MapHeader {
    let weight = l.code.weight();
    MapHeader {
        direction,
        source_n: set.n(),
        source_d: set.d(),
        target_n: 2 * set.n(),
        target_d: l.d_target,
        r: l.r,
        code_length: l.code.length,
        weight,
        offset: (set.d() + l.r * weight) as u64,
    }
}

fn index_map(n: usize, first: Role, second: Role) -> Vec<IndexEntry> {
    (0..2 * n)
        .map(|t| IndexEntry {
            target: t,
            source: t % n,
            role: if t < n { first } else { second },
        })
        .collect()
}

/// Rows `a_0..a_{n-1}` then `b_0..b_{n-1}`.
pub fn closest_to_remotest(set: &StringSet) -> Result<(StringSet, ReductionMap)> {
    require_binary(set, "the closest-to-remotest reduction")?;
    let l = layout(set)?;
    let n = set.n();
    let mut data = Vec::with_capacity(2 * n * l.d_target);
    for (i, x) in set.rows().enumerate() {
        data.extend_from_slice(x);
        for _ in 0..l.r {
            data.extend_from_slice(l.code.word(i));
        }
    }
    for x in set.rows() {
        data.extend(complement(x));
        data.extend(std::iter::repeat(0).take(l.r * l.code.length));
    }
    let target = StringSet::new(2 * n, l.d_target, 2, data)?;
    let map = ReductionMap {
        header: header(Direction::ClosestToRemotest, set, &l),
        index_map: index_map(n, Role::A, Role::B),
    };
    Ok((target, map))
}

/// Rows `x_0..x_{n-1}` then `y_0..y_{n-1}`.
pub fn remotest_to_closest(set: &StringSet) -> Result<(StringSet, ReductionMap)> {
    require_binary(set, "the remotest-to-closest reduction")?;
    let l = layout(set)?;
    let n = set.n();
    let mut data = Vec::with_capacity(2 * n * l.d_target);
    for a in set.rows() {
        data.extend_from_slice(a);
        data.extend(std::iter::repeat(0).take(l.r * l.code.length));
    }
    for (i, a) in set.rows().enumerate() {
        data.extend(complement(a));
        for _ in 0..l.r {
            data.extend_from_slice(l.code.word(i));
        }
    }
    let target = StringSet::new(2 * n, l.d_target, 2, data)?;
    let map = ReductionMap {
        header: header(Direction::RemotestToClosest, set, &l),
        index_map: index_map(n, Role::X, Role::Y),
    };
    Ok((target, map))
}

/// Checks the three distance regimes behind the objective identity and
/// returns every violation found.
///
/// With `t = r d''/4` and the coded half `C`, the plain half `P`:
/// distinct coded rows are more than `d + t` apart, distinct plain rows
/// are less than `t` apart, and a coded row `i` and plain row `j` are at
/// distance exactly `d - HD(s_i, s_j) + t`.
pub fn check_regimes(source: &StringSet, target: &StringSet, map: &ReductionMap) -> Vec<String> {
    let h = &map.header;
    let (n, d) = (h.source_n, h.source_d);
    let t = (h.r * h.weight) as u32;
    type Slot = fn(usize, usize) -> usize;
    let (coded, plain): (Slot, Slot) = match h.direction {
        Direction::ClosestToRemotest => (|i, _| i, |i, n| n + i),
        Direction::RemotestToClosest => (|i, n| n + i, |i, _| i),
        Direction::ContinuousComplement => return Vec::new(),
    };
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let s = hamming_unchecked(source.row(i), source.row(j));
            let cc = target.distance(coded(i, n), coded(j, n));
            let pp = target.distance(plain(i, n), plain(j, n));
            let cp = target.distance(coded(i, n), plain(j, n));
            if i != j && cc <= d as u32 + t {
                out.push(format!(
                    "coded rows {i},{j} at distance {cc} <= d + r w = {}",
                    d as u32 + t
                ));
            }
            if i != j && pp >= t {
                out.push(format!("plain rows {i},{j} at distance {pp} >= r w = {t}"));
            }
            if cp != d as u32 - s + t {
                out.push(format!(
                    "coded {i} to plain {j} at distance {cp}, expected d - {s} + r w = {}",
                    d as u32 - s + t
                ));
            }
        }
    }
    out
}
