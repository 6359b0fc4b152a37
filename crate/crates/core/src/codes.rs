//! Binary constant-weight codes: every word has weight `L/4` and distinct
//! words are at distance at least `ceil(0.37 L)`, with `L <= C ceil(log2 n)`.
//!
//! The main construction is the first-order Reed-Muller code over `F4` (all
//! affine maps `F4^m -> F4`, evaluated at every point) with each `F4` symbol
//! written as a one-hot block of four bits. Two distinct affine maps differ
//! on at least `3/4` of the points, so the binary words have weight `L/4`
//! and distance at least `3L/8`. Its length `4^{ceil(log4 n)}` only fits the
//! logarithmic cap for small `n` (up to 256 with `C = 40`); beyond that a
//! seeded greedy search at the cap length is tried.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::instance::{StringSet, Symbol};
use crate::rng::SplitMix64;

pub const DEFAULT_C: usize = 40;
pub const DEFAULT_SEED: u64 = 0x5EED_C0DE;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    ReedMullerF4,
    Greedy,
    Empty,
}

impl Construction {
    pub fn as_str(self) -> &'static str {
        match self {
            Construction::ReedMullerF4 => "reed-muller-f4",
            Construction::Greedy => "greedy",
            Construction::Empty => "empty",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantWeightCode {
    pub length: usize,
    pub words: Vec<Vec<Symbol>>,
    pub construction: Construction,
}

impl ConstantWeightCode {
    pub fn n(&self) -> usize {
        self.words.len()
    }

    pub fn weight(&self) -> usize {
        self.length / 4
    }

    pub fn word(&self, i: usize) -> &[Symbol] {
        &self.words[i]
    }

    /// The code as a binary instance (one row per word).
    pub fn to_instance(&self) -> Result<StringSet> {
        StringSet::from_rows(&self.words, 2)
    }

    /// First `n` words of this code.
    pub fn truncated(mut self, n: usize) -> Self {
        self.words.truncate(n);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeParams {
    pub c: usize,
    pub seed: u64,
}

impl Default for CodeParams {
    fn default() -> Self {
        CodeParams {
            c: DEFAULT_C,
            seed: DEFAULT_SEED,
        }
    }
}

pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// `C ceil(log2 n)` rounded down to a multiple of four.
pub fn length_cap(n: usize, c: usize) -> usize {
    let cap = c * ceil_log2(n);
    cap - cap % 4
}

/// `ceil(0.37 L)`.
pub fn distance_floor(length: usize) -> usize {
    (37 * length).div_ceil(100)
}

pub fn build_code(n: usize) -> Result<ConstantWeightCode> {
    build_code_with(n, CodeParams::default())
}

pub fn build_code_with(n: usize, params: CodeParams) -> Result<ConstantWeightCode> {
    if n == 0 {
        return Err(Error::InvalidParam("a code needs at least one word".into()));
    }
    if n == 1 {
        return Ok(ConstantWeightCode {
            length: 0,
            words: vec![Vec::new()],
            construction: Construction::Empty,
        });
    }
    let cap = length_cap(n, params.c);
    let m = ceil_log4(n) - 1;
    let rm_length = 4usize.pow(m as u32 + 1);
    if rm_length <= cap {
        return Ok(reed_muller_f4(m).truncated(n));
    }
    greedy_code(n, cap, params.seed)
}

fn ceil_log4(n: usize) -> usize {
    ceil_log2(n).div_ceil(2)
}

const F4_MUL: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];

/// All `4^{m+1}` affine maps `F4^m -> F4`, one-hot expanded to length
/// `4^{m+1}`. Word `t` has constant term `t mod 4` and linear coefficients
/// given by the base-4 digits of `t / 4`.
pub fn reed_muller_f4(m: usize) -> ConstantWeightCode {
    let points = 4usize.pow(m as u32);
    let count = points * 4;
    let mut words = Vec::with_capacity(count);
    for t in 0..count {
        let b = (t % 4) as u8;
        let coeffs: Vec<u8> = (0..m).map(|j| ((t / 4) >> (2 * j) & 3) as u8).collect();
        let mut word = vec![0 as Symbol; points * 4];
        for p in 0..points {
            let mut v = b;
            for (j, &a) in coeffs.iter().enumerate() {
                v ^= F4_MUL[a as usize][p >> (2 * j) & 3];
            }
            word[4 * p + v as usize] = 1;
        }
        words.push(word);
    }
    ConstantWeightCode {
        length: points * 4,
        words,
        construction: Construction::ReedMullerF4,
    }
}

fn pack(word: &[Symbol]) -> Vec<u64> {
    let mut bits = vec![0u64; word.len().div_ceil(64)];
    for (k, &b) in word.iter().enumerate() {
        if b == 1 {
            bits[k / 64] |= 1 << (k % 64);
        }
    }
    bits
}

fn packed_distance(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum()
}

/// Seeded greedy: draw uniform weight-`L/4` words and keep those at distance
/// at least `ceil(0.37 L)` from every kept word. Gives up after a run of
/// consecutive rejections and reports how far it got.
pub fn greedy_code(n: usize, length: usize, seed: u64) -> Result<ConstantWeightCode> {
    if length == 0 || length % 4 != 0 {
        return Err(Error::InvalidParam(format!(
            "code length must be a positive multiple of 4, got {length}"
        )));
    }
    let weight = length / 4;
    let floor = distance_floor(length) as u32;
    let max_streak = 4 * n + 1000;
    let mut rng = SplitMix64::new(seed ^ (n as u64).rotate_left(32) ^ length as u64);
    let mut positions: Vec<usize> = (0..length).collect();
    let mut words: Vec<Vec<Symbol>> = Vec::with_capacity(n);
    let mut packed: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut streak = 0;
    let mut closest_rejected = 0u32;
    while words.len() < n {
        for i in 0..weight {
            let j = i + rng.below_usize(length - i);
            positions.swap(i, j);
        }
        let mut word = vec![0 as Symbol; length];
        for &k in &positions[..weight] {
            word[k] = 1;
        }
        let bits = pack(&word);
        let worst = packed.iter().map(|p| packed_distance(p, &bits)).min();
        match worst {
            Some(dist) if dist < floor => {
                closest_rejected = closest_rejected.max(dist);
                streak += 1;
                if streak >= max_streak {
                    return Err(Error::Budget(format!(
                        "constant-weight code search exhausted at length {length}: placed {} of {n} words \
                         with distance >= {floor} (best rejected candidate reached {closest_rejected})",
                        words.len()
                    )));
                }
            }
            _ => {
                streak = 0;
                words.push(word);
                packed.push(bits);
            }
        }
    }
    Ok(ConstantWeightCode {
        length,
        words,
        construction: Construction::Greedy,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeReport {
    pub n: usize,
    pub length: usize,
    pub length_cap: usize,
    pub distance_floor: usize,
    /// Smallest pairwise distance; the length itself when `n == 1`.
    pub min_distance: usize,
    pub closest_pair: Option<(usize, usize)>,
    pub weight_histogram: BTreeMap<usize, usize>,
    pub violations: Vec<String>,
}

impl CodeReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustive check of weight, pairwise distance and length cap.
pub fn verify_code(code: &ConstantWeightCode, c: usize) -> CodeReport {
    let n = code.n();
    let length = code.length;
    let cap = length_cap(n, c);
    let floor = distance_floor(length);
    let mut violations = Vec::new();
    if length % 4 != 0 {
        violations.push(format!("length {length} is not a multiple of 4"));
    }
    if length > cap {
        violations.push(format!("length {length} exceeds the cap {cap}"));
    }
    let mut weight_histogram = BTreeMap::new();
    for (i, w) in code.words.iter().enumerate() {
        if w.len() != length {
            violations.push(format!("word {i} has length {}", w.len()));
            continue;
        }
        let weight = w.iter().filter(|&&b| b != 0).count();
        *weight_histogram.entry(weight).or_insert(0) += 1;
        if weight * 4 != length || w.iter().any(|&b| b > 1) {
            violations.push(format!(
                "word {i} has weight {weight}, expected {}",
                length / 4
            ));
        }
    }
    let packed: Vec<Vec<u64>> = code.words.iter().map(|w| pack(w)).collect();
    let mut min_distance = length;
    let mut closest_pair = None;
    for i in 0..n {
        for j in i + 1..n {
            let dist = packed_distance(&packed[i], &packed[j]) as usize;
            if closest_pair.is_none() || dist < min_distance {
                min_distance = dist;
                closest_pair = Some((i, j));
            }
        }
    }
    if let Some((i, j)) = closest_pair {
        if min_distance < floor {
            violations.push(format!(
                "words {i} and {j} are at distance {min_distance} < {floor}"
            ));
        }
    }
    CodeReport {
        n,
        length,
        length_cap: cap,
        distance_floor: floor,
        min_distance,
        closest_pair,
        weight_histogram,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_codes_verify() {
        for n in [1, 2, 3, 4, 5, 16, 17, 64, 100, 256] {
            let code = build_code(n).unwrap();
            assert_eq!(code.n(), n);
            let report = verify_code(&code, DEFAULT_C);
            assert!(report.pass(), "n={n}: {:?}", report.violations);
        }
    }

    #[test]
    fn singleton_is_empty_word() {
        let code = build_code(1).unwrap();
        let report = verify_code(&code, DEFAULT_C);
        assert_eq!((code.length, report.min_distance), (0, 0));
        assert!(report.pass());
        assert!(code.to_instance().is_err());
    }

    #[test]
    fn reed_muller_distance_is_three_eighths() {
        let code = reed_muller_f4(2);
        assert_eq!((code.n(), code.length), (64, 64));
        let report = verify_code(&code, 100);
        assert_eq!(report.min_distance, 24);
        assert_eq!(report.weight_histogram, BTreeMap::from([(16, 64)]));
    }

    #[test]
    fn greedy_two_words_of_length_eight() {
        // Two weight-2 words at distance >= ceil(2.96) = 3 must be disjoint.
        let code = greedy_code(2, 8, 1).unwrap();
        let report = verify_code(&code, DEFAULT_C);
        assert_eq!(report.min_distance, 4);
        assert!(report.pass());
    }

    #[test]
    fn deterministic() {
        assert_eq!(build_code(200).unwrap(), build_code(200).unwrap());
        assert_eq!(
            greedy_code(6, 40, 3).unwrap(),
            greedy_code(6, 40, 3).unwrap()
        );
        assert_eq!(
            greedy_code(20, 40, 3).unwrap_err().to_string(),
            greedy_code(20, 40, 3).unwrap_err().to_string()
        );
    }

    #[test]
    fn verifier_names_violations() {
        let mut code = build_code(16).unwrap();
        code.words[3][0] ^= 1;
        let report = verify_code(&code, DEFAULT_C);
        assert!(report
            .violations
            .iter()
            .any(|v| v.starts_with("word 3 has weight")));

        let mut code = build_code(16).unwrap();
        code.words[5] = code.words[2].clone();
        let report = verify_code(&code, DEFAULT_C);
        assert_eq!(report.closest_pair, Some((2, 5)));
        assert!(!report.pass());
    }

    #[test]
    fn floors_and_caps() {
        assert_eq!(distance_floor(8), 3);
        assert_eq!(distance_floor(100), 37);
        assert_eq!(length_cap(16, 40), 160);
        assert_eq!(length_cap(3, 10), 20);
        assert_eq!(ceil_log2(4096), 12);
    }
}
