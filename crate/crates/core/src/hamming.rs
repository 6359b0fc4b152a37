//! Hamming distance kernels.
//!
//! [`hamming`] is the scalar reference. [`PackedRows`] stores each row
//! bit-sliced: symbol bit `b` of position `k` lives in plane `b`, word
//! `k / 64`. Two rows differ at position `k` iff some plane differs there, so
//! the distance is the popcount of the OR over planes of the XORed words.
//! Binary instances have a single plane.

use crate::error::{Error, Result};
use crate::instance::{StringSet, Symbol};

pub fn hamming(x: &[Symbol], y: &[Symbol]) -> Result<u32> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    Ok(hamming_unchecked(x, y))
}

#[inline]
pub fn hamming_unchecked(x: &[Symbol], y: &[Symbol]) -> u32 {
    x.iter().zip(y).map(|(a, b)| u32::from(a != b)).sum()
}

/// Bits needed to store symbols of an alphabet of size `sigma`.
pub fn planes_for(sigma: u32) -> usize {
    (32 - (sigma - 1).leading_zeros()).max(1) as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackedRows {
    d: usize,
    planes: usize,
    words: usize,
    /// Row-major: row i occupies `planes * words` words, plane-major.
    bits: Vec<u64>,
}

impl PackedRows {
    pub fn from_set(set: &StringSet) -> Self {
        let mut packed = PackedRows::empty(set.d(), set.sigma(), set.n());
        for row in set.rows() {
            packed.push(row);
        }
        packed
    }

    pub fn empty(d: usize, sigma: u32, capacity: usize) -> Self {
        let planes = planes_for(sigma);
        let words = d.div_ceil(64);
        PackedRows {
            d,
            planes,
            words,
            bits: Vec::with_capacity(capacity * planes * words),
        }
    }

    pub fn push(&mut self, row: &[Symbol]) {
        debug_assert_eq!(row.len(), self.d);
        let start = self.bits.len();
        self.bits.resize(start + self.stride(), 0);
        pack_into(row, self.planes, self.words, &mut self.bits[start..]);
    }

    pub fn len(&self) -> usize {
        self.bits.len() / self.stride().max(1)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn planes(&self) -> usize {
        self.planes
    }

    pub fn words(&self) -> usize {
        self.words
    }

    /// Words per row.
    pub fn stride(&self) -> usize {
        self.planes * self.words
    }

    pub fn row_bits(&self, i: usize) -> &[u64] {
        let s = self.stride();
        &self.bits[i * s..(i + 1) * s]
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> u32 {
        self.distance_to(self.row_bits(i), j)
    }

    /// Distance between an externally packed row (same layout) and row `j`.
    #[inline]
    pub fn distance_to(&self, packed: &[u64], j: usize) -> u32 {
        packed_distance(packed, self.row_bits(j), self.planes, self.words)
    }

    /// Overwrites position `k` of a packed row with symbol `v`.
    #[inline]
    pub fn write_symbol(&self, packed: &mut [u64], k: usize, v: Symbol) {
        let (w, mask) = (k / 64, 1u64 << (k % 64));
        for p in 0..self.planes {
            let word = &mut packed[p * self.words + w];
            if (v >> p) & 1 == 1 {
                *word |= mask;
            } else {
                *word &= !mask;
            }
        }
    }

    /// Packs a row with this layout.
    pub fn pack(&self, row: &[Symbol]) -> Vec<u64> {
        let mut out = vec![0; self.stride()];
        pack_into(row, self.planes, self.words, &mut out);
        out
    }
}

fn pack_into(row: &[Symbol], planes: usize, words: usize, out: &mut [u64]) {
    for (k, &s) in row.iter().enumerate() {
        let (w, b) = (k / 64, k % 64);
        let mut v = s;
        let mut p = 0;
        while v != 0 {
            if v & 1 == 1 {
                out[p * words + w] |= 1 << b;
            }
            v >>= 1;
            p += 1;
        }
        debug_assert!(p <= planes);
    }
}

#[inline]
pub fn packed_distance(x: &[u64], y: &[u64], planes: usize, words: usize) -> u32 {
    match planes {
        1 => x.iter().zip(y).map(|(a, b)| (a ^ b).count_ones()).sum(),
        2 => (0..words)
            .map(|w| ((x[w] ^ y[w]) | (x[words + w] ^ y[words + w])).count_ones())
            .sum(),
        _ => (0..words)
            .map(|w| {
                let mut diff = 0u64;
                for p in 0..planes {
                    diff |= x[p * words + w] ^ y[p * words + w];
                }
                diff.count_ones()
            })
            .sum(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn digits(s: &str) -> Vec<Symbol> {
        s.bytes().map(|b| Symbol::from(b - b'0')).collect()
    }

    #[test]
    fn scalar_examples() {
        let aab = [0, 0, 1];
        assert_eq!(hamming(&aab, &aab).unwrap(), 0);
        assert_eq!(hamming(&digits("000"), &digits("111")).unwrap(), 3);
        assert_eq!(hamming(&digits("0102"), &digits("0012")).unwrap(), 2);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            hamming(&[0, 1], &[0]),
            Err(Error::LengthMismatch { left: 2, right: 1 })
        ));
    }

    #[test]
    fn planes() {
        assert_eq!(planes_for(2), 1);
        assert_eq!(planes_for(3), 2);
        assert_eq!(planes_for(4), 2);
        assert_eq!(planes_for(5), 3);
        assert_eq!(planes_for(65536), 16);
    }

    #[test]
    fn packed_matches_scalar_across_word_boundary() {
        let d = 130;
        for sigma in [2u32, 3, 7, 300] {
            let a: Vec<Symbol> = (0..d)
                .map(|k| ((k * 7 + 1) % sigma as usize) as Symbol)
                .collect();
            let b: Vec<Symbol> = (0..d)
                .map(|k| ((k * 5 + 3) % sigma as usize) as Symbol)
                .collect();
            let set = StringSet::from_rows(&[a.clone(), b.clone()], sigma).unwrap();
            assert_eq!(
                set.distance(0, 1),
                hamming_unchecked(&a, &b),
                "sigma={sigma}"
            );
            assert_eq!(set.distance(1, 1), 0);
        }
    }
}
