//! Seeded instance generators. All randomness comes from [`SplitMix64`].

use crate::error::{Error, Result};
use crate::instance::{StringSet, Symbol};
use crate::rng::SplitMix64;

/// `n` strings with independent uniform symbols, drawn row-major.
pub fn random_instance(n: usize, d: usize, sigma: u32, seed: u64) -> Result<StringSet> {
    check_shape(n, d, sigma)?;
    let mut rng = SplitMix64::new(seed);
    let data = (0..n * d)
        .map(|_| rng.below(u64::from(sigma)) as Symbol)
        .collect();
    StringSet::new(n, d, sigma, data)
}

/// A planted instance: a uniform center, then each string is the center with
/// exactly `rho` distinct positions changed to a different symbol. Every
/// string is within `rho` of the center, so the continuous radius is at most
/// `rho` and the discrete radius at most `2 rho`.
#[derive(Debug, Clone)]
pub struct Planted {
    pub set: StringSet,
    pub center: Vec<Symbol>,
    pub rho: usize,
}

impl Planted {
    /// Instance text with the planted radius recorded in a leading comment.
    pub fn to_text(&self) -> String {
        format!("# planted rho={}\n{}", self.rho, self.set.to_text())
    }
}

pub fn planted_instance(n: usize, d: usize, sigma: u32, rho: usize, seed: u64) -> Result<Planted> {
    check_shape(n, d, sigma)?;
    if rho > d {
        return Err(Error::InvalidParam(format!("rho={rho} exceeds d={d}")));
    }
    let mut rng = SplitMix64::new(seed);
    let center: Vec<Symbol> = (0..d)
        .map(|_| rng.below(u64::from(sigma)) as Symbol)
        .collect();
    let mut data = Vec::with_capacity(n * d);
    let mut positions: Vec<usize> = (0..d).collect();
    for _ in 0..n {
        let mut row = center.clone();
        // Partial Fisher-Yates: the first `rho` slots become a uniform subset.
        for i in 0..rho {
            let j = i + rng.below_usize(d - i);
            positions.swap(i, j);
        }
        for &k in &positions[..rho] {
            let shift = 1 + rng.below(u64::from(sigma) - 1) as u32;
            row[k] = ((u32::from(row[k]) + shift) % sigma) as Symbol;
        }
        data.extend_from_slice(&row);
    }
    Ok(Planted {
        set: StringSet::new(n, d, sigma, data)?,
        center,
        rho,
    })
}

fn check_shape(n: usize, d: usize, sigma: u32) -> Result<()> {
    if n == 0 || d == 0 || !(2..=crate::instance::MAX_SIGMA).contains(&sigma) {
        return Err(Error::InvalidParam(format!(
            "need n >= 1, d >= 1 and 2 <= sigma <= {}, got n={n} d={d} sigma={sigma}",
            crate::instance::MAX_SIGMA
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamming::hamming_unchecked;

    #[test]
    fn deterministic() {
        let a = random_instance(4, 3, 2, 7).unwrap();
        let b = random_instance(4, 3, 2, 7).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert_ne!(a.to_text(), random_instance(4, 3, 2, 8).unwrap().to_text());
    }

    #[test]
    fn planted_distances() {
        for rho in [0, 1, 3] {
            let p = planted_instance(20, 8, 3, rho, 11).unwrap();
            for row in p.set.rows() {
                assert_eq!(hamming_unchecked(row, &p.center) as usize, rho);
            }
            assert!(p.to_text().starts_with(&format!("# planted rho={rho}\n")));
        }
        let p = planted_instance(5, 4, 2, 0, 1).unwrap();
        assert!(p.set.rows().all(|r| r == p.center.as_slice()));
        assert!(planted_instance(5, 4, 2, 5, 1).is_err());
    }
}
