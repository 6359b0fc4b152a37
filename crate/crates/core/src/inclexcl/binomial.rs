use crate::error::{Error, Result};
use crate::instance::Symbol;

/// Pascal triangle `C(a, b)` for `0 <= b <= a <= max`, exact.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    max: usize,
    rows: Vec<Vec<u128>>,
}

impl BinomialTable {
    /// Largest `max` whose central coefficients fit in `u128`.
    pub const LIMIT: usize = 128;

    pub fn new(max: usize) -> Self {
        assert!(
            max <= Self::LIMIT,
            "binomial table limited to {}",
            Self::LIMIT
        );
        let mut rows: Vec<Vec<u128>> = Vec::with_capacity(max + 1);
        for a in 0..=max {
            let mut row = vec![1u128; a + 1];
            for b in 1..a {
                row[b] = rows[a - 1][b - 1] + rows[a - 1][b];
            }
            rows.push(row);
        }
        BinomialTable { max, rows }
    }

    pub fn max(&self) -> usize {
        self.max
    }

    /// `C(a, b)`, zero when `b > a`.
    #[inline]
    pub fn get(&self, a: usize, b: usize) -> u128 {
        if b > a {
            0
        } else {
            self.rows[a][b]
        }
    }

    /// Signed variant for use in alternating sums.
    #[inline]
    pub fn signed(&self, a: usize, b: usize) -> i128 {
        self.get(a, b) as i128
    }
}

fn sign(i: usize) -> i128 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `sum_{i=0}^{l} (-1)^i C(m+l-1, m+i-1) C(m+i-1, m-1)`, which vanishes for
/// all `m, l >= 1`.
pub fn zero_sum_identity(m: usize, l: usize) -> Result<i128> {
    if m == 0 || l == 0 {
        return Err(Error::InvalidParam(format!(
            "need m >= 1 and l >= 1, got m={m} l={l}"
        )));
    }
    let table = table_for(m + l)?;
    Ok((0..=l)
        .map(|i| sign(i) * table.signed(m + l - 1, m + i - 1) * table.signed(m + i - 1, m - 1))
        .sum())
}

/// `sum_{i=0}^{l} (-1)^i C(m+l, m+i) C(m+i-1, m-1)`, which equals one for all
/// `m >= 1, l >= 0`.
pub fn one_sum_identity(m: usize, l: usize) -> Result<i128> {
    if m == 0 {
        return Err(Error::InvalidParam("need m >= 1".into()));
    }
    let table = table_for(m + l)?;
    Ok((0..=l)
        .map(|i| sign(i) * table.signed(m + l, m + i) * table.signed(m + i - 1, m - 1))
        .sum())
}

fn table_for(max: usize) -> Result<BinomialTable> {
    // Products of two coefficients must stay below 2^127.
    if max > 62 {
        return Err(Error::InvalidParam(format!(
            "identity arguments too large for exact 128-bit evaluation (m + l = {max})"
        )));
    }
    Ok(BinomialTable::new(max))
}

/// Evaluates the inclusion-exclusion sum
/// `sum_{|I| >= d-k} (-1)^{|I|-d+k} C(|I|-1, d-k-1) [x[I] = y[I]]`
/// term by term over all `2^d` subsets. It equals `[HD(x, y) <= k]`.
pub fn hd_leq_indicator(x: &[Symbol], y: &[Symbol], k: usize) -> Result<i128> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let d = x.len();
    if k >= d {
        return Err(Error::InvalidParam(format!(
            "need 0 <= k < d, got k={k} d={d}"
        )));
    }
    if d > 26 {
        return Err(Error::Budget(format!(
            "2^{d} subsets exceed the enumeration cap of 2^26"
        )));
    }
    let table = BinomialTable::new(d);
    let agree: u32 = (0..d).filter(|&i| x[i] == y[i]).fold(0, |m, i| m | 1 << i);
    let lo = d - k;
    let mut sum = 0i128;
    for subset in 0u32..(1u32 << d) {
        let size = subset.count_ones() as usize;
        if size < lo || subset & !agree != 0 {
            continue;
        }
        sum += sign(size - lo) * table.signed(size - 1, lo - 1);
    }
    Ok(sum)
}
