//! Instances: `n` strings of common length `d` over the alphabet `0..sigma`.
//!
//! Text format (the interchange contract for every tool in the crate):
//!
//! ```text
//! # optional comment lines before the header
//! n d sigma
//! s_1 s_2 ... s_d        <- one row per string, n rows
//! ```
//!
//! Symbols are base-10 integers. Rows tolerate arbitrary runs of spaces or
//! tabs; the canonical writer emits single spaces and `\n`.

use std::fmt::Write as _;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::hamming::PackedRows;

pub type Symbol = u16;

/// Largest alphabet representable with [`Symbol`].
pub const MAX_SIGMA: u32 = Symbol::MAX as u32 + 1;

#[derive(Debug)]
pub struct StringSet {
    n: usize,
    d: usize,
    sigma: u32,
    data: Vec<Symbol>,
    packed: OnceLock<PackedRows>,
}

impl Clone for StringSet {
    fn clone(&self) -> Self {
        StringSet {
            n: self.n,
            d: self.d,
            sigma: self.sigma,
            data: self.data.clone(),
            packed: OnceLock::new(),
        }
    }
}

impl PartialEq for StringSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
            && self.d == other.d
            && self.sigma == other.sigma
            && self.data == other.data
    }
}

impl Eq for StringSet {}

impl StringSet {
    /// Builds an instance from a row-major `n x d` symbol array.
    pub fn new(n: usize, d: usize, sigma: u32, data: Vec<Symbol>) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::InvalidInstance(format!(
                "need n >= 1 and d >= 1, got n={n} d={d}"
            )));
        }
        if !(2..=MAX_SIGMA).contains(&sigma) {
            return Err(Error::InvalidInstance(format!(
                "alphabet size must be in 2..={MAX_SIGMA}, got {sigma}"
            )));
        }
        if data.len() != n * d {
            return Err(Error::InvalidInstance(format!(
                "expected {} symbols, got {}",
                n * d,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|&s| u32::from(s) >= sigma) {
            return Err(Error::InvalidInstance(format!(
                "symbol {} at row {} column {} is out of range for sigma={sigma}",
                data[pos],
                pos / d,
                pos % d
            )));
        }
        let set = StringSet {
            n,
            d,
            sigma,
            data,
            packed: OnceLock::new(),
        };
        if sigma == 2 {
            set.packed();
        }
        Ok(set)
    }

    pub fn from_rows<R: AsRef<[Symbol]>>(rows: &[R], sigma: u32) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(n * d);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != d {
                return Err(Error::InvalidInstance(format!(
                    "row {i} has length {}, expected {d}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::new(n, d, sigma, data)
    }

    /// Parses strings written with digit characters, e.g. `["001", "110"]`.
    /// Only meaningful for `sigma <= 10`; mostly a convenience for tests.
    pub fn from_digit_strings(rows: &[&str], sigma: u32) -> Result<Self> {
        let parsed: Vec<Vec<Symbol>> = rows
            .iter()
            .map(|r| {
                r.chars()
                    .map(|c| {
                        c.to_digit(10).map(|v| v as Symbol).ok_or_else(|| {
                            Error::InvalidInstance(format!("non-digit character {c:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        Self::from_rows(&parsed, sigma)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sigma(&self) -> u32 {
        self.sigma
    }

    pub fn is_binary(&self) -> bool {
        self.sigma == 2
    }

    pub fn row(&self, i: usize) -> &[Symbol] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[Symbol]> + '_ {
        self.data.chunks_exact(self.d)
    }

    pub fn data(&self) -> &[Symbol] {
        &self.data
    }

    /// Bit-sliced copy of the rows, built on first use (eagerly for binary
    /// instances).
    pub fn packed(&self) -> &PackedRows {
        self.packed.get_or_init(|| PackedRows::from_set(self))
    }

    /// Hamming distance between rows `i` and `j` via the packed kernel.
    pub fn distance(&self, i: usize, j: usize) -> u32 {
        self.packed().distance(i, j)
    }

    /// Number of rows equal to row `i` (including itself).
    pub fn multiplicity(&self, i: usize) -> usize {
        let x = self.row(i);
        self.rows().filter(|y| *y == x).count()
    }

    /// Canonical text encoding.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.n * self.d * 3 + 32);
        writeln!(out, "{} {} {}", self.n, self.d, self.sigma).unwrap();
        for row in self.rows() {
            write_row(&mut out, row);
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        read_instance(text.as_bytes())
    }
}

pub(crate) fn write_row(out: &mut String, row: &[Symbol]) {
    for (k, s) in row.iter().enumerate() {
        if k > 0 {
            out.push(' ');
        }
        write!(out, "{s}").unwrap();
    }
}

/// Formats a string compactly for result records: comma-separated symbols.
pub fn format_symbols(row: &[Symbol]) -> String {
    let mut out = String::with_capacity(row.len() * 2);
    for (k, s) in row.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        write!(out, "{s}").unwrap();
    }
    out
}

pub fn read_instance(bytes: &[u8]) -> Result<StringSet> {
    let text =
        std::str::from_utf8(bytes).map_err(|e| Error::parse(0, format!("not UTF-8: {e}")))?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (header_line, header) = loop {
        match lines.next() {
            None => return Err(Error::parse(1, "missing header \"n d sigma\"")),
            Some((_, l)) if l.trim_start().starts_with('#') => continue,
            Some(found) => break found,
        }
    };
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 {
        return Err(Error::parse(
            header_line,
            format!("header must have three integers \"n d sigma\", got {header:?}"),
        ));
    }
    let parse_field = |s: &str, name: &str| {
        s.parse::<u64>()
            .map_err(|_| Error::parse(header_line, format!("{name} is not an integer: {s:?}")))
    };
    let n = parse_field(fields[0], "n")? as usize;
    let d = parse_field(fields[1], "d")? as usize;
    let sigma = parse_field(fields[2], "sigma")?;
    if n == 0 || d == 0 {
        return Err(Error::parse(header_line, "n and d must be positive"));
    }
    if !(2..=u64::from(MAX_SIGMA)).contains(&sigma) {
        return Err(Error::parse(
            header_line,
            format!("sigma must be in 2..={MAX_SIGMA}, got {sigma}"),
        ));
    }
    let sigma = sigma as u32;

    let mut data = Vec::with_capacity(n.saturating_mul(d).min(1 << 28));
    let mut rows_read = 0;
    for (line_no, line) in lines.by_ref() {
        if rows_read == n {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::parse(
                line_no,
                format!("unexpected content after {n} rows"),
            ));
        }
        let before = data.len();
        for tok in line.split_whitespace() {
            let v: u32 = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("symbol is not an integer: {tok:?}")))?;
            if v >= sigma {
                return Err(Error::parse(
                    line_no,
                    format!("symbol {v} out of range for sigma={sigma}"),
                ));
            }
            data.push(v as Symbol);
        }
        let got = data.len() - before;
        if got != d {
            return Err(Error::parse(
                line_no,
                format!("row has {got} symbols, expected {d}"),
            ));
        }
        rows_read += 1;
    }
    if rows_read != n {
        return Err(Error::parse(
            header_line + rows_read + 1,
            format!("expected {n} rows, found {rows_read}"),
        ));
    }
    StringSet::new(n, d, sigma, data)
}

pub fn write_instance(set: &StringSet) -> Vec<u8> {
    set.to_text().into_bytes()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_minimal_instance() {
        let set = read_instance(b"2 3 2\n0 1 0\n1 1 1\n").unwrap();
        assert_eq!((set.n(), set.d(), set.sigma()), (2, 3, 2));
        assert_eq!(set.row(0), &[0, 1, 0]);
        assert_eq!(set.row(1), &[1, 1, 1]);
    }

    #[test]
    fn canonical_round_trip() {
        let text = "2 3 2\n0 1 0\n1 1 1\n";
        let set = read_instance(text.as_bytes()).unwrap();
        assert_eq!(write_instance(&set), text.as_bytes());
    }

    #[test]
    fn tolerant_whitespace_and_comments() {
        let set = read_instance(b"# planted rho=1\n#x\n2 2 3\n 0\t 2\n1  1 \n\n").unwrap();
        assert_eq!(set.to_text(), "2 2 3\n0 2\n1 1\n");
    }

    #[test]
    fn symbol_out_of_range_names_line() {
        let err = read_instance(b"1 2 2\n0 5\n").unwrap_err();
        match err {
            Error::Parse { line, msg } => {
                assert_eq!(line, 2);
                assert!(msg.contains("out of range"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        for (text, line) in [
            (&b"2 3\n0 1 0\n"[..], 1),
            (b"x 3 2\n", 1),
            (b"2 3 2\n0 1\n1 1 1\n", 2),
            (b"2 3 2\n0 1 0\n", 3),
            (b"1 1 2\n0\n1\n", 3),
            (b"1 1 1\n0\n", 1),
            (b"", 1),
        ] {
            match read_instance(text) {
                Err(Error::Parse { line: l, .. }) => {
                    assert_eq!(l, line, "{:?}", std::str::from_utf8(text))
                }
                other => panic!("{:?}: {other:?}", std::str::from_utf8(text)),
            }
        }
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        assert!(StringSet::new(0, 3, 2, vec![]).is_err());
        assert!(StringSet::new(1, 0, 2, vec![]).is_err());
        assert!(StringSet::new(1, 2, 1, vec![0, 0]).is_err());
        assert!(StringSet::new(1, 2, 2, vec![0, 2]).is_err());
        assert!(StringSet::from_rows(&[vec![0u16, 1], vec![1]], 2).is_err());
    }
}
