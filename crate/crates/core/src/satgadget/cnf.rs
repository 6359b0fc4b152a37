//! q-ary CNF formulas. A literal `X_v != a` is true unless variable `v`
//! takes value `a`; a clause is falsified exactly when every one of its
//! literals is.
//!
//! Text format (variables 1-based, values 0-based):
//!
//! ```text
//! # comment
//! p qcnf N M q
//! 1!0 2!1 0
//! ```

use std::fmt::Write as _;

use crate::budget::{checked_pow, Budget};
use crate::error::{Error, Result};
use crate::instance::Symbol;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    /// 0-based variable index.
    pub var: u32,
    /// The forbidden value.
    pub value: Symbol,
}

impl Literal {
    pub fn new(var: u32, value: Symbol) -> Self {
        Literal { var, value }
    }
}

pub type Clause = Vec<Literal>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QaryCnf {
    n_vars: usize,
    q: u32,
    clauses: Vec<Clause>,
    group_size: Option<usize>,
}

impl QaryCnf {
    /// Validates and normalizes: literals sorted and deduplicated within each
    /// clause, clauses sorted and deduplicated.
    pub fn new(n_vars: usize, q: u32, clauses: Vec<Clause>) -> Result<Self> {
        if !(2..=crate::instance::MAX_SIGMA).contains(&q) {
            return Err(Error::InvalidParam(format!(
                "domain size q={q} out of range"
            )));
        }
        let mut clauses = clauses;
        for (i, c) in clauses.iter_mut().enumerate() {
            if c.is_empty() {
                return Err(Error::InvalidParam(format!("clause {i} is empty")));
            }
            for l in c.iter() {
                if l.var as usize >= n_vars || u32::from(l.value) >= q {
                    return Err(Error::InvalidParam(format!(
                        "clause {i}: literal X{}!={} out of range for N={n_vars}, q={q}",
                        l.var + 1,
                        l.value
                    )));
                }
            }
            c.sort_unstable();
            c.dedup();
        }
        clauses.sort();
        clauses.dedup();
        Ok(QaryCnf {
            n_vars,
            q,
            clauses,
            group_size: None,
        })
    }

    /// Attaches the partition into consecutive groups of `s` variables.
    pub fn with_groups(mut self, s: usize) -> Result<Self> {
        if s == 0 || self.n_vars % s != 0 {
            return Err(Error::InvalidParam(format!(
                "group size {s} does not divide N={}",
                self.n_vars
            )));
        }
        self.group_size = Some(s);
        Ok(self)
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn group_size(&self) -> Option<usize> {
        self.group_size
    }

    pub fn num_groups(&self) -> Option<usize> {
        self.group_size.map(|s| self.n_vars / s)
    }

    pub fn group_of(&self, var: u32) -> Option<usize> {
        self.group_size.map(|s| var as usize / s)
    }

    /// Largest clause width (0 for an empty formula).
    pub fn max_width(&self) -> usize {
        self.clauses.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Sorted distinct groups touched by `clause`.
    pub fn groups_of(&self, clause: &[Literal]) -> Vec<usize> {
        let s = self.group_size.expect("formula has no group partition");
        let mut g: Vec<usize> = clause.iter().map(|l| l.var as usize / s).collect();
        g.dedup();
        g
    }

    pub fn satisfies(&self, assignment: &[Symbol]) -> bool {
        self.clauses.iter().all(|c| !falsifies(assignment, c))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "p qcnf {} {} {}",
            self.n_vars,
            self.clauses.len(),
            self.q
        )
        .unwrap();
        for c in &self.clauses {
            for l in c {
                write!(out, "{}!{} ", l.var + 1, l.value).unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    /// Stable 64-bit FNV-1a digest of the canonical text.
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in self.to_text().bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h
    }
}

/// `true` when `assignment` makes every literal of `clause` false.
#[inline]
pub fn falsifies(assignment: &[Symbol], clause: &[Literal]) -> bool {
    clause.iter().all(|l| assignment[l.var as usize] == l.value)
}

pub fn parse_qcnf(bytes: &[u8]) -> Result<QaryCnf> {
    let text =
        std::str::from_utf8(bytes).map_err(|e| Error::parse(0, format!("not UTF-8: {e}")))?;
    let mut header: Option<(usize, usize, u32, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Clause = Vec::new();
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('c') {
            continue;
        }
        let Some((n_vars, _, q, _)) = header else {
            let f: Vec<&str> = trimmed.split_whitespace().collect();
            if f.len() != 5 || f[0] != "p" || f[1] != "qcnf" {
                return Err(Error::parse(line_no, "expected header \"p qcnf N M q\""));
            }
            let num = |s: &str, what: &str| {
                s.parse::<u64>()
                    .map_err(|_| Error::parse(line_no, format!("{what} is not an integer: {s:?}")))
            };
            let (n, m, q) = (num(f[2], "N")?, num(f[3], "M")?, num(f[4], "q")?);
            if q < 2 || q > u64::from(crate::instance::MAX_SIGMA) {
                return Err(Error::parse(line_no, format!("q={q} out of range")));
            }
            header = Some((n as usize, m as usize, q as u32, line_no));
            continue;
        };
        for tok in trimmed.split_whitespace() {
            if tok == "0" {
                if current.is_empty() {
                    return Err(Error::parse(line_no, "empty clause"));
                }
                clauses.push(std::mem::take(&mut current));
                continue;
            }
            let (v, a) = tok.split_once('!').ok_or_else(|| {
                Error::parse(line_no, format!("literal must look like v!a, got {tok:?}"))
            })?;
            let v: usize = v
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad variable in {tok:?}")))?;
            let a: u32 = a
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad value in {tok:?}")))?;
            if v == 0 || v > n_vars {
                return Err(Error::parse(
                    line_no,
                    format!("variable {v} out of range 1..={n_vars}"),
                ));
            }
            if a >= q {
                return Err(Error::parse(
                    line_no,
                    format!("value {a} out of range for q={q}"),
                ));
            }
            current.push(Literal::new(v as u32 - 1, a as Symbol));
        }
    }
    let (n_vars, m, q, header_line) =
        header.ok_or_else(|| Error::parse(1, "missing \"p qcnf\" header"))?;
    if !current.is_empty() {
        return Err(Error::parse(
            last_line,
            "last clause is not terminated by 0",
        ));
    }
    if clauses.len() != m {
        return Err(Error::parse(
            header_line,
            format!("header announces {m} clauses, found {}", clauses.len()),
        ));
    }
    QaryCnf::new(n_vars, q, clauses)
}

pub fn write_qcnf(cnf: &QaryCnf) -> Vec<u8> {
    cnf.to_text().into_bytes()
}

/// Advances `assignment` to the next one in lexicographic order (variable 0
/// most significant); `false` after the last.
pub fn next_assignment(assignment: &mut [Symbol], q: u32) -> bool {
    for v in (0..assignment.len()).rev() {
        if u32::from(assignment[v]) + 1 < q {
            assignment[v] += 1;
            return true;
        }
        assignment[v] = 0;
    }
    false
}

fn check_enumeration(q: u32, n_vars: usize, budget: &Budget) -> Result<()> {
    match checked_pow(u64::from(q), n_vars) {
        Some(t) if t <= budget.enumeration_cap => Ok(()),
        _ => Err(Error::Budget(format!(
            "exhaustive search over q^N = {q}^{n_vars} assignments exceeds the enumeration cap of {}",
            budget.enumeration_cap
        ))),
    }
}

/// First satisfying assignment in lexicographic order, or `None`.
pub fn brute_sat(cnf: &QaryCnf, budget: &Budget) -> Result<Option<Vec<Symbol>>> {
    brute_sat_where(cnf, budget, |_| true)
}

/// First satisfying assignment (lexicographically) that also passes `accept`.
pub fn brute_sat_where(
    cnf: &QaryCnf,
    budget: &Budget,
    accept: impl Fn(&[Symbol]) -> bool,
) -> Result<Option<Vec<Symbol>>> {
    check_enumeration(cnf.q, cnf.n_vars, budget)?;
    let mut a = vec![0 as Symbol; cnf.n_vars];
    loop {
        if cnf.satisfies(&a) && accept(&a) {
            return Ok(Some(a));
        }
        if !next_assignment(&mut a, cnf.q) {
            return Ok(None);
        }
    }
}

/// Random formula: `m` clauses, widths uniform in `1..=k`, distinct variables
/// per clause, uniform forbidden values.
pub fn random_qcnf(n_vars: usize, m: usize, q: u32, k: usize, seed: u64) -> Result<QaryCnf> {
    if n_vars == 0 || k == 0 || k > n_vars {
        return Err(Error::InvalidParam(format!(
            "need 1 <= k <= N, got k={k} N={n_vars}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let mut vars: Vec<u32> = (0..n_vars as u32).collect();
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        let width = 1 + rng.below_usize(k);
        for i in 0..width {
            let j = i + rng.below_usize(n_vars - i);
            vars.swap(i, j);
        }
        clauses.push(
            vars[..width]
                .iter()
                .map(|&v| Literal::new(v, rng.below(u64::from(q)) as Symbol))
                .collect(),
        );
    }
    QaryCnf::new(n_vars, q, clauses)
}
