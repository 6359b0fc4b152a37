//! Making every clause have the same width and touch the same number of
//! groups.
//!
//! Layout of the output with original width `k` and group size `s`:
//! the original variables padded to `N' = s ceil(N/s)`, followed by `k + 1`
//! fresh groups `Y_0, ..., Y_k` of `s` variables each. The *forced*
//! variables are the first `k` of `Y_0` and the first of every other `Y_j`.
//! A block `psi` of `q^{2k} - 1` clauses on the `2k` forced variables rules
//! out every nonzero assignment to them, so they are all zero in any
//! satisfying assignment and literals `Y != 0` on them are always false.
//! An original clause of width `w` touching `g` groups is padded with
//! `k - w + g` such literals from `Y_0` and one from each of
//! `Y_1, ..., Y_{k-g}`, reaching width `2k` over exactly `k + 1` groups.

use crate::error::{Error, Result};
use crate::instance::Symbol;

use super::cnf::{Clause, Literal, QaryCnf};

/// Per-formula summary: width and group count of every clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityWitness {
    pub width: usize,
    pub groups: usize,
    pub group_size: usize,
    pub uniform_width: bool,
    pub uniform_groups: bool,
}

impl RegularityWitness {
    /// Measures `cnf` against the claimed `width` and `groups`.
    pub fn measure(cnf: &QaryCnf, width: usize, groups: usize) -> Result<Self> {
        let s = cnf
            .group_size()
            .ok_or_else(|| Error::InvalidParam("formula has no group partition".into()))?;
        Ok(RegularityWitness {
            width,
            groups,
            group_size: s,
            uniform_width: cnf.clauses().iter().all(|c| c.len() == width),
            uniform_groups: cnf
                .clauses()
                .iter()
                .all(|c| cnf.groups_of(c).len() == groups),
        })
    }

    pub fn holds(&self) -> bool {
        self.uniform_width && self.uniform_groups
    }

    /// Re-measures `cnf` and checks it matches this witness.
    pub fn validate(&self, cnf: &QaryCnf) -> Result<()> {
        let again = Self::measure(cnf, self.width, self.groups)?;
        if again.group_size != self.group_size || !again.holds() {
            return Err(Error::InvalidParam(format!(
                "formula is not {}-regular with width {} and group size {}",
                self.groups, self.width, self.group_size
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Regularized {
    pub cnf: QaryCnf,
    pub witness: RegularityWitness,
    /// Variables of the source formula (a prefix of the output's).
    pub source_vars: usize,
    /// The `2k` forced variables, in `psi` order.
    pub forced: Vec<u32>,
}

impl Regularized {
    /// Extends a source assignment to the output variables (padding and
    /// fresh variables zero).
    pub fn lift(&self, assignment: &[Symbol]) -> Vec<Symbol> {
        let mut out = vec![0; self.cnf.n_vars()];
        out[..assignment.len()].copy_from_slice(assignment);
        out
    }
}

pub fn regularize(cnf: &QaryCnf, s: usize) -> Result<Regularized> {
    let k = cnf.max_width().max(1);
    let n = cnf.n_vars();
    if 2 * k > s || s > n {
        return Err(Error::InvalidParam(format!(
            "regularizing needs 2k <= s <= N, got k={k} s={s} N={n}"
        )));
    }
    let q = cnf.q();
    let padded = n.div_ceil(s) * s;
    let y_start = padded;
    let total = padded + (k + 1) * s;
    let y = |group: usize, offset: usize| (y_start + group * s + offset) as u32;

    let forced_y0: Vec<u32> = (0..k).map(|i| y(0, i)).collect();
    let forced_rest: Vec<u32> = (1..=k).map(|j| y(j, 0)).collect();
    let forced: Vec<u32> = forced_y0.iter().chain(&forced_rest).copied().collect();

    let mut clauses: Vec<Clause> = Vec::new();
    for c in cnf.clauses() {
        let w = c.len();
        let mut groups: Vec<usize> = c.iter().map(|l| l.var as usize / s).collect();
        groups.dedup();
        let g = groups.len();
        let mut out = c.clone();
        out.extend(forced_y0[..k - w + g].iter().map(|&v| Literal::new(v, 0)));
        out.extend(forced_rest[..k - g].iter().map(|&v| Literal::new(v, 0)));
        clauses.push(out);
    }

    // psi: one clause per nonzero assignment beta of the forced variables,
    // falsified by beta alone.
    let width = 2 * k;
    let mut beta = vec![0 as Symbol; width];
    while super::cnf::next_assignment(&mut beta, q) {
        clauses.push(
            forced
                .iter()
                .zip(&beta)
                .map(|(&v, &b)| Literal::new(v, b))
                .collect(),
        );
    }

    let out = QaryCnf::new(total, q, clauses)?.with_groups(s)?;
    let witness = RegularityWitness::measure(&out, width, k + 1)?;
    debug_assert!(witness.holds());
    Ok(Regularized {
        cnf: out,
        witness,
        source_vars: n,
        forced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::satgadget::cnf::{brute_sat, random_qcnf};

    #[test]
    fn shape() {
        let f = QaryCnf::new(
            5,
            2,
            vec![
                vec![Literal::new(0, 1)],
                vec![Literal::new(1, 0), Literal::new(4, 1)],
            ],
        )
        .unwrap();
        let r = regularize(&f, 4).unwrap();
        // N' = 8, plus 3 fresh groups of 4.
        assert_eq!(r.cnf.n_vars(), 20);
        assert_eq!(r.witness.width, 4);
        assert_eq!(r.witness.groups, 3);
        assert!(r.witness.holds());
        r.witness.validate(&r.cnf).unwrap();
        assert_eq!(r.cnf.clauses().len(), 2 + 15);
    }

    #[test]
    fn psi_alone_forces_zero() {
        let f = QaryCnf::new(4, 3, vec![vec![Literal::new(0, 0), Literal::new(1, 2)]]).unwrap();
        let r = regularize(&f, 4).unwrap();
        let psi = QaryCnf::new(
            r.cnf.n_vars(),
            3,
            r.cnf
                .clauses()
                .iter()
                .filter(|c| c.iter().all(|l| r.forced.contains(&l.var)))
                .cloned()
                .collect(),
        )
        .unwrap();
        assert_eq!(psi.clauses().len(), 80);
        // Only the all-zero assignment of the forced variables satisfies psi.
        let mut beta = vec![0 as Symbol; 4];
        let mut solutions = 0;
        loop {
            let mut a = vec![0; r.cnf.n_vars()];
            for (&v, &b) in r.forced.iter().zip(&beta) {
                a[v as usize] = b;
            }
            if psi.satisfies(&a) {
                solutions += 1;
                assert!(beta.iter().all(|&b| b == 0));
            }
            if !crate::satgadget::cnf::next_assignment(&mut beta, 3) {
                break;
            }
        }
        assert_eq!(solutions, 1);
    }

    #[test]
    fn equisatisfiable() {
        let b = Budget::default();
        for seed in 0..40 {
            let f = random_qcnf(4, 2 + seed as usize % 7, 2, 2, seed).unwrap();
            let r = regularize(&f, 4).unwrap();
            let src = brute_sat(&f, &b).unwrap();
            let dst = brute_sat(&r.cnf, &b).unwrap();
            assert_eq!(src.is_some(), dst.is_some(), "seed {seed}");
            if let Some(a) = src {
                assert!(r.cnf.satisfies(&r.lift(&a)));
            }
        }
    }

    #[test]
    fn parameter_checks() {
        let wide = vec![Literal::new(0, 0), Literal::new(1, 0), Literal::new(2, 0)];
        let f = QaryCnf::new(6, 2, vec![wide]).unwrap();
        assert!(regularize(&f, 4).is_err());
        assert!(regularize(&f, 6).is_ok());
        assert!(regularize(&f, 8).is_err());
    }
}
