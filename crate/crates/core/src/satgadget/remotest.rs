//! From a regular grouped formula to a continuous Remotest String instance
//! over the alphabet `[q]` in dimension `N`.
//!
//! For each clause `C` the instance holds every assignment that falsifies
//! `C` and is constant on each group `C` does not touch. A balanced
//! satisfying assignment differs from every such string in at least one
//! touched position and in `(q-1)s/q` positions of each untouched group, so
//! it is farther than `(q-1)(N - rs)/q` from the whole instance; if the
//! formula is unsatisfiable, every candidate is within that distance of the
//! string built from a clause it falsifies.

use crate::budget::{checked_pow, Budget};
use crate::error::{Error, Result};
use crate::instance::{StringSet, Symbol};
use crate::par::{self, Exec};

use super::cnf::{falsifies, Literal, QaryCnf};
use super::regularize::RegularityWitness;

#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub set: StringSet,
    /// `(q-1)(N - rs)/q`.
    pub threshold: u32,
    /// Strings emitted before deduplication.
    pub emitted: u64,
    pub formula_digest: u64,
    pub group_size: usize,
    pub regularity: usize,
}

/// `(q-1)(N - rs)/q`, failing unless it is an integer.
pub fn gadget_threshold(n_vars: usize, q: u32, r: usize, s: usize) -> Result<u32> {
    let outside = n_vars
        .checked_sub(r * s)
        .ok_or_else(|| Error::InvalidParam(format!("r*s = {} exceeds N = {n_vars}", r * s)))?;
    let num = (q as usize - 1) * outside;
    if num % q as usize != 0 {
        return Err(Error::InvalidParam(format!(
            "threshold (q-1)(N-rs)/q = {num}/{q} is not an integer"
        )));
    }
    Ok((num / q as usize) as u32)
}

/// Strings contributed by one clause, before deduplication:
/// `q^{rs - |vars(C)|} q^{N/s - r}`, or 0 when `C` cannot be falsified.
fn clause_count(cnf: &QaryCnf, clause: &[Literal], r: usize, s: usize) -> Option<u64> {
    if !falsifiable(clause) {
        return Some(0);
    }
    let mut vars: Vec<u32> = clause.iter().map(|l| l.var).collect();
    vars.dedup();
    let q = u64::from(cnf.q());
    let free = checked_pow(q, r * s - vars.len())?;
    let blocks = checked_pow(q, cnf.n_vars() / s - r)?;
    free.checked_mul(blocks)
}

/// A clause with two different forbidden values for one variable is true
/// under every assignment.
fn falsifiable(clause: &[Literal]) -> bool {
    clause
        .windows(2)
        .all(|w| w[0].var != w[1].var || w[0].value == w[1].value)
}

pub fn to_remotest(
    cnf: &QaryCnf,
    witness: &RegularityWitness,
    budget: &Budget,
    exec: Exec,
) -> Result<GadgetInstance> {
    witness.validate(cnf)?;
    let (q, s, r, n) = (cnf.q(), witness.group_size, witness.groups, cnf.n_vars());
    let threshold = gadget_threshold(n, q, r, s)?;
    let mut projected: u64 = 0;
    for c in cnf.clauses() {
        projected = clause_count(cnf, c, r, s)
            .and_then(|k| projected.checked_add(k))
            .unwrap_or(u64::MAX);
    }
    if projected > budget.gadget_strings_cap {
        return Err(Error::Budget(format!(
            "gadget instance would have {projected} strings, over the cap of {}",
            budget.gadget_strings_cap
        )));
    }
    let per_clause = par::map_range(exec, cnf.clauses().len(), |i| {
        emit(cnf, &cnf.clauses()[i], s)
    });
    let emitted: u64 = per_clause.iter().map(|v| v.len() as u64).sum();
    debug_assert_eq!(emitted, projected);
    let mut rows: Vec<Vec<Symbol>> = per_clause.into_iter().flatten().collect();
    rows.sort_unstable();
    rows.dedup();
    if rows.is_empty() {
        return Err(Error::InvalidParam(
            "no clause can be falsified; the instance is empty".into(),
        ));
    }
    Ok(GadgetInstance {
        set: StringSet::from_rows(&rows, q)?,
        threshold,
        emitted,
        formula_digest: cnf.digest(),
        group_size: s,
        regularity: r,
    })
}

/// Every assignment falsifying `clause` and constant on untouched groups.
fn emit(cnf: &QaryCnf, clause: &[Literal], s: usize) -> Vec<Vec<Symbol>> {
    if !falsifiable(clause) {
        return Vec::new();
    }
    let q = cnf.q() as Symbol;
    let n = cnf.n_vars();
    let touched = cnf.groups_of(clause);
    let mut base = vec![0 as Symbol; n];
    for l in clause {
        base[l.var as usize] = l.value;
    }
    // Free coordinates: unconstrained variables of touched groups, then one
    // coordinate per untouched group.
    let fixed: Vec<bool> = {
        let mut f = vec![false; n];
        for l in clause {
            f[l.var as usize] = true;
        }
        f
    };
    let free_vars: Vec<usize> = touched
        .iter()
        .flat_map(|&g| g * s..(g + 1) * s)
        .filter(|&v| !fixed[v])
        .collect();
    let blocks: Vec<usize> = (0..n / s)
        .filter(|g| touched.binary_search(g).is_err())
        .collect();
    let slots = free_vars.len() + blocks.len();
    let mut digits = vec![0 as Symbol; slots];
    let mut out = Vec::new();
    loop {
        let mut row = base.clone();
        for (i, &v) in free_vars.iter().enumerate() {
            row[v] = digits[i];
        }
        for (i, &g) in blocks.iter().enumerate() {
            row[g * s..(g + 1) * s].fill(digits[free_vars.len() + i]);
        }
        debug_assert!(falsifies(&row, clause));
        out.push(row);
        if !super::cnf::next_assignment(&mut digits, u32::from(q)) {
            break;
        }
    }
    out
}

/// Checks that every string falsifies some clause and is constant on every
/// group that clause does not touch. Returns the offending row indices.
pub fn check_structure(cnf: &QaryCnf, instance: &GadgetInstance) -> Vec<usize> {
    let s = instance.group_size;
    instance
        .set
        .rows()
        .enumerate()
        .filter(|(_, row)| {
            !cnf.clauses().iter().any(|c| {
                falsifies(row, c) && {
                    let touched = cnf.groups_of(c);
                    (0..cnf.n_vars() / s)
                        .filter(|g| touched.binary_search(g).is_err())
                        .all(|g| row[g * s..(g + 1) * s].iter().all(|&x| x == row[g * s]))
                }
            })
        })
        .map(|(i, _)| i)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::satgadget::regularize::regularize;

    #[test]
    fn threshold_values() {
        assert_eq!(gadget_threshold(12, 2, 2, 2).unwrap(), 4);
        assert_eq!(gadget_threshold(12, 3, 2, 3).unwrap(), 4);
        assert!(gadget_threshold(5, 2, 1, 2).is_err());
        assert!(gadget_threshold(4, 2, 3, 2).is_err());
    }

    #[test]
    fn structure_and_counts() {
        let f = QaryCnf::new(
            4,
            2,
            vec![
                vec![Literal::new(0, 1)],
                vec![Literal::new(1, 0), Literal::new(3, 1)],
            ],
        )
        .unwrap();
        let reg = regularize(&f, 4).unwrap();
        let g = to_remotest(&reg.cnf, &reg.witness, &Budget::default(), Exec::Sequential).unwrap();
        assert!(check_structure(&reg.cnf, &g).is_empty());
        let (r, s, n) = (reg.witness.groups, 4, reg.cnf.n_vars());
        let bound = reg.cnf.clauses().len() as u64
            * 2u64.pow((r * s) as u32)
            * 2u64.pow((n / s - r) as u32);
        assert!(g.emitted <= bound);
        assert!(g.set.n() as u64 <= g.emitted);
        assert_eq!(g.threshold, gadget_threshold(n, 2, r, s).unwrap());
    }

    #[test]
    fn tautological_clause_emits_nothing() {
        assert!(!falsifiable(&[Literal::new(0, 0), Literal::new(0, 1)]));
        assert!(falsifiable(&[Literal::new(0, 0), Literal::new(1, 1)]));
    }
}
