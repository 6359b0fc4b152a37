//! A family of relabelled copies of a grouped formula, at least one of which
//! is balanced: satisfiable (if at all) by an assignment that uses every
//! value exactly `s/q` times in every group.
//!
//! Member indices are mixed-radix numbers. There is one digit per
//! `(group, stage)` pair, groups ascending and, within a group, stages
//! `l = 0..q-2` ascending, least significant first. Digit value
//! `a_idx (s+1) + j` means: exchange the values `l` and `a` on the first `j`
//! variables of the group, where `a` is the `a_idx`-th value other than `l`.
//! Swaps are applied digit by digit in that order. The family therefore has
//! `t = ((s+1)(q-1))^{(q-1) N/s}` members, which is only materialized under
//! the configured cap.

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::instance::Symbol;

use super::cnf::{Literal, QaryCnf};

#[derive(Debug, Clone)]
pub struct BalanceFamily {
    base: QaryCnf,
    s: usize,
    q: u32,
    groups: usize,
}

/// Counts of each value per group.
pub fn group_histogram(assignment: &[Symbol], s: usize, q: u32, group: usize) -> Vec<usize> {
    let mut h = vec![0; q as usize];
    for &v in &assignment[group * s..(group + 1) * s] {
        h[v as usize] += 1;
    }
    h
}

pub fn is_balanced(assignment: &[Symbol], s: usize, q: u32) -> bool {
    let per = s / q as usize;
    s % q as usize == 0
        && (0..assignment.len() / s).all(|g| {
            group_histogram(assignment, s, q, g)
                .iter()
                .all(|&c| c == per)
        })
}

impl BalanceFamily {
    pub fn new(cnf: &QaryCnf) -> Result<Self> {
        let s = cnf
            .group_size()
            .ok_or_else(|| Error::InvalidParam("balancing needs a group partition".into()))?;
        let q = cnf.q();
        if s % q as usize != 0 {
            return Err(Error::InvalidParam(format!(
                "balancing needs q | s, got q={q} s={s}"
            )));
        }
        Ok(BalanceFamily {
            base: cnf.clone(),
            s,
            q,
            groups: cnf.n_vars() / s,
        })
    }

    pub fn radix(&self) -> u64 {
        (self.s as u64 + 1) * (u64::from(self.q) - 1)
    }

    pub fn digits(&self) -> usize {
        (self.q as usize - 1) * self.groups
    }

    /// `t`, or `None` if it does not fit in 128 bits.
    pub fn size(&self) -> Option<u128> {
        let mut t: u128 = 1;
        for _ in 0..self.digits() {
            t = t.checked_mul(u128::from(self.radix()))?;
        }
        Some(t)
    }

    fn decode(&self, index: u128) -> Result<Vec<u64>> {
        let r = u128::from(self.radix());
        let mut rest = index;
        let mut digits = Vec::with_capacity(self.digits());
        for _ in 0..self.digits() {
            digits.push((rest % r) as u64);
            rest /= r;
        }
        if rest != 0 {
            return Err(Error::InvalidParam(format!(
                "member index {index} out of range"
            )));
        }
        Ok(digits)
    }

    fn encode(&self, digits: &[u64]) -> u128 {
        let r = u128::from(self.radix());
        digits
            .iter()
            .rev()
            .fold(0u128, |acc, &d| acc * r + u128::from(d))
    }

    /// The `a` for stage `l` and index `a_idx`: the values other than `l`,
    /// ascending.
    fn partner(&self, l: u32, a_idx: u64) -> u32 {
        let a = a_idx as u32;
        if a < l {
            a
        } else {
            a + 1
        }
    }

    fn partner_index(l: u32, a: u32) -> u64 {
        u64::from(if a < l { a } else { a - 1 })
    }

    /// Per-variable value permutations `perm[v][old] = new` of member `index`.
    pub fn relabelling(&self, index: u128) -> Result<Vec<Vec<Symbol>>> {
        let digits = self.decode(index)?;
        let q = self.q;
        let mut perm: Vec<Vec<Symbol>> = (0..self.base.n_vars())
            .map(|_| (0..q as Symbol).collect())
            .collect();
        let stages = q as usize - 1;
        for (pos, &digit) in digits.iter().enumerate() {
            let (group, l) = (pos / stages, (pos % stages) as u32);
            let per = self.s as u64 + 1;
            let a = self.partner(l, digit / per);
            let j = (digit % per) as usize;
            for row in &mut perm[group * self.s..group * self.s + j] {
                for x in row.iter_mut() {
                    if u32::from(*x) == l {
                        *x = a as Symbol;
                    } else if u32::from(*x) == a {
                        *x = l as Symbol;
                    }
                }
            }
        }
        Ok(perm)
    }

    /// Member `index`: every literal `X_v != b` becomes `X_v != perm_v(b)`.
    pub fn member(&self, index: u128) -> Result<QaryCnf> {
        let perm = self.relabelling(index)?;
        let clauses = self
            .base
            .clauses()
            .iter()
            .map(|c| {
                c.iter()
                    .map(|l| Literal::new(l.var, perm[l.var as usize][l.value as usize]))
                    .collect()
            })
            .collect();
        QaryCnf::new(self.base.n_vars(), self.q, clauses)?.with_groups(self.s)
    }

    /// Maps an assignment of the base formula to the corresponding
    /// assignment of member `index`.
    pub fn map_assignment(&self, index: u128, assignment: &[Symbol]) -> Result<Vec<Symbol>> {
        let perm = self.relabelling(index)?;
        Ok(assignment
            .iter()
            .enumerate()
            .map(|(v, &x)| perm[v][x as usize])
            .collect())
    }

    /// Index of a member in which the image of `assignment` is balanced.
    ///
    /// Stage `l` of a group: if value `l` is under-represented, pick a later
    /// value `a` with at least `s/q` occurrences (over-represented: at most
    /// `s/q`). Exchanging `l` and `a` on a growing prefix of the group moves
    /// the count of `l` by at most one per step and ends at the old count of
    /// `a`, so some prefix length `j` hits `s/q` exactly.
    pub fn balancing_member(&self, assignment: &[Symbol]) -> Result<u128> {
        if assignment.len() != self.base.n_vars() {
            return Err(Error::LengthMismatch {
                left: assignment.len(),
                right: self.base.n_vars(),
            });
        }
        let (s, q) = (self.s, self.q);
        let per = s / q as usize;
        let mut current = assignment.to_vec();
        let mut digits = Vec::with_capacity(self.digits());
        for group in 0..self.groups {
            let range = group * s..(group + 1) * s;
            for l in 0..q - 1 {
                let hist = group_histogram(&current, s, q, group);
                let c = hist[l as usize];
                if c == per {
                    digits.push(0);
                    continue;
                }
                let a = (l + 1..q)
                    .find(|&a| {
                        if c < per {
                            hist[a as usize] >= per
                        } else {
                            hist[a as usize] <= per
                        }
                    })
                    .expect("a partner value always exists");
                let mut count = c;
                let mut j = 0;
                while count != per {
                    let x = &mut current[range.start + j];
                    if u32::from(*x) == l {
                        *x = a as Symbol;
                        count -= 1;
                    } else if u32::from(*x) == a {
                        *x = l as Symbol;
                        count += 1;
                    }
                    j += 1;
                }
                digits.push(Self::partner_index(l, a) * (s as u64 + 1) + j as u64);
            }
        }
        let index = self.encode(&digits);
        debug_assert_eq!(self.map_assignment(index, assignment).unwrap(), current);
        Ok(index)
    }
}

/// All `t` members, in index order, when `t` is within the family cap.
pub fn balance(cnf: &QaryCnf, budget: &Budget) -> Result<Vec<QaryCnf>> {
    let family = BalanceFamily::new(cnf)?;
    let t = family.size();
    match t {
        Some(t) if t <= u128::from(budget.family_cap) => (0..t).map(|i| family.member(i)).collect(),
        _ => Err(Error::Budget(format!(
            "balancing family has t = {} members, over the cap of {}",
            t.map_or_else(|| "more than 2^128".to_string(), |t| t.to_string()),
            budget.family_cap
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::satgadget::cnf::{brute_sat, brute_sat_where, random_qcnf};

    #[test]
    fn size_examples() {
        let f = QaryCnf::new(2, 2, vec![vec![Literal::new(0, 0)]])
            .unwrap()
            .with_groups(2)
            .unwrap();
        let members = balance(&f, &Budget::default()).unwrap();
        assert_eq!(members.len(), 3);
        assert_eq!(members[0], f);
        // j = 1 swaps X1's values, j = 2 swaps both.
        assert_eq!(members[1].clauses(), &[vec![Literal::new(0, 1)]]);
        let g = QaryCnf::new(12, 3, vec![]).unwrap().with_groups(3).unwrap();
        assert_eq!(BalanceFamily::new(&g).unwrap().size(), Some(8u128.pow(8)));
        assert!(balance(&g, &Budget::default()).unwrap_err().is_budget());
    }

    #[test]
    fn satisfiable_formulas_get_a_balanced_member() {
        let b = Budget::default();
        for seed in 0..30 {
            let (q, gs) = if seed % 2 == 0 { (2, 2) } else { (3, 3) };
            let f = random_qcnf(6, 4, q, 2, seed)
                .unwrap()
                .with_groups(gs)
                .unwrap();
            let family = BalanceFamily::new(&f).unwrap();
            let Some(a) = brute_sat(&f, &b).unwrap() else {
                continue;
            };
            let idx = family.balancing_member(&a).unwrap();
            let member = family.member(idx).unwrap();
            let mapped = family.map_assignment(idx, &a).unwrap();
            assert!(is_balanced(&mapped, gs, q));
            assert!(member.satisfies(&mapped));
            let found = brute_sat_where(&member, &b, |x| is_balanced(x, gs, q)).unwrap();
            assert!(found.is_some(), "seed {seed}");
        }
    }

    #[test]
    fn members_are_equisatisfiable() {
        let b = Budget::default();
        for seed in 0..10 {
            let f = random_qcnf(4, 6, 2, 2, 100 + seed)
                .unwrap()
                .with_groups(2)
                .unwrap();
            let sat = brute_sat(&f, &b).unwrap().is_some();
            for m in balance(&f, &b).unwrap() {
                assert_eq!(brute_sat(&m, &b).unwrap().is_some(), sat);
            }
        }
    }

    #[test]
    fn divisibility() {
        let f = QaryCnf::new(4, 3, vec![]).unwrap().with_groups(2).unwrap();
        assert!(BalanceFamily::new(&f).is_err());
    }
}
