//! q-ary CNF to continuous Remotest String.
//!
//! [`regularize`] pads a formula so every clause has width `2k` and touches
//! `k + 1` groups of size `s`; [`BalanceFamily`] relabels values so that
//! some member is satisfiable by an assignment using each value `s/q` times
//! per group; [`to_remotest`] builds the string instance; [`certify`] checks
//! the outcome against exhaustive search. [`run_pipeline`] chains all four.

mod balance;
mod certify;
mod cnf;
mod regularize;
mod remotest;

pub use balance::{balance, group_histogram, is_balanced, BalanceFamily};
pub use certify::{certify, CertifyReport, Verdict};
pub use cnf::{
    brute_sat, brute_sat_where, falsifies, next_assignment, parse_qcnf, random_qcnf, write_qcnf,
    Clause, Literal, QaryCnf,
};
pub use regularize::{regularize, RegularityWitness, Regularized};
pub use remotest::{check_structure, gadget_threshold, to_remotest, GadgetInstance};

use crate::budget::Budget;
use crate::error::Result;
use crate::par::Exec;
use crate::rng::SplitMix64;

/// Number of seeded family members certified for unsatisfiable formulas, in
/// addition to the first and last.
pub const UNSAT_SAMPLES: usize = 3;

#[derive(Debug, Clone)]
pub struct MemberReport {
    pub index: u128,
    pub strings: usize,
    pub emitted: u64,
    pub report: CertifyReport,
}

#[derive(Debug, Clone)]
pub struct PipelineReport {
    pub source_vars: usize,
    pub vars: usize,
    pub clauses: usize,
    pub width: usize,
    pub regularity: usize,
    pub family_size: Option<u128>,
    pub satisfiable: bool,
    pub members: Vec<MemberReport>,
}

impl PipelineReport {
    /// Every certified member passes; for satisfiable formulas the balancing
    /// member must also have produced a balanced witness.
    pub fn pass(&self) -> bool {
        !self.members.is_empty()
            && self.members.iter().all(|m| m.report.pass())
            && (!self.satisfiable
                || self
                    .members
                    .iter()
                    .any(|m| m.report.completeness == Verdict::Pass))
    }
}

/// Regularizes, picks family members, builds each gadget and certifies it.
///
/// For a satisfiable formula the member that balances the first satisfying
/// assignment is certified. For an unsatisfiable one every member is
/// unsatisfiable (hence balanced); the first, the last and
/// [`UNSAT_SAMPLES`] seeded members are certified.
pub fn run_pipeline(
    cnf: &QaryCnf,
    s: usize,
    seed: u64,
    budget: &Budget,
    exec: Exec,
) -> Result<PipelineReport> {
    let reg = regularize(cnf, s)?;
    let family = BalanceFamily::new(&reg.cnf)?;
    let t = family.size();
    let solution = brute_sat(&reg.cnf, budget)?;
    let mut indices = Vec::new();
    match &solution {
        Some(a) => indices.push(family.balancing_member(a)?),
        None => {
            let last = t.map_or(u128::MAX, |t| t - 1);
            indices.push(0);
            indices.push(last);
            let mut rng = SplitMix64::new(seed);
            for _ in 0..UNSAT_SAMPLES {
                let wide = (u128::from(rng.next_u64()) << 64) | u128::from(rng.next_u64());
                indices.push(wide % (last + 1));
            }
            indices.dedup();
        }
    }
    let mut members = Vec::with_capacity(indices.len());
    for index in indices {
        let member = family.member(index)?;
        let witness = RegularityWitness::measure(&member, reg.witness.width, reg.witness.groups)?;
        let gadget = to_remotest(&member, &witness, budget, exec)?;
        let report = certify(&member, &gadget, budget, exec)?;
        members.push(MemberReport {
            index,
            strings: gadget.set.n(),
            emitted: gadget.emitted,
            report,
        });
    }
    Ok(PipelineReport {
        source_vars: cnf.n_vars(),
        vars: reg.cnf.n_vars(),
        clauses: reg.cnf.clauses().len(),
        width: reg.witness.width,
        regularity: reg.witness.groups,
        family_size: t,
        satisfiable: solution.is_some(),
        members,
    })
}
