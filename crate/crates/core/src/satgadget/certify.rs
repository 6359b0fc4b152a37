use std::fmt::Write as _;

use crate::budget::Budget;
use crate::error::Result;
use crate::hamming::hamming_unchecked;
use crate::instance::Symbol;
use crate::naive::brute_continuous_remotest;
use crate::par::Exec;

use super::balance::is_balanced;
use super::cnf::{brute_sat, brute_sat_where, QaryCnf};
use super::remotest::GadgetInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::NotApplicable => "N/A",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertifyReport {
    pub satisfiable: bool,
    pub assignment: Option<Vec<Symbol>>,
    pub balanced_assignment: Option<Vec<Symbol>>,
    /// Distance of the balanced assignment to the instance.
    pub witness_distance: Option<u32>,
    pub remotest_distance: u32,
    pub remotest_center: Vec<Symbol>,
    pub threshold: u32,
    /// Satisfiable iff the remotest distance exceeds the threshold.
    pub biconditional: Verdict,
    /// A balanced satisfying assignment is farther than the threshold.
    pub completeness: Verdict,
    /// Unsatisfiable formulas leave every candidate within the threshold.
    pub soundness: Verdict,
}

impl CertifyReport {
    pub fn pass(&self) -> bool {
        [self.biconditional, self.completeness, self.soundness]
            .iter()
            .all(|v| *v != Verdict::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "satisfiable={}", self.satisfiable).unwrap();
        writeln!(out, "threshold={}", self.threshold).unwrap();
        writeln!(out, "remotest_distance={}", self.remotest_distance).unwrap();
        if let Some(d) = self.witness_distance {
            writeln!(out, "balanced_witness_distance={d}").unwrap();
        }
        writeln!(out, "biconditional {}", self.biconditional.as_str()).unwrap();
        writeln!(out, "completeness {}", self.completeness.as_str()).unwrap();
        writeln!(out, "soundness {}", self.soundness.as_str()).unwrap();
        writeln!(out, "certify {}", if self.pass() { "PASS" } else { "FAIL" }).unwrap();
        out
    }
}

/// Decides `cnf` and the gadget instance by exhaustive search and checks
/// that they agree on the threshold.
pub fn certify(
    cnf: &QaryCnf,
    instance: &GadgetInstance,
    budget: &Budget,
    exec: Exec,
) -> Result<CertifyReport> {
    let assignment = brute_sat(cnf, budget)?;
    let satisfiable = assignment.is_some();
    let remote = brute_continuous_remotest(&instance.set, budget, exec)?;
    let threshold = instance.threshold;
    let (balanced_assignment, witness_distance) = match (&assignment, cnf.group_size()) {
        (Some(_), Some(s)) => {
            let found = brute_sat_where(cnf, budget, |a| is_balanced(a, s, cnf.q()))?;
            let dist = found.as_ref().map(|a| {
                instance
                    .set
                    .rows()
                    .map(|row| hamming_unchecked(a, row))
                    .min()
                    .unwrap()
            });
            (found, dist)
        }
        _ => (None, None),
    };
    let biconditional = Verdict::from_bool(satisfiable == (remote.objective > threshold));
    let completeness = match witness_distance {
        Some(d) => Verdict::from_bool(d > threshold),
        None => Verdict::NotApplicable,
    };
    let soundness = if satisfiable {
        Verdict::NotApplicable
    } else {
        Verdict::from_bool(remote.objective <= threshold)
    };
    Ok(CertifyReport {
        satisfiable,
        assignment,
        balanced_assignment,
        witness_distance,
        remotest_distance: remote.objective,
        remotest_center: remote.center,
        threshold,
        biconditional,
        completeness,
        soundness,
    })
}
