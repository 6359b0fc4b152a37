use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use hammctr::satgadget::{certify, run_pipeline, CertifyReport, GadgetInstance};
use hammctr::{Error, Result};

use crate::config::RunConfig;
use crate::record::{millis, Record};
use crate::reduce::{build_gadget, read_qcnf, GadgetMap, GADGET_DIRECTION};
use crate::solve::read_set;

#[derive(Debug, Clone, Args)]
pub struct CertifyArgs {
    /// Source q-ary CNF.
    #[arg(long, short)]
    pub input: PathBuf,
    /// Variable group size.
    #[arg(long, short = 's')]
    pub group_size: Option<usize>,
    /// Seed for the sampled members of an unsatisfiable formula.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Certify this sat2remotest target instead of running the pipeline.
    #[arg(long, requires = "map")]
    pub instance: Option<PathBuf>,
    /// Sidecar written next to `--instance`.
    #[arg(long)]
    pub map: Option<PathBuf>,
}

fn report_fields(rec: &mut Record, r: &CertifyReport) {
    rec.push("satisfiable", r.satisfiable)
        .push("threshold", r.threshold)
        .push("remotest_distance", r.remotest_distance)
        .push("witness_distance", r.witness_distance)
        .push("biconditional", r.biconditional.as_str())
        .push("completeness", r.completeness.as_str())
        .push("soundness", r.soundness.as_str());
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Returns the records and whether every check passed.
pub fn cmd_certify(args: &CertifyArgs, cfg: &RunConfig) -> Result<(Vec<Record>, bool)> {
    let cnf = read_qcnf(&args.input)?;
    let start = Instant::now();
    if let (Some(instance), Some(map_path)) = (&args.instance, &args.map) {
        let map: GadgetMap = serde_json::from_str(std::fs::read_to_string(map_path)?.trim())?;
        if map.direction != GADGET_DIRECTION {
            return Err(Error::Unsupported(format!(
                "map direction {:?} is not {GADGET_DIRECTION}",
                map.direction
            )));
        }
        let s = args.group_size.unwrap_or(map.group_size);
        let (formula, _, rebuilt) = build_gadget(&cnf, s, &map.member.to_string(), cfg)?;
        if rebuilt.formula_digest != map.formula_digest {
            return Err(Error::InvalidInstance(
                "map does not belong to this formula".into(),
            ));
        }
        let gadget = GadgetInstance {
            set: read_set(instance)?,
            threshold: map.threshold,
            emitted: map.emitted,
            formula_digest: map.formula_digest,
            group_size: map.group_size,
            regularity: map.regularity,
        };
        let report = certify(&formula, &gadget, &cfg.budget, cfg.exec)?;
        let mut rec = Record::new();
        rec.push("member", map.member.to_string())
            .push("strings", gadget.set.n() as u64);
        report_fields(&mut rec, &report);
        rec.push("certify", verdict(report.pass()))
            .push("wall_ms", millis(start.elapsed()));
        return Ok((vec![rec], report.pass()));
    }
    let s = args
        .group_size
        .ok_or_else(|| Error::InvalidParam("certify needs --group-size".into()))?;
    let pipeline = run_pipeline(&cnf, s, args.seed, &cfg.budget, cfg.exec)?;
    let mut out = Vec::new();
    for m in &pipeline.members {
        let mut rec = Record::new();
        rec.push("member", m.index.to_string())
            .push("strings", m.strings as u64)
            .push("emitted", m.emitted);
        report_fields(&mut rec, &m.report);
        rec.push("result", verdict(m.report.pass()));
        out.push(rec);
    }
    let mut summary = Record::new();
    summary
        .push("source_vars", pipeline.source_vars as u64)
        .push("vars", pipeline.vars as u64)
        .push("clauses", pipeline.clauses as u64)
        .push("width", pipeline.width as u64)
        .push("regularity", pipeline.regularity as u64)
        .push("family_size", pipeline.family_size.map(|t| t.to_string()))
        .push("members", pipeline.members.len() as u64)
        .push("satisfiable", pipeline.satisfiable)
        .push("certify", verdict(pipeline.pass()))
        .push("wall_ms", millis(start.elapsed()));
    out.push(summary);
    Ok((out, pipeline.pass()))
}
