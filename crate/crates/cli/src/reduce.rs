use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, ValueEnum};
use hammctr::naive::brute_continuous_remotest;
use hammctr::reductions::{
    closest_to_remotest, complement_continuous, remotest_to_closest, ReductionMap,
};
use hammctr::satgadget::{
    brute_sat, parse_qcnf, regularize, to_remotest, BalanceFamily, GadgetInstance, QaryCnf,
    RegularityWitness,
};
use hammctr::{write_instance, Error, Mode, Result};
use serde::{Deserialize, Serialize};

use crate::config::{Algo, RunConfig};
use crate::record::{millis, Record};
use crate::solve::{read_set, resolve, run_solver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReduceKind {
    C2r,
    R2c,
    Sat2remotest,
    Complement,
}

#[derive(Debug, Clone, Args)]
pub struct ReduceArgs {
    #[arg(value_enum)]
    pub direction: ReduceKind,
    /// Source instance (a q-ary CNF for sat2remotest).
    #[arg(long, short)]
    pub input: PathBuf,
    /// Target instance file.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Sidecar map; defaults to the output path with `.map.jsonl` appended.
    #[arg(long)]
    pub map: Option<PathBuf>,
    /// Also solve the target and report the source answer.
    #[arg(long)]
    pub solve_through: bool,
    /// Solver used on the target by `--solve-through`.
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    pub algo: Algo,
    /// Variable group size for sat2remotest.
    #[arg(long, short = 's')]
    pub group_size: Option<usize>,
    /// Balancing family member for sat2remotest: "auto" balances the first
    /// satisfying assignment (member 0 if there is none).
    #[arg(long, default_value = "auto")]
    pub member: String,
}

/// Sidecar header for sat2remotest targets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetMap {
    pub direction: String,
    pub q: u32,
    pub source_vars: usize,
    pub vars: usize,
    pub group_size: usize,
    pub width: usize,
    pub regularity: usize,
    pub member: u128,
    pub threshold: u32,
    pub formula_digest: u64,
    pub strings: usize,
    pub emitted: u64,
}

pub const GADGET_DIRECTION: &str = "sat-to-remotest";

fn map_path(args: &ReduceArgs) -> PathBuf {
    args.map.clone().unwrap_or_else(|| {
        let mut p = args.output.clone().into_os_string();
        p.push(".map.jsonl");
        p.into()
    })
}

pub fn read_qcnf(path: &Path) -> Result<QaryCnf> {
    parse_qcnf(&std::fs::read(path)?)
}

/// Regularized member formula and its gadget.
pub fn build_gadget(
    cnf: &QaryCnf,
    s: usize,
    member: &str,
    cfg: &RunConfig,
) -> Result<(QaryCnf, GadgetInstance, GadgetMap)> {
    let reg = regularize(cnf, s)?;
    let family = BalanceFamily::new(&reg.cnf)?;
    let index = if member == "auto" {
        match brute_sat(&reg.cnf, &cfg.budget)? {
            Some(a) => family.balancing_member(&a)?,
            None => 0,
        }
    } else {
        member.parse::<u128>().map_err(|_| {
            Error::InvalidParam(format!(
                "member must be \"auto\" or an index, got {member:?}"
            ))
        })?
    };
    let formula = family.member(index)?;
    let witness = RegularityWitness::measure(&formula, reg.witness.width, reg.witness.groups)?;
    let gadget = to_remotest(&formula, &witness, &cfg.budget, cfg.exec)?;
    let map = GadgetMap {
        direction: GADGET_DIRECTION.into(),
        q: cnf.q(),
        source_vars: cnf.n_vars(),
        vars: formula.n_vars(),
        group_size: s,
        width: witness.width,
        regularity: witness.groups,
        member: index,
        threshold: gadget.threshold,
        formula_digest: gadget.formula_digest,
        strings: gadget.set.n(),
        emitted: gadget.emitted,
    };
    Ok((formula, gadget, map))
}

pub fn cmd_reduce(args: &ReduceArgs, cfg: &RunConfig) -> Result<Vec<Record>> {
    let map_file = map_path(args);
    let mut rec = Record::new();
    rec.push("direction", format!("{:?}", args.direction).to_lowercase());
    if args.direction == ReduceKind::Sat2remotest {
        let s = args
            .group_size
            .ok_or_else(|| Error::InvalidParam("sat2remotest needs --group-size".into()))?;
        let cnf = read_qcnf(&args.input)?;
        let (_, gadget, map) = build_gadget(&cnf, s, &args.member, cfg)?;
        std::fs::write(&args.output, write_instance(&gadget.set))?;
        std::fs::write(&map_file, serde_json::to_string(&map)? + "\n")?;
        rec.push("source_vars", map.source_vars as u64)
            .push("vars", map.vars as u64)
            .push("member", map.member.to_string())
            .push("target_n", gadget.set.n() as u64)
            .push("target_d", gadget.set.d() as u64)
            .push("threshold", map.threshold)
            .push("emitted", map.emitted);
        if args.solve_through {
            let start = Instant::now();
            let r = brute_continuous_remotest(&gadget.set, &cfg.budget, cfg.exec)?;
            rec.push("algorithm", r.algorithm)
                .push("target_objective", r.objective)
                .push("satisfiable", r.objective > map.threshold)
                .push("wall_ms", millis(start.elapsed()));
        }
        rec.push("target", args.output.display().to_string())
            .push("map", map_file.display().to_string());
        return Ok(vec![rec]);
    }

    let source = read_set(&args.input)?;
    let (target, map, source_mode, target_mode) = match args.direction {
        ReduceKind::C2r => {
            let (t, m) = closest_to_remotest(&source)?;
            (t, m, Mode::DiscreteClosest, Mode::DiscreteRemotest)
        }
        ReduceKind::R2c => {
            let (t, m) = remotest_to_closest(&source)?;
            (t, m, Mode::DiscreteRemotest, Mode::DiscreteClosest)
        }
        ReduceKind::Complement => {
            let (t, m) = complement_continuous(&source)?;
            (t, m, Mode::ContinuousClosest, Mode::ContinuousRemotest)
        }
        ReduceKind::Sat2remotest => unreachable!(),
    };
    std::fs::write(&args.output, write_instance(&target))?;
    std::fs::write(&map_file, map.to_jsonl()?)?;
    let h = &map.header;
    rec.push("source_n", h.source_n as u64)
        .push("source_d", h.source_d as u64)
        .push("target_n", h.target_n as u64)
        .push("target_d", h.target_d as u64)
        .push("r", h.r as u64)
        .push("code_length", h.code_length as u64)
        .push("offset", h.offset);
    if args.solve_through {
        let algo = resolve(args.algo, target_mode, &target, cfg)?;
        let start = Instant::now();
        let r = run_solver(algo, target_mode, &target, cfg)?;
        let source_objective = map.apply_transform(u64::from(r.objective))?;
        rec.push("algorithm", r.algorithm)
            .push("source_mode", source_mode.as_str())
            .push("target_objective", r.objective)
            .push("source_objective", source_objective);
        if let Some(t) = r.center_index {
            let (s, role) = map.source_index(t)?;
            rec.push("target_index", t as u64)
                .push("source_index", s as u64)
                .push("role", format!("{role:?}").to_lowercase());
        }
        rec.push("wall_ms", millis(start.elapsed()));
    }
    rec.push("target", args.output.display().to_string())
        .push("map", map_file.display().to_string());
    Ok(vec![rec])
}

pub fn read_map(path: &Path) -> Result<ReductionMap> {
    ReductionMap::from_jsonl(&std::fs::read_to_string(path)?)
}
