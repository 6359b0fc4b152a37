use std::path::PathBuf;

use clap::{Args, ValueEnum};
use hammctr::gen::{planted_instance, random_instance};
use hammctr::satgadget::{random_qcnf, write_qcnf};
use hammctr::{Error, Result};

use crate::record::Record;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    Random,
    Planted,
    /// Random q-ary CNF with clauses of the form `X_i != a`.
    Qcnf,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(value_enum)]
    pub kind: GenKind,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub sigma: u32,
    /// Perturbed positions per string (planted).
    #[arg(long)]
    pub rho: Option<usize>,
    /// Variables, clauses, alphabet and maximum width (qcnf).
    #[arg(long)]
    pub vars: Option<usize>,
    #[arg(long)]
    pub clauses: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn need(v: Option<usize>, name: &str) -> Result<usize> {
    v.ok_or_else(|| Error::InvalidParam(format!("--{name} is required for this kind")))
}

/// Generates the requested file contents.
pub fn generate(args: &GenArgs) -> Result<Vec<u8>> {
    Ok(match args.kind {
        GenKind::Random => random_instance(
            need(args.n, "n")?,
            need(args.d, "d")?,
            args.sigma,
            args.seed,
        )?
        .to_text()
        .into_bytes(),
        GenKind::Planted => planted_instance(
            need(args.n, "n")?,
            need(args.d, "d")?,
            args.sigma,
            need(args.rho, "rho")?,
            args.seed,
        )?
        .to_text()
        .into_bytes(),
        GenKind::Qcnf => write_qcnf(&random_qcnf(
            need(args.vars, "vars")?,
            need(args.clauses, "clauses")?,
            args.q,
            args.k,
            args.seed,
        )?),
    })
}

/// Writes the file, or returns its contents for standard output.
pub fn cmd_gen(args: &GenArgs) -> Result<(Vec<Record>, Option<Vec<u8>>)> {
    let bytes = generate(args)?;
    match &args.output {
        Some(path) => {
            std::fs::write(path, &bytes)?;
            let mut rec = Record::new();
            rec.push("kind", format!("{:?}", args.kind).to_lowercase())
                .push("seed", args.seed)
                .push("output", path.display().to_string())
                .push("bytes", bytes.len() as u64);
            Ok((vec![rec], None))
        }
        None => Ok((Vec::new(), Some(bytes))),
    }
}
