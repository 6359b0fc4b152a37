//! Helpers for the acceptance suite in `tests/acceptance.rs`.

use std::time::Duration;

/// Outcome of one criterion: a short summary on success, the reason on failure.
pub type Outcome = Result<String, String>;

pub fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, || {
        format!("took {elapsed:.2?}, limit {limit:?}")
    })
}

/// Runs the CLI in-process and returns standard output, failing on a
/// non-zero exit.
pub fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    use clap::Parser;
    let argv = std::iter::once("hammctr").chain(args.iter().copied());
    let cli = hammctr_cli::Cli::try_parse_from(argv).map_err(|e| e.to_string())?;
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = hammctr_cli::run(cli, &mut out, &mut err);
    check(code == 0, || {
        format!("{args:?} exited {code}: {}", String::from_utf8_lossy(&err))
    })?;
    Ok(out)
}
