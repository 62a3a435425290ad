//! Command-line front end: `body`, `global`, `weights` and `verify`.
//!
//! Every command prints (or writes to `--out`) one JSON document whose
//! `report` field lists the checked invariants as
//! `{case, invariant, status, details}`. Exit codes: 0 ok, 2 invalid input,
//! 3 computational instability, 4 verification failure.

pub mod commands;
pub mod config;
pub mod report;
pub mod verify;

use std::io::Write;

pub use config::{Cli, Command, Flags, JobConfig};
pub use report::{Check, CliError, Output, Status};

pub fn execute(command: Command, cfg: &JobConfig) -> Result<Output, CliError> {
    match command {
        Command::Body => commands::cmd_body(cfg),
        Command::Global => commands::cmd_global(cfg),
        Command::Weights => commands::cmd_weights(cfg),
        Command::Verify => verify::cmd_verify(cfg),
    }
}

/// Runs a parsed command line and returns the exit code. Output goes to
/// `--out` when given, otherwise to stdout; errors go to stderr.
pub fn run(cli: &Cli) -> u8 {
    let result = JobConfig::from_flags(&cli.flags).and_then(|cfg| {
        let out = execute(cli.command, &cfg)?;
        let text = out.render();
        match &cfg.out {
            Some(path) => std::fs::write(path, &text)
                .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .map_err(|e| CliError::invalid(format!("cannot write output: {e}")))?;
            }
        }
        for c in out.checks.iter().filter(|c| c.status != Status::Pass) {
            eprintln!("{:?}: {} [{}] {}", c.status, c.case, c.invariant, c.details);
        }
        Ok(out.exit_code())
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
