//! Command-line front end: `segment`, `denoise`, `simulate` and `eval`.
//!
//! Every command writes into one output directory together with a
//! `manifest.json` describing the run. Exit codes: 0 success, 2 input or
//! configuration error, 3 abandoned recording, 4 numerical failure.

pub mod args;
pub mod commands;
pub mod error;
pub mod manifest;

use std::path::PathBuf;

pub use args::{Cli, Command, OUT_ROOT_ENV};
pub use error::{CliError, CliResult};

/// `--out` if given, else `$CEOAE_OUT/<command>`.
pub fn resolve_out_dir(command: &Command) -> CliResult<PathBuf> {
    if let Some(out) = command.out() {
        return Ok(out.clone());
    }
    match std::env::var_os(OUT_ROOT_ENV) {
        Some(root) if !root.is_empty() => Ok(PathBuf::from(root).join(command.name())),
        _ => Err(CliError::Input(format!(
            "no output directory: pass --out or set {OUT_ROOT_ENV}"
        ))),
    }
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let out = resolve_out_dir(&cli.command)?;
    match &cli.command {
        Command::Segment(a) => {
            let o = commands::cmd_segment(a, &out)?;
            println!(
                "kept {} of {} units; wrote {} x {} matrix to {}",
                o.summary.kept,
                o.summary.total,
                o.p,
                o.n,
                out.display()
            );
        }
        Command::Denoise(a) => {
            let r = commands::cmd_denoise(a, &out)?;
            println!(
                "{}: effective rank {}; wrote {}",
                r.method,
                r.effective_rank,
                out.display()
            );
        }
        Command::Simulate(a) => {
            let t = commands::cmd_simulate(a, &out)?;
            print!("{}", t.to_csv());
            if !t.failures.is_empty() {
                eprintln!("{} realizations failed; see table.json", t.failures.len());
            }
        }
        Command::Eval(a) => {
            let r = commands::cmd_eval(a, &out)?;
            match r.enhancement_db {
                Some(e) => println!("snr {:.3} dB, enhancement {:.3} dB", r.snr_db, e),
                None => println!("snr {:.3} dB", r.snr_db),
            }
        }
    }
    Ok(())
}
