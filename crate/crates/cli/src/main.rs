//! `taubnut`: verification campaigns for Taub-NUT Killing fields and the
//! Randers metrics they generate by Zermelo navigation.

mod commands;
mod config;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use config::{Cli, ConfigError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let run = match cli.command.resolve() {
        Ok(run) => run,
        Err(e) => return config_failure(&e),
    };
    let mut report = match commands::execute(&run) {
        Ok(r) => r,
        Err(e) => return config_failure(&e),
    };
    report.duration_ms = start.elapsed().as_millis() as u64;
    let body = report.to_json();
    match &run.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                return config_failure(&ConfigError(format!("cannot write {path}: {e}")));
            }
        }
        None => print!("{body}"),
    }
    if report.any_failed() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn config_failure(e: &ConfigError) -> ExitCode {
    eprintln!("error: {}", e.0);
    ExitCode::from(1)
}
