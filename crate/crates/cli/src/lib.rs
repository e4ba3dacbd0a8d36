//! Command-line front end for `entroflow`.
//!
//! Exit status: 0 when every check passes, 1 on a violated inequality or
//! second-law failure, 2 on usage or configuration errors.

pub mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use entroflow_core::audit::{invariant_audit, lemma_audit, AuditReport};
use entroflow_core::dynamics::{run_cycle_experiment, verify_second_law, CycleConfig, Trajectory};
use entroflow_core::io::{format_float, trials_csv, trials_json};
use entroflow_core::Error;
use rayon::prelude::*;

pub use config::{parse_config, ConfigError, Format, RunConfig};

/// Tolerance applied to the recorded entropy sequence.
pub const SECOND_LAW_TOL: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(name = "entroflow", version, about = "Entropy growth under repeated partial measurement")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Randomized audit of the classical inequalities.
    Lemmas {
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        samples: u64,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(2..))]
        max_size: u64,
        #[arg(long, env = "ENTROFLOW_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Run the measurement-cycle experiment described by a config file.
    Cycle {
        config: PathBuf,
    },
    /// Randomized audit of the quantum invariants.
    Check {
        #[arg(long, default_value_t = 16, value_parser = clap::value_parser!(u64).range(4..))]
        max_dim: u64,
        #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long, env = "ENTROFLOW_SEED", default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Violation,
    Usage,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(match s {
            Status::Pass => 0,
            Status::Violation => 1,
            Status::Usage => 2,
        })
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| format!("cannot write to stdout: {e}")),
    }
}

fn render_report(report: &AuditReport, format: Format) -> String {
    match format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json(),
    }
}

fn finish_report(report: &AuditReport, format: Format, out: Option<&Path>) -> Status {
    if let Err(e) = emit(out, &render_report(report, format)) {
        eprintln!("error: {e}");
        return Status::Usage;
    }
    let mut status = Status::Pass;
    for c in report.failures() {
        status = Status::Violation;
        let seed = c.first_failure.map_or(String::from("?"), |f| f.seed.to_string());
        eprintln!(
            "violation: {} worst {} ({} of {} samples), first failing seed {seed}",
            c.name,
            format_float(c.worst),
            c.violations,
            c.samples
        );
    }
    status
}

fn usage_error(e: impl std::fmt::Display) -> Status {
    eprintln!("error: {e}");
    Status::Usage
}

fn audit_status(result: entroflow_core::Result<AuditReport>, format: Format, out: Option<&Path>) -> Status {
    match result {
        Ok(report) => finish_report(&report, format, out),
        Err(e @ Error::InvalidParameter { .. }) => usage_error(e),
        Err(e) => {
            eprintln!("error: {e}");
            Status::Violation
        }
    }
}

pub fn cmd_lemmas(samples: usize, max_size: usize, seed: u64, format: Format, out: Option<&Path>) -> Status {
    audit_status(lemma_audit(samples, max_size, seed), format, out)
}

pub fn cmd_check(max_dim: usize, trials: usize, seed: u64, format: Format, out: Option<&Path>) -> Status {
    audit_status(invariant_audit(max_dim, trials, seed), format, out)
}

/// Runs every trial of `cfg`, ordered by trial index.
pub fn run_trials(cfg: &RunConfig) -> entroflow_core::Result<Vec<Trajectory>> {
    cfg.trial_seeds()
        .into_par_iter()
        .map(|seed| {
            let cycle = CycleConfig { seed, ..cfg.cycle.clone() };
            run_cycle_experiment(&cycle)
        })
        .collect()
}

pub fn render_trials(trials: &[Trajectory], format: Format) -> String {
    match format {
        Format::Csv => trials_csv(trials),
        Format::Json => trials_json(trials),
    }
}

/// `format` and `out` override the values in the config file.
pub fn cmd_cycle(path: &Path, format: Option<Format>, out: Option<&Path>, default_seed: u64) -> Status {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => return usage_error(format!("cannot read {}: {e}", path.display())),
    };
    let cfg = match parse_config(&text, default_seed) {
        Ok(c) => c,
        Err(e) => return usage_error(format!("{}: {e}", path.display())),
    };
    let trials = match run_trials(&cfg) {
        Ok(t) => t,
        Err(e) => return usage_error(e),
    };
    let format = format.unwrap_or(cfg.format);
    let out = out.or(cfg.output.as_deref());
    if let Err(e) = emit(out, &render_trials(&trials, format)) {
        return usage_error(e);
    }

    let mut status = Status::Pass;
    for (k, traj) in trials.iter().enumerate() {
        match verify_second_law(traj, SECOND_LAW_TOL) {
            Ok(report) if report.passed => {}
            Ok(report) => {
                status = Status::Violation;
                eprintln!(
                    "second-law violation in trial {k}: entropy increment {} at event {}",
                    format_float(report.worst_increment),
                    report.worst_index
                );
            }
            Err(e) => return usage_error(e),
        }
    }
    status
}

fn env_seed() -> Result<u64, String> {
    match std::env::var("ENTROFLOW_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|e| format!("ENTROFLOW_SEED `{v}` is not a valid seed: {e}")),
        Err(_) => Ok(0),
    }
}

pub fn run(cli: Cli) -> Status {
    let format = cli.format;
    let out = cli.out.as_deref();
    match cli.command {
        Command::Lemmas { samples, max_size, seed } => cmd_lemmas(
            samples as usize,
            max_size as usize,
            seed,
            format.unwrap_or_default(),
            out,
        ),
        Command::Check { max_dim, trials, seed } => {
            cmd_check(max_dim as usize, trials as usize, seed, format.unwrap_or_default(), out)
        }
        Command::Cycle { config } => match env_seed() {
            Ok(seed) => cmd_cycle(&config, format, out, seed),
            Err(e) => usage_error(e),
        },
    }
}
