//! Command-line front end: scenario files in, reports and CSV out.
//!
//! ```
//! use mcost_cli::{execute, Command};
//!
//! let out = execute(&Command::DumpTables, &Default::default());
//! assert_eq!(out.code, 0);
//! assert!(out.stdout.starts_with("group,cluster,peak"));
//! ```

pub mod config;
pub mod report;
pub mod selftest;
pub mod sweep;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use mcost_core::classify::table_csv;
use mcost_core::Tolerances;
use thiserror::Error;

pub use config::{Format, ScenarioConfig, SweepBlock};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 1,
            CliError::Verification(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mcost", version, about = "Long- and short-run marginal costs of a two-period capacity model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Solve one scenario and report prices, cost recovery and the cross-check.
    Run { config: PathBuf },
    /// Evaluate a one- or two-parameter grid and emit one row per point.
    Sweep { config: PathBuf },
    /// Cross-check seeded random scenarios.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
    },
    /// Print the embedded group table as CSV.
    DumpTables,
}

/// Tolerances with `LRMC_TOL_*` overrides applied.
pub fn tolerances_from_env() -> Result<Tolerances, CliError> {
    tolerances_from(|k| std::env::var(k).ok())
}

pub fn tolerances_from(lookup: impl Fn(&str) -> Option<String>) -> Result<Tolerances, CliError> {
    let mut t = Tolerances::default();
    let knobs: [(&str, &mut f64); 7] = [
        ("LRMC_TOL_FEAS", &mut t.feas),
        ("LRMC_TOL_GAP", &mut t.gap),
        ("LRMC_TOL_DEG", &mut t.deg),
        ("LRMC_TOL_BOUND", &mut t.bound),
        ("LRMC_TOL_CS", &mut t.cs),
        ("LRMC_TOL_MONEY", &mut t.money),
        ("LRMC_TOL_PRICE", &mut t.price),
    ];
    for (key, slot) in knobs {
        if let Some(raw) = lookup(key) {
            let v: f64 = raw
                .trim()
                .parse()
                .map_err(|_| CliError::Validation(format!("{key}={raw} is not a number")))?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(CliError::Validation(format!("{key}={raw} must be finite and nonnegative")));
            }
            *slot = v;
        }
    }
    Ok(t)
}

pub(crate) fn csv_string<I>(header: &[&str], rows: I) -> Result<String, CliError>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

/// Result of one command: exit code, text for stdout and stderr.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn failed(e: &CliError) -> Self {
        Self {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Writes `body` to the configured path, or returns it for stdout.
fn deliver(body: String, config: &ScenarioConfig) -> Result<String, CliError> {
    match &config.output {
        Some(path) => {
            std::fs::write(path, body)
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
        None => Ok(body),
    }
}

fn run(config: &ScenarioConfig, tol: &Tolerances) -> Result<Outcome, CliError> {
    config.validate()?;
    let r = report::evaluate(&config.params(), tol)?;
    let body = match config.format {
        Format::Text => report::render_text(&r),
        Format::Csv => report::render_csv(&r)?,
        Format::Json => report::render_json(&r)?,
    };
    let stdout = deliver(body, config)?;
    let (code, stderr) = if r.verdict.pass {
        (0, String::new())
    } else {
        (2, format!("cross-check failed: {}\n", r.verdict.disagreements.join("; ")))
    };
    Ok(Outcome { code, stdout, stderr })
}

fn sweep(config: &ScenarioConfig, tol: &Tolerances) -> Result<Outcome, CliError> {
    let rows = sweep::run_sweep(config, tol)?;
    let body = match config.format {
        Format::Text => sweep::render_text(config, &rows),
        Format::Csv => sweep::render_csv(config, &rows)?,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rows).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    Ok(Outcome {
        stdout: deliver(body, config)?,
        ..Default::default()
    })
}

pub fn execute(command: &Command, tol: &Tolerances) -> Outcome {
    let result = match command {
        Command::Run { config } => ScenarioConfig::load(config).and_then(|c| run(&c, tol)),
        Command::Sweep { config } => ScenarioConfig::load(config).and_then(|c| sweep(&c, tol)),
        Command::Selftest { seed, n } => selftest::run_selftest(*seed, *n, tol).map(|s| Outcome {
            code: if s.pass() { 0 } else { 2 },
            stdout: s.render(),
            stderr: String::new(),
        }),
        Command::DumpTables => Ok(Outcome {
            stdout: table_csv(),
            ..Default::default()
        }),
    };
    result.unwrap_or_else(|e| Outcome::failed(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn env_overrides() {
        let t = tolerances_from(|k| (k == "LRMC_TOL_GAP").then(|| "1e-6".to_string())).unwrap();
        assert_eq!(t.gap, 1e-6);
        assert_eq!(t.feas, Tolerances::default().feas);
        let bad = tolerances_from(|k| (k == "LRMC_TOL_CS").then(|| "tiny".to_string()));
        assert!(matches!(bad, Err(CliError::Validation(_))));
        let neg = tolerances_from(|k| (k == "LRMC_TOL_FEAS").then(|| "-1".to_string()));
        assert!(neg.is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Validation(String::new()).exit_code(), 1);
        assert_eq!(CliError::Verification(String::new()).exit_code(), 2);
    }

    #[test]
    fn csv_quotes_when_needed() {
        let s = csv_string(&["a", "b"], vec![vec!["1".into(), "x,y".into()]]).unwrap();
        assert_eq!(s, "a,b\n1,\"x,y\"\n");
    }
}
