//! Config-driven experiment runs with deterministic JSON reports.
//!
//! A run reads a config, executes one command, and returns a [`Report`]
//! that echoes the effective config and lists one entry per instance. The
//! payload carries no timestamps or host data, so equal configs give
//! byte-identical reports. With `verify_only` the input is a previously
//! written report, and every recorded claim is re-checked without searching.

mod commands;
pub mod config;

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sets::DEFAULT_MAX_POINTS;

pub use commands::{
    cmd_blocks, cmd_chain, cmd_preimage, cmd_solve, cmd_witness, BlocksInstance, ChainInstance,
    PreimageInstance, SolveEntry, SolveInstance, WitnessInstance,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Blocks,
    Solve,
    Witness,
    Preimage,
    Chain,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Command::Blocks => "blocks",
            Command::Solve => "solve",
            Command::Witness => "witness",
            Command::Preimage => "preimage",
            Command::Chain => "chain",
        };
        f.write_str(name)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Verified,
    Exhausted,
    Failed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub instances: usize,
    pub verified: usize,
    pub exhausted: usize,
    pub failed: usize,
}

impl Summary {
    pub fn from_statuses(statuses: impl IntoIterator<Item = Status>) -> Self {
        let mut s = Summary::default();
        for st in statuses {
            s.instances += 1;
            match st {
                Status::Verified => s.verified += 1,
                Status::Exhausted => s.exhausted += 1,
                Status::Failed => s.failed += 1,
            }
        }
        s
    }

    /// 0 when everything verified, 1 when some budget ran dry, 2 when any
    /// instance failed.
    pub fn exit_code(&self) -> i32 {
        if self.failed > 0 {
            2
        } else if self.exhausted > 0 {
            1
        } else {
            0
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: Command,
    #[serde(default)]
    pub verify_only: bool,
    pub config: serde_json::Value,
    pub summary: Summary,
    pub instances: Vec<serde_json::Value>,
}

impl Report {
    pub(crate) fn new<C: Serialize, I: Serialize>(
        command: Command,
        config: &C,
        statuses: impl IntoIterator<Item = Status>,
        instances: &[I],
    ) -> Result<Self> {
        Ok(Report {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command,
            verify_only: false,
            config: serde_json::to_value(config)?,
            summary: Summary::from_statuses(statuses),
            instances: instances
                .iter()
                .map(serde_json::to_value)
                .collect::<std::result::Result<_, _>>()?,
        })
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn human_summary(&self) -> String {
        let s = &self.summary;
        format!(
            "{}{}: {} instance(s), {} verified, {} exhausted, {} failed",
            self.command,
            if self.verify_only { " (verify-only)" } else { "" },
            s.instances,
            s.verified,
            s.exhausted,
            s.failed
        )
    }

    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub verify_only: bool,
    pub seed_override: Option<u64>,
    pub max_points: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { verify_only: false, seed_override: None, max_points: DEFAULT_MAX_POINTS }
    }
}

/// Runs `command` on the config text (or, with `verify_only`, on the text
/// of an earlier report).
pub fn run_text(command: Command, text: &str, opts: &RunOptions) -> Result<Report> {
    if opts.verify_only {
        let report: Report = config::parse_config(text)?;
        if report.command != command {
            return Err(Error::config(
                "command",
                format!("report was written by `{}`, not `{command}`", report.command),
            ));
        }
        return commands::verify_report(&report, opts);
    }
    match command {
        Command::Blocks => cmd_blocks(&with_seed(config::parse_config(text)?, opts), opts),
        Command::Solve => cmd_solve(&with_seed(config::parse_config(text)?, opts), opts),
        Command::Witness => cmd_witness(&with_seed(config::parse_config(text)?, opts), opts),
        Command::Preimage => cmd_preimage(&with_seed(config::parse_config(text)?, opts), opts),
        Command::Chain => cmd_chain(&with_seed(config::parse_config(text)?, opts), opts),
    }
}

pub fn run_file(command: Command, path: &Path, opts: &RunOptions) -> Result<Report> {
    let text = std::fs::read_to_string(path)?;
    run_text(command, &text, opts)
}

fn with_seed<C: config::Reseed>(mut cfg: C, opts: &RunOptions) -> C {
    if let Some(seed) = opts.seed_override {
        cfg.reseed(seed);
    }
    cfg
}

/// Exit code for a run that did not produce a report.
pub fn error_exit_code(err: &Error) -> i32 {
    match err {
        Error::BudgetExceeded(_) | Error::Exhausted(_) | Error::OracleExhausted(_) => 1,
        _ => 2,
    }
}
