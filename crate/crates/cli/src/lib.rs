//! Batch layer of the `svqnhe` command: experiment suites, report files and
//! the oracle/plan/Lie-algebra utilities exposed as subcommands.

pub mod commands;
pub mod report;
pub mod suite;

pub use report::{emit_reports, maxcut_table, r_table, read_trace_jsonl, write_csv, write_trace_jsonl, ReportFiles, CSV_HEADER};
pub use suite::{group_name, ExperimentSuite, RunGroup, SuiteResult};

/// A failed command, classified by the exit code it maps to.
#[derive(Debug)]
pub enum Failure {
    /// Bad invocation, unreadable or invalid configuration (exit 1).
    Config(anyhow::Error),
    /// A run failed after the configuration was accepted (exit 2).
    Runtime(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 1,
            Failure::Runtime(_) => 2,
        }
    }

    pub fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Config(e) | Failure::Runtime(e) => e,
        }
    }
}

/// Worker-pool size from `SVQNHE_THREADS`, if set.
pub fn threads_from_env() -> anyhow::Result<Option<usize>> {
    match std::env::var("SVQNHE_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => anyhow::bail!("SVQNHE_THREADS must be a positive integer, got `{v}`"),
        },
    }
}
