//! Experiment suites: a named batch of run configurations that share an output
//! directory and, optionally, a baseline group for the relative metrics.

use std::collections::HashSet;
use std::path::PathBuf;

use anyhow::{bail, Context};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use svqnhe::driver::{run_seeds, RunConfig, RunTrace, SCHEMA_VERSION};

fn default_schema() -> String {
    SCHEMA_VERSION.to_string()
}

fn default_output() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSuite {
    #[serde(default = "default_schema")]
    pub schema: String,
    pub name: String,
    #[serde(default)]
    pub runs: Vec<RunConfig>,
    /// Group name (see [`group_name`]) of the runs used as the R-metric baseline.
    #[serde(default)]
    pub baseline: Option<String>,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
}

/// Name of the group formed by all seeds of one configuration: its `id`, or
/// `<method>_<model>` when no id is given.
pub fn group_name(config: &RunConfig) -> String {
    config.id.clone().unwrap_or_else(|| format!("{}_{}", config.method.label(), config.model.label()))
}

/// All seeds of one configuration, in seed order.
#[derive(Debug, Clone)]
pub struct RunGroup {
    pub name: String,
    pub config: RunConfig,
    pub traces: Vec<RunTrace>,
}

#[derive(Debug, Clone)]
pub struct SuiteResult {
    pub name: String,
    pub baseline: Option<String>,
    pub groups: Vec<RunGroup>,
}

impl SuiteResult {
    pub fn group(&self, name: &str) -> Option<&RunGroup> {
        self.groups.iter().find(|g| g.name == name)
    }

    pub fn traces(&self) -> impl Iterator<Item = &RunTrace> {
        self.groups.iter().flat_map(|g| g.traces.iter())
    }
}

impl ExperimentSuite {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let suite: Self = serde_json::from_str(text).context("malformed suite JSON")?;
        suite.validate()?;
        Ok(suite)
    }

    /// Schema, per-run validity, unique group and run ids, and a baseline that
    /// names an existing group.
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.schema != SCHEMA_VERSION {
            bail!("unsupported suite schema `{}` (expected `{SCHEMA_VERSION}`)", self.schema);
        }
        let mut groups = HashSet::new();
        let mut run_ids = HashSet::new();
        for cfg in &self.runs {
            let name = group_name(cfg);
            cfg.validate().with_context(|| format!("run `{name}`"))?;
            if !groups.insert(name.clone()) {
                bail!("duplicate run group `{name}`; give the configurations distinct ids");
            }
            for &seed in &cfg.seeds {
                let id = cfg.run_id(seed);
                if !run_ids.insert(id.clone()) {
                    bail!("duplicate run id `{id}`");
                }
            }
        }
        if let Some(b) = &self.baseline {
            if !groups.contains(b) {
                bail!("baseline `{b}` does not name a run group");
            }
        }
        Ok(())
    }

    /// Executes every configuration (groups and seeds in parallel); results
    /// keep the configuration order and seed order.
    pub fn run(&self) -> anyhow::Result<SuiteResult> {
        let groups = self
            .runs
            .par_iter()
            .map(|cfg| {
                let name = group_name(cfg);
                let traces = run_seeds(cfg).with_context(|| format!("run group `{name}` failed"))?;
                Ok(RunGroup { name, config: cfg.clone(), traces })
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        Ok(SuiteResult { name: self.name.clone(), baseline: self.baseline.clone(), groups })
    }
}
