//! Report files: an aggregate CSV, one JSONL trace per run, and plain-text
//! tables of the relative metrics.
//!
//! Everything written here is a pure function of the traces (wall-clock times
//! only appear inside the JSONL iteration lines), so rerunning a suite with the
//! same configurations reproduces the CSV and tables byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use serde::{Deserialize, Serialize};
use svqnhe::driver::{compute_metrics, IterationRecord, MaxCutReport, MetricsReport, RunTrace};

use crate::suite::SuiteResult;

pub const CSV_HEADER: [&str; 12] = [
    "run_id",
    "method",
    "model",
    "seed",
    "mode",
    "final_energy",
    "E0",
    "rel_error",
    "shots_total",
    "circuits_per_iter",
    "cv_layer1",
    "cv_layer2",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// `(final_energy − E0)/|E0|`.
pub fn rel_error(trace: &RunTrace) -> Option<f64> {
    trace.e0.map(|e0| (trace.final_energy - e0) / e0.abs())
}

fn csv_row(t: &RunTrace) -> Vec<String> {
    let cv = |i: usize| t.layer_cv.get(i).copied().flatten();
    vec![
        t.run_id.clone(),
        t.method.clone(),
        t.model.clone(),
        t.seed.to_string(),
        t.mode.label().to_string(),
        t.final_energy.to_string(),
        opt(t.e0),
        opt(rel_error(t)),
        t.shots_total.to_string(),
        t.circuits_per_iter.to_string(),
        opt(cv(0)),
        opt(cv(1)),
    ]
}

pub fn write_csv<'a>(traces: impl IntoIterator<Item = &'a RunTrace>, path: &Path) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    w.write_record(CSV_HEADER)?;
    for t in traces {
        w.write_record(csv_row(t))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum TraceLine {
    /// Run-level fields; `records` is left empty and streamed afterwards.
    Run(Box<RunTrace>),
    Iteration(IterationRecord),
}

/// One header line followed by one line per iteration.
pub fn write_trace_jsonl(trace: &RunTrace, path: &Path) -> anyhow::Result<()> {
    let file = fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))?;
    let mut w = BufWriter::new(file);
    let header = RunTrace { records: Vec::new(), ..trace.clone() };
    serde_json::to_writer(&mut w, &TraceLine::Run(Box::new(header)))?;
    writeln!(w)?;
    for r in &trace.records {
        serde_json::to_writer(&mut w, &TraceLine::Iteration(r.clone()))?;
        writeln!(w)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trace_jsonl(path: &Path) -> anyhow::Result<RunTrace> {
    let file = fs::File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut trace: Option<RunTrace> = None;
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: TraceLine =
            serde_json::from_str(&line).with_context(|| format!("{}:{}: malformed trace line", path.display(), i + 1))?;
        match (parsed, trace.as_mut()) {
            (TraceLine::Run(t), None) => trace = Some(*t),
            (TraceLine::Iteration(r), Some(t)) => t.records.push(r),
            (TraceLine::Run(_), Some(_)) => return Err(anyhow!("{}: second run header", path.display())),
            (TraceLine::Iteration(_), None) => return Err(anyhow!("{}: iteration before run header", path.display())),
        }
    }
    trace.ok_or_else(|| anyhow!("{}: empty trace file", path.display()))
}

fn cell(v: Option<f64>, prec: usize) -> String {
    match v {
        Some(x) => format!("{x:.prec$e}"),
        None => "-".into(),
    }
}

/// Metrics of one group relative to the suite baseline, when the baseline is
/// set and targets the same model.
pub fn group_metrics(result: &SuiteResult, name: &str) -> anyhow::Result<MetricsReport> {
    let group = result.group(name).ok_or_else(|| anyhow!("no run group `{name}`"))?;
    let baseline = result
        .baseline
        .as_deref()
        .and_then(|b| result.group(b))
        .filter(|b| b.config.model == group.config.model)
        .map(|b| b.traces.as_slice());
    Ok(compute_metrics(&group.traces, baseline, group.config.target_fraction)?)
}

/// Plain-text table with one row per run group.
pub fn r_table(result: &SuiteResult) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# suite: {}", result.name);
    let _ = writeln!(out, "# baseline: {}", result.baseline.as_deref().unwrap_or("-"));
    let _ = writeln!(
        out,
        "{:<28} {:<12} {:<16} {:>4} {:>11} {:>11} {:>9} {:>9} {:>8} {:>8} {:>9}",
        "group", "method", "model", "runs", "MAE", "Var", "R_MAE", "R_Var", "success", "med_step", "circ/iter"
    );
    for g in &result.groups {
        let circuits = g.traces.first().map(|t| t.circuits_per_iter.to_string()).unwrap_or_default();
        match group_metrics(result, &g.name) {
            Ok(m) => {
                let _ = writeln!(
                    out,
                    "{:<28} {:<12} {:<16} {:>4} {:>11} {:>11} {:>9} {:>9} {:>8.2} {:>8} {:>9}",
                    g.name,
                    g.config.method.label(),
                    g.config.model.label(),
                    m.n_runs,
                    cell(Some(m.mae), 3),
                    cell(m.var, 3),
                    m.r_mae.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into()),
                    m.r_var.map(|x| format!("{x:.4}")).unwrap_or_else(|| "-".into()),
                    m.success_probability,
                    m.median_steps.map(|x| format!("{x:.1}")).unwrap_or_else(|| "-".into()),
                    circuits,
                );
            }
            Err(e) => {
                let _ = writeln!(out, "{:<28} {:<12} {:<16} metrics unavailable: {e}", g.name, g.config.method.label(), g.config.model.label());
            }
        }
    }
    out
}

/// Paths written by [`emit_reports`].
#[derive(Debug, Clone)]
pub struct ReportFiles {
    pub csv: PathBuf,
    pub table: PathBuf,
    pub traces: Vec<PathBuf>,
}

/// Writes `summary.csv`, `r_table.txt` and `traces/<run_id>.jsonl` under `dir`.
pub fn emit_reports(result: &SuiteResult, dir: &Path) -> anyhow::Result<ReportFiles> {
    let trace_dir = dir.join("traces");
    fs::create_dir_all(&trace_dir).with_context(|| format!("cannot create output directory {}", trace_dir.display()))?;
    let mut traces = Vec::new();
    for t in result.traces() {
        let path = trace_dir.join(format!("{}.jsonl", t.run_id));
        write_trace_jsonl(t, &path)?;
        traces.push(path);
    }
    let csv = dir.join("summary.csv");
    write_csv(result.traces(), &csv)?;
    let table = dir.join("r_table.txt");
    fs::write(&table, r_table(result)).with_context(|| format!("cannot write {}", table.display()))?;
    Ok(ReportFiles { csv, table, traces })
}

/// Plain-text MaxCut comparison: cut value, R_e and circuits per iteration.
pub fn maxcut_table(report: &MaxCutReport) -> String {
    let mut out = String::new();
    let optimum = report.optimum.map(|o| o.to_string()).unwrap_or_else(|| "-".into());
    let _ = writeln!(
        out,
        "# vertices: {}  edges: {}  best cut: {}  optimum: {}",
        report.n_vertices, report.n_edges, report.best_cut, optimum
    );
    let _ = writeln!(out, "{:<14} {:>8} {:>8} {:>10} {:>10}", "method", "cut", "R_e", "R_e(opt)", "circ/iter");
    for o in &report.outcomes {
        let _ = writeln!(
            out,
            "{:<14} {:>8} {:>8.4} {:>10} {:>10}",
            o.method.label(),
            o.cut_value,
            o.r_e,
            o.r_e_optimum.map(|r| format!("{r:.4}")).unwrap_or_else(|| "-".into()),
            o.circuits_per_iter
        );
    }
    out
}
