use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use svqnhe::driver::{run_maxcut, MaxCutConfig, RunConfig};
use svqnhe::pauli::{read_edge_list, ModelSpec};
use svqnhe_cli::commands::{self, Solver};
use svqnhe_cli::{emit_reports, maxcut_table, r_table, threads_from_env, ExperimentSuite, Failure};

#[derive(Parser, Debug)]
#[command(name = "svqnhe", version, about = "Sign-structure variational quantum-neural hybrid eigensolver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Execute an experiment suite and write its reports
    Run {
        config: PathBuf,
        /// Override the suite's output directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the oracle ground energy of a benchmark model
    Gs(GsArgs),
    /// Print the measurement plan and circuit counts of a run configuration
    Plan {
        config: Option<PathBuf>,
        /// Also print the MaxCut encoding capacity table m(n, k)
        #[arg(long)]
        capacity: bool,
        #[arg(long = "cap-n", value_delimiter = ',', default_values_t = [17usize, 30])]
        cap_n: Vec<usize>,
        #[arg(long = "cap-k", value_delimiter = ',', default_values_t = [2usize, 3])]
        cap_k: Vec<usize>,
    },
    /// Dynamical Lie algebra dimensions of the two generator families
    Dla {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
    /// Compare MaxCut solvers on one graph (edge-list file)
    Maxcut {
        graph: PathBuf,
        config: PathBuf,
        /// Write maxcut.json and maxcut.txt into this directory
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelKind {
    J1j2,
    Heisenberg2d,
    Tfim1d,
    Ising1d,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolverArg {
    Auto,
    Dense,
    Lanczos,
}

#[derive(clap::Args, Debug)]
struct GsArgs {
    #[arg(long)]
    model: ModelKind,
    /// Number of qubits (chains)
    #[arg(long)]
    n: Option<usize>,
    /// Coupling J (J1 for the J1-J2 chain)
    #[arg(long = "J", default_value_t = 1.0)]
    j: f64,
    #[arg(long = "J2", default_value_t = 0.0)]
    j2: f64,
    /// Longitudinal field (Heisenberg, Ising)
    #[arg(long, default_value_t = 0.0)]
    h: f64,
    /// Transverse field (TFIM)
    #[arg(long, default_value_t = 1.0)]
    g: f64,
    #[arg(long)]
    rows: Option<usize>,
    #[arg(long)]
    cols: Option<usize>,
    #[arg(long, value_enum, default_value = "auto")]
    solver: SolverArg,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(Failure::Config)
}

fn model_from(a: &GsArgs) -> anyhow::Result<ModelSpec> {
    let need_n = || a.n.ok_or_else(|| anyhow::anyhow!("--n is required for this model"));
    Ok(match a.model {
        ModelKind::J1j2 => ModelSpec::J1j2 { n: need_n()?, j1: a.j, j2: a.j2, delta1: 1.0, delta2: 1.0, b_h: a.h },
        ModelKind::Heisenberg2d => {
            let (rows, cols) = match (a.rows, a.cols, a.n) {
                (Some(r), Some(c), _) => (r, c),
                (None, None, Some(n)) => (1, n),
                _ => anyhow::bail!("give --rows and --cols (or --n for a chain)"),
            };
            ModelSpec::Heisenberg2d { rows, cols, h: a.h, j: a.j }
        }
        ModelKind::Tfim1d => ModelSpec::Tfim1d { n: need_n()?, j: a.j, g: a.g },
        ModelKind::Ising1d => ModelSpec::Ising1d { n: need_n()?, j: a.j, h: a.h },
    })
}

fn execute(command: Command) -> Result<(), Failure> {
    match command {
        Command::Run { config, out } => {
            let suite = ExperimentSuite::from_json(&read(&config)?).map_err(Failure::Config)?;
            let dir = out.unwrap_or_else(|| suite.output_dir.clone());
            let result = suite.run().map_err(Failure::Runtime)?;
            let files = emit_reports(&result, &dir).map_err(Failure::Runtime)?;
            print!("{}", r_table(&result));
            println!("wrote {} and {} trace files", files.csv.display(), files.traces.len());
        }
        Command::Gs(args) => {
            let model = model_from(&args).map_err(Failure::Config)?;
            let solver = match args.solver {
                SolverArg::Auto => Solver::Auto,
                SolverArg::Dense => Solver::Dense,
                SolverArg::Lanczos => Solver::Lanczos,
            };
            let e = commands::ground_energy(&model, solver).map_err(Failure::Config)?;
            println!("{e:?}");
        }
        Command::Plan { config, capacity, cap_n, cap_k } => {
            if config.is_none() && !capacity {
                return Err(Failure::Config(anyhow::anyhow!("give a configuration file and/or --capacity")));
            }
            if let Some(path) = config {
                let cfg = RunConfig::from_json(&read(&path)?)
                    .with_context(|| format!("invalid configuration {}", path.display()))
                    .map_err(Failure::Config)?;
                let summary = commands::plan_for(&cfg).map_err(Failure::Config)?;
                print!("{}", commands::render_plan(&summary));
            }
            if capacity {
                print!("{}", commands::capacity_table(&cap_n, &cap_k));
            }
        }
        Command::Dla { n, m } => {
            print!("{}", commands::dla_table(&n, m).map_err(Failure::Config)?);
        }
        Command::Maxcut { graph, config, out } => {
            let g = read_edge_list(&graph)
                .with_context(|| format!("cannot load graph {}", graph.display()))
                .map_err(Failure::Config)?;
            let cfg: MaxCutConfig = serde_json::from_str(&read(&config)?)
                .with_context(|| format!("malformed MaxCut configuration {}", config.display()))
                .map_err(Failure::Config)?;
            cfg.validate().map_err(|e| Failure::Config(e.into()))?;
            let report = run_maxcut(&g, &cfg).map_err(|e| Failure::Runtime(e.into()))?;
            let table = maxcut_table(&report);
            print!("{table}");
            if let Some(dir) = out {
                let write = || -> anyhow::Result<()> {
                    fs::create_dir_all(&dir)?;
                    fs::write(dir.join("maxcut.json"), serde_json::to_string_pretty(&report)?)?;
                    fs::write(dir.join("maxcut.txt"), &table)?;
                    Ok(())
                };
                write().with_context(|| format!("cannot write to {}", dir.display())).map_err(Failure::Runtime)?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let pool = threads_from_env().and_then(|t| match t {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(Into::into),
        None => Ok(()),
    });
    if let Err(e) = pool {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error());
            ExitCode::from(f.exit_code() as u8)
        }
    }
}
