//! Command-line harness for the `dgo` optimizer and its baselines.
//!
//! Verbs: `run`, `bench`, `list-objectives`, `list-optimizers`. Flags override
//! values read from a `--config` TOML file (schema in [`config`]).

pub mod config;
pub mod exec;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use dgo::objectives;

use config::{optimizer_names, ExperimentConfig, Optimizer};
use exec::{BenchPlan, Failed};

#[derive(Debug, Parser)]
#[command(name = "dgo", version, about = "Gray-code segment-inversion global optimizer")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one optimizer on one objective and write result and trace files.
    Run(RunArgs),
    /// Run a benchmark suite over several optimizers and write a results table.
    Bench(BenchArgs),
    /// List the registered objectives.
    ListObjectives,
    /// List the available optimizers.
    ListOptimizers,
}

/// Settings shared by `run` and `bench`.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML experiment config; flags take precedence over its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Independent repetitions; repetition i uses seed + i.
    #[arg(long)]
    pub repetitions: Option<u64>,
    /// Dimension of synthetic_highdim.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Independent DGO starts per repetition.
    #[arg(long)]
    pub starts: Option<usize>,
    #[arg(long)]
    pub initial_bits: Option<u32>,
    #[arg(long)]
    pub max_bits: Option<u32>,
    /// DGO step cap per start.
    #[arg(long)]
    pub max_iterations: Option<u64>,
    /// DGO objective-call budget per start.
    #[arg(long)]
    pub max_evaluations: Option<u64>,
    /// Append zero bits instead of random bits when refining.
    #[arg(long)]
    pub deterministic_refine: bool,
    /// Evaluate DGO children on all cores.
    #[arg(long)]
    pub parallel: bool,
    /// Objective-call budget of the baselines.
    #[arg(long)]
    pub budget: Option<u64>,
    /// Leave the wall-time column empty, making outputs byte-reproducible.
    #[arg(long)]
    pub no_timing: bool,
    /// Append to existing output files instead of replacing them.
    #[arg(long)]
    pub append: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub objective: Option<String>,
    /// dgo, monte_carlo, gradient_descent, genetic or annealing.
    #[arg(long)]
    pub optimizer: Option<String>,
    /// Directory for output files (default: current directory).
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Result CSV path; the JSON record is written next to it.
    #[arg(long)]
    pub result: Option<PathBuf>,
    /// Trace CSV path.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// 1d, 2d, nn, highdim or all.
    pub suite: String,
    /// Comma-separated optimizers (default: all).
    #[arg(long, value_delimiter = ',')]
    pub optimizers: Option<Vec<String>>,
    /// Output table path (default: bench_<suite>.csv).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// Applies flags on top of a config (file contents or defaults).
pub fn apply_common(cfg: &mut ExperimentConfig, c: &CommonArgs) {
    if let Some(v) = c.seed {
        cfg.seed = v;
    }
    if let Some(v) = c.repetitions {
        cfg.repetitions = v;
    }
    if c.dim.is_some() {
        cfg.dim = c.dim;
    }
    if let Some(v) = c.starts {
        cfg.dgo.starts = v;
    }
    if let Some(v) = c.initial_bits {
        cfg.dgo.initial_bits = v;
    }
    if let Some(v) = c.max_bits {
        cfg.dgo.max_bits = v;
    }
    if let Some(v) = c.max_iterations {
        cfg.dgo.max_iterations = v;
    }
    if c.max_evaluations.is_some() {
        cfg.dgo.max_evaluations = c.max_evaluations;
    }
    cfg.dgo.deterministic_refine |= c.deterministic_refine;
    cfg.dgo.parallel |= c.parallel;
    if c.budget.is_some() {
        cfg.baseline.budget = c.budget;
    }
    if c.no_timing {
        cfg.timing = false;
    }
    cfg.output.append |= c.append;
}

fn load(c: &CommonArgs) -> Result<Option<ExperimentConfig>> {
    c.config.as_deref().map(ExperimentConfig::load).transpose()
}

/// Builds the experiment for `run` from the config file and flags.
pub fn run_config(args: &RunArgs) -> Result<ExperimentConfig> {
    let mut cfg = load(&args.common)?.unwrap_or_default();
    if args.objective.is_some() {
        cfg.objective = args.objective.clone();
    }
    if let Some(o) = &args.optimizer {
        cfg.optimizer = o.clone();
    }
    if args.out_dir.is_some() {
        cfg.output.dir = args.out_dir.clone();
    }
    if args.result.is_some() {
        cfg.output.result = args.result.clone();
    }
    if args.trace.is_some() {
        cfg.output.trace = args.trace.clone();
    }
    apply_common(&mut cfg, &args.common);
    Ok(cfg)
}

/// Builds the plan for `bench`.
///
/// Without a config file, DGO uses five starts with deterministic refinement.
/// Unless set explicitly, each DGO start gets the baseline evaluation budget.
pub fn bench_plan(args: &BenchArgs) -> Result<BenchPlan> {
    let mut cfg = match load(&args.common)? {
        Some(c) => c,
        None => {
            let mut c = ExperimentConfig::default();
            c.dgo.starts = 5;
            c.dgo.deterministic_refine = true;
            c
        }
    };
    apply_common(&mut cfg, &args.common);
    if cfg.dgo.max_evaluations.is_none() {
        cfg.dgo.max_evaluations = Some(cfg.baseline.budget.unwrap_or(config::DEFAULT_BUDGET));
    }
    let optimizers = match &args.optimizers {
        Some(names) => names
            .iter()
            .map(|n| Optimizer::parse(n.trim()))
            .collect::<Result<Vec<_>>>()?,
        None => optimizer_names()
            .into_iter()
            .map(Optimizer::parse)
            .collect::<Result<Vec<_>>>()?,
    };
    let out = match &args.out {
        Some(p) => p.clone(),
        None => cfg
            .output
            .dir
            .clone()
            .unwrap_or_default()
            .join(format!("bench_{}.csv", args.suite)),
    };
    Ok(BenchPlan {
        suite: args.suite.clone(),
        optimizers,
        seed: cfg.seed,
        repetitions: cfg.repetitions,
        dim: cfg.dim,
        dgo: cfg.dgo,
        baseline: cfg.baseline,
        timing: cfg.timing,
        out,
        append: cfg.output.append,
    })
}

fn report_failures(failed: &[Failed]) {
    for f in failed {
        eprintln!(
            "failed: objective {} optimizer {} seed {}: {}",
            f.objective, f.optimizer, f.seed, f.error
        );
    }
}

fn list_objectives() {
    println!("{:<18} {:>4}  {:<22} description", "name", "dim", "box");
    for obj in objectives::registry::<f64>() {
        let b = obj.bounds();
        let (lo, hi) = b[0];
        let uniform = b.iter().all(|&v| v == (lo, hi));
        let bx = if uniform {
            format!("[{lo}, {hi}]^{}", b.len())
        } else {
            b.iter().map(|(l, h)| format!("[{l}, {h}]")).collect::<Vec<_>>().join("x")
        };
        println!("{:<18} {:>4}  {:<22} {}", obj.name(), obj.dimension(), bx, obj.description());
    }
}

fn list_optimizers() {
    for name in optimizer_names() {
        println!("{name}");
    }
}

/// Executes a parsed command line. Errors are returned for invalid input;
/// failed runs are reported on stderr and turn into a nonzero exit code.
pub fn execute(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::ListObjectives => list_objectives(),
        Command::ListOptimizers => list_optimizers(),
        Command::Run(args) => {
            let cfg = run_config(&args)?;
            let summary = exec::run(&cfg)?;
            report_failures(&summary.failed);
            for c in &summary.completed {
                println!(
                    "seed {}: best value {} at {:?}, {} evaluations, {}",
                    c.record.seed,
                    c.record.best_value,
                    c.record.best_point,
                    c.record.evaluations,
                    c.record.termination
                );
            }
            if !summary.completed.is_empty() {
                println!(
                    "wrote {}, {}, {}",
                    summary.result_path.display(),
                    summary.trace_path.display(),
                    summary.json_path.display()
                );
            }
            if !summary.failed.is_empty() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Bench(args) => {
            let plan = bench_plan(&args)?;
            let summary = exec::bench(&plan)?;
            report_failures(&summary.failed);
            println!(
                "{} rows written to {} and {}",
                summary.rows,
                summary.table_path.display(),
                summary.json_path.display()
            );
            if !summary.failed.is_empty() {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
