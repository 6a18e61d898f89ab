//! Running experiments and benchmark suites and writing their outputs.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use dgo::report::{self, ResultRecord, BENCH_HEADER, RESULT_HEADER, TRACE_HEADER};
use dgo::{baselines, multi_start, DgoConfig, Objective, RunResult};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{resolve_objective, BaselineOptions, ExperimentConfig, Optimizer};

/// One finished run: the best-of-starts result plus every start's trace.
pub struct Completed {
    pub record: ResultRecord<f64>,
    pub trace: Vec<String>,
}

/// A run that returned an error instead of a result.
pub struct Failed {
    pub objective: String,
    pub optimizer: String,
    pub seed: u64,
    pub error: String,
}

fn execute(
    objective: &Objective<f64>,
    optimizer: Optimizer,
    dgo_cfg: &DgoConfig,
    baseline: &BaselineOptions,
    seed: u64,
    timing: bool,
) -> Result<Completed> {
    let name = objective.name();
    let started = Instant::now();
    let (best, traces): (RunResult<f64>, Vec<String>) = match optimizer {
        Optimizer::Dgo => {
            let cfg = DgoConfig { seed, ..dgo_cfg.clone() };
            let m = multi_start(objective, objective.bounds(), &cfg, None)?;
            let traces = m
                .runs
                .iter()
                .enumerate()
                .flat_map(|(i, r)| report::trace_rows(name, "dgo", seed, i, r))
                .collect();
            (m.best().clone(), traces)
        }
        Optimizer::Baseline(method) => {
            let cfg = baseline.build(method, seed);
            let r = baselines::run(objective, objective.bounds(), &cfg)?;
            let traces = report::trace_rows(name, method.name(), seed, 0, &r);
            (r, traces)
        }
    };
    let elapsed = timing.then(|| started.elapsed());
    let record = ResultRecord::new(
        name,
        optimizer.name(),
        seed,
        &best,
        objective.known_optimum(),
        elapsed,
    );
    Ok(Completed { record, trace: traces })
}

/// Summary returned to the caller of [`run`].
pub struct RunSummary {
    pub completed: Vec<Completed>,
    pub failed: Vec<Failed>,
    pub result_path: PathBuf,
    pub trace_path: PathBuf,
    pub json_path: PathBuf,
}

fn json_path_for(csv: &Path) -> PathBuf {
    csv.with_extension("json")
}

fn ensure_parent(path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonDocument<'a, T: Serialize> {
    schema: &'static str,
    columns: Vec<&'static str>,
    records: &'a [T],
}

fn json_document<T: Serialize>(schema: &'static str, header: &'static str, records: &[T]) -> String {
    report::to_json(&JsonDocument {
        schema,
        columns: header.split(',').collect(),
        records,
    })
}

/// Executes every repetition of `cfg` and writes result, trace and JSON files.
///
/// Validation happens before any objective evaluation, and nothing is written
/// unless at least one repetition completes.
pub fn run(cfg: &ExperimentConfig) -> Result<RunSummary> {
    let (objective, optimizer) = cfg.validate()?;
    let seeds: Vec<u64> = (0..cfg.repetitions).map(|i| cfg.seed.wrapping_add(i)).collect();
    let outcomes: Vec<(u64, Result<Completed>)> = seeds
        .iter()
        .map(|&s| (s, execute(&objective, optimizer, &cfg.dgo, &cfg.baseline, s, cfg.timing)))
        .collect();

    let mut completed = Vec::new();
    let mut failed = Vec::new();
    for (seed, outcome) in outcomes {
        match outcome {
            Ok(c) => completed.push(c),
            Err(e) => failed.push(Failed {
                objective: objective.name().to_string(),
                optimizer: optimizer.name().to_string(),
                seed,
                error: format!("{e:#}"),
            }),
        }
    }

    let result_path = cfg.result_path(objective.name());
    let trace_path = cfg.trace_path(objective.name());
    let json_path = json_path_for(&result_path);
    if completed.is_empty() {
        return Ok(RunSummary { completed, failed, result_path, trace_path, json_path });
    }
    ensure_parent(&result_path)?;
    ensure_parent(&trace_path)?;
    let rows: Vec<String> = completed.iter().map(|c| c.record.csv_row()).collect();
    let trace: Vec<String> = completed.iter().flat_map(|c| c.trace.iter().cloned()).collect();
    let append = cfg.output.append;
    report::write_csv(&result_path, RESULT_HEADER, &rows, append)
        .with_context(|| format!("writing {}", result_path.display()))?;
    report::write_csv(&trace_path, TRACE_HEADER, &trace, append)
        .with_context(|| format!("writing {}", trace_path.display()))?;
    let records: Vec<&ResultRecord<f64>> = completed.iter().map(|c| &c.record).collect();
    std::fs::write(&json_path, json_document("dgo.result.v1", RESULT_HEADER, &records))
        .with_context(|| format!("writing {}", json_path.display()))?;
    Ok(RunSummary { completed, failed, result_path, trace_path, json_path })
}

pub const SUITES: [&str; 5] = ["1d", "2d", "nn", "highdim", "all"];

pub fn suite_objectives(suite: &str) -> Result<Vec<&'static str>> {
    let one_d = ["f2_1d", "f3_1d", "shubert_1d", "quadratic_1d"];
    let two_d = ["camel6_2d", "sphere_2d"];
    Ok(match suite {
        "1d" => one_d.to_vec(),
        "2d" => two_d.to_vec(),
        "nn" => vec!["xor"],
        "highdim" => vec!["synthetic_highdim"],
        "all" => dgo::objectives::NAMES.to_vec(),
        other => bail!("unknown suite {other:?}; expected one of: {}", SUITES.join(", ")),
    })
}

/// Settings for one benchmark table.
pub struct BenchPlan {
    pub suite: String,
    pub optimizers: Vec<Optimizer>,
    pub seed: u64,
    pub repetitions: u64,
    pub dim: Option<usize>,
    pub dgo: DgoConfig,
    pub baseline: BaselineOptions,
    pub timing: bool,
    pub out: PathBuf,
    pub append: bool,
}

pub struct BenchSummary {
    pub rows: usize,
    pub failed: Vec<Failed>,
    pub table_path: PathBuf,
    pub json_path: PathBuf,
}

/// Runs every (objective, optimizer, seed) row of a suite, rows in parallel.
///
/// Row order and content depend only on the plan, never on scheduling.
pub fn bench(plan: &BenchPlan) -> Result<BenchSummary> {
    if plan.repetitions == 0 {
        bail!("repetitions must be at least 1");
    }
    plan.dgo.validate()?;
    let objectives = suite_objectives(&plan.suite)?
        .into_iter()
        .map(|name| {
            let dim = (name == "synthetic_highdim").then_some(plan.dim).flatten();
            resolve_objective(name, dim)
        })
        .collect::<Result<Vec<_>>>()?;
    for opt in &plan.optimizers {
        if let Optimizer::Baseline(m) = opt {
            plan.baseline.build(*m, plan.seed).validate()?;
        }
    }

    let mut jobs = Vec::new();
    for obj in &objectives {
        for &opt in &plan.optimizers {
            for i in 0..plan.repetitions {
                jobs.push((obj, opt, plan.seed.wrapping_add(i)));
            }
        }
    }
    let dgo_cfg = DgoConfig { parallel: false, ..plan.dgo.clone() };
    let outcomes: Vec<_> = jobs
        .par_iter()
        .map(|&(obj, opt, seed)| {
            let r = execute(obj, opt, &dgo_cfg, &plan.baseline, seed, plan.timing);
            (obj.name(), opt, seed, r)
        })
        .collect();

    let mut records = Vec::new();
    let mut failed = Vec::new();
    for (name, opt, seed, outcome) in outcomes {
        match outcome {
            Ok(c) => records.push(c.record),
            Err(e) => failed.push(Failed {
                objective: name.to_string(),
                optimizer: opt.name().to_string(),
                seed,
                error: format!("{e:#}"),
            }),
        }
    }
    let table_path = plan.out.clone();
    let json_path = json_path_for(&table_path);
    ensure_parent(&table_path)?;
    let rows: Vec<String> = records.iter().map(ResultRecord::bench_row).collect();
    report::write_csv(&table_path, BENCH_HEADER, &rows, plan.append)
        .with_context(|| format!("writing {}", table_path.display()))?;
    std::fs::write(&json_path, json_document("dgo.bench.v1", BENCH_HEADER, &records))
        .with_context(|| format!("writing {}", json_path.display()))?;
    Ok(BenchSummary { rows: records.len(), failed, table_path, json_path })
}
