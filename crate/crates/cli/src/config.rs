//! Experiment configuration: TOML file plus command-line overrides.
//!
//! ```toml
//! objective = "camel6_2d"
//! optimizer = "dgo"          # or monte_carlo, gradient_descent, genetic, annealing
//! seed = 7
//! repetitions = 3            # repetition i runs with seed + i
//! dim = 100                  # synthetic_highdim only
//! timing = true              # false leaves wall_time_s empty
//!
//! [output]
//! dir = "results"
//! result = "camel.csv"       # relative to dir; JSON goes next to it
//! trace = "camel_trace.csv"
//! append = false
//!
//! [dgo]
//! initial_bits = 8
//! max_bits = 32
//! starts = 5
//! deterministic_refine = true
//!
//! [baseline]
//! budget = 100000
//! population_size = 50
//! ```

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use dgo::baselines::{BaselineConfig, Method};
use dgo::objectives::{self, Objective};
use dgo::{DgoConfig, DEFAULT_SEED};
use serde::Deserialize;

pub const DEFAULT_BUDGET: u64 = 100_000;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: Option<PathBuf>,
    pub result: Option<PathBuf>,
    pub trace: Option<PathBuf>,
    pub append: bool,
}

/// Baseline settings; unset fields keep the library defaults.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BaselineOptions {
    pub budget: Option<u64>,
    pub step_size: Option<f64>,
    pub gradient_tolerance: Option<f64>,
    pub population_size: Option<usize>,
    pub genome_bits: Option<u32>,
    pub mutation_rate: Option<f64>,
    pub crossover_rate: Option<f64>,
    pub initial_temperature: Option<f64>,
    pub probe_points: Option<u64>,
    pub cooling: Option<f64>,
    pub perturbation: Option<f64>,
}

impl BaselineOptions {
    pub fn build(&self, method: Method, seed: u64) -> BaselineConfig<f64> {
        let mut c = BaselineConfig::new(method, self.budget.unwrap_or(DEFAULT_BUDGET)).with_seed(seed);
        if let Some(v) = self.step_size {
            c.step_size = v;
        }
        if let Some(v) = self.gradient_tolerance {
            c.gradient_tolerance = v;
        }
        if let Some(v) = self.population_size {
            c.population_size = v;
        }
        if let Some(v) = self.genome_bits {
            c.genome_bits = v;
        }
        if self.mutation_rate.is_some() {
            c.mutation_rate = self.mutation_rate;
        }
        if let Some(v) = self.crossover_rate {
            c.crossover_rate = v;
        }
        if self.initial_temperature.is_some() {
            c.initial_temperature = self.initial_temperature;
        }
        if let Some(v) = self.probe_points {
            c.probe_points = v;
        }
        if let Some(v) = self.cooling {
            c.cooling = v;
        }
        if let Some(v) = self.perturbation {
            c.perturbation = v;
        }
        c
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub objective: Option<String>,
    pub optimizer: String,
    pub seed: u64,
    pub repetitions: u64,
    pub dim: Option<usize>,
    pub timing: bool,
    pub output: OutputConfig,
    pub dgo: DgoConfig,
    pub baseline: BaselineOptions,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            objective: None,
            optimizer: "dgo".into(),
            seed: DEFAULT_SEED,
            repetitions: 1,
            dim: None,
            timing: true,
            output: OutputConfig::default(),
            dgo: DgoConfig::default(),
            baseline: BaselineOptions::default(),
        }
    }
}

/// Which optimizer a config names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Optimizer {
    Dgo,
    Baseline(Method),
}

impl Optimizer {
    pub fn parse(name: &str) -> Result<Self> {
        if name == "dgo" {
            return Ok(Optimizer::Dgo);
        }
        match name.parse::<Method>() {
            Ok(m) => Ok(Optimizer::Baseline(m)),
            Err(_) => bail!(
                "unknown optimizer {name:?}; expected one of: {}",
                optimizer_names().join(", ")
            ),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Optimizer::Dgo => "dgo",
            Optimizer::Baseline(m) => m.name(),
        }
    }
}

pub fn optimizer_names() -> Vec<&'static str> {
    std::iter::once("dgo")
        .chain(Method::ALL.iter().map(|m| m.name()))
        .collect()
}

/// Resolves an objective name, honouring `dim` for the synthetic objective.
pub fn resolve_objective(name: &str, dim: Option<usize>) -> Result<Objective<f64>> {
    if name == "synthetic_highdim" {
        let d = dim.unwrap_or(objectives::SYNTHETIC_DEFAULT_DIM);
        if d == 0 {
            bail!("dim must be at least 1");
        }
        return Ok(objectives::synthetic_highdim(d, objectives::SYNTHETIC_SHIFT_SEED));
    }
    if dim.is_some() {
        bail!("dim only applies to synthetic_highdim, not {name:?}");
    }
    objectives::lookup(name).with_context(|| {
        format!(
            "unknown objective {name:?}; expected one of: {}",
            objectives::NAMES.join(", ")
        )
    })
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Checks everything that can be checked without evaluating the objective.
    pub fn validate(&self) -> Result<(Objective<f64>, Optimizer)> {
        let Some(name) = &self.objective else {
            bail!("no objective given (use --objective or `objective = ...`)");
        };
        let objective = resolve_objective(name, self.dim)?;
        let optimizer = Optimizer::parse(&self.optimizer)?;
        if self.repetitions == 0 {
            bail!("repetitions must be at least 1");
        }
        match optimizer {
            Optimizer::Dgo => self.dgo.validate()?,
            Optimizer::Baseline(m) => self.baseline.build(m, self.seed).validate()?,
        }
        Ok((objective, optimizer))
    }

    pub fn result_path(&self, objective: &str) -> PathBuf {
        let dir = self.output.dir.clone().unwrap_or_default();
        dir.join(
            self.output
                .result
                .clone()
                .unwrap_or_else(|| format!("{objective}_{}_result.csv", self.optimizer).into()),
        )
    }

    pub fn trace_path(&self, objective: &str) -> PathBuf {
        let dir = self.output.dir.clone().unwrap_or_default();
        dir.join(
            self.output
                .trace
                .clone()
                .unwrap_or_else(|| format!("{objective}_{}_trace.csv", self.optimizer).into()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections() {
        let cfg: ExperimentConfig = toml::from_str(
            r#"
            objective = "f2_1d"
            seed = 3
            [dgo]
            max_bits = 16
            starts = 2
            [baseline]
            budget = 500
            "#,
        )
        .unwrap();
        assert_eq!(cfg.objective.as_deref(), Some("f2_1d"));
        assert_eq!(cfg.dgo.max_bits, 16);
        assert_eq!(cfg.dgo.initial_bits, 8);
        assert_eq!(cfg.baseline.build(Method::Genetic, 1).evaluation_budget, 500);
        assert_eq!(cfg.repetitions, 1);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(toml::from_str::<ExperimentConfig>("objektive = \"x\"").is_err());
        assert!(toml::from_str::<ExperimentConfig>("[dgo]\nbits = 3").is_err());
    }

    #[test]
    fn validation_catches_bad_values() {
        let mut cfg = ExperimentConfig { objective: Some("camel6_2d".into()), ..Default::default() };
        assert!(cfg.validate().is_ok());
        cfg.dgo.max_bits = 24;
        assert!(cfg.validate().is_err());
        cfg.dgo.max_bits = 32;
        cfg.optimizer = "hill_climb".into();
        assert!(cfg.validate().is_err());
        cfg.optimizer = "annealing".into();
        cfg.baseline.cooling = Some(1.5);
        assert!(cfg.validate().is_err());
        cfg.baseline.cooling = None;
        cfg.dim = Some(3);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn synthetic_dimension() {
        assert_eq!(resolve_objective("synthetic_highdim", Some(7)).unwrap().dimension(), 7);
        assert_eq!(resolve_objective("synthetic_highdim", None).unwrap().dimension(), 100);
        assert!(resolve_objective("nope", None).is_err());
    }
}
