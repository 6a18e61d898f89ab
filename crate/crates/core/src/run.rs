use std::fmt;

use serde::Serialize;

use crate::bitstring::BitString;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Event {
    Start,
    Improve,
    Refine,
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Event::Start => "start",
            Event::Improve => "improve",
            Event::Refine => "refine",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// No strictly better child exists at the maximum resolution.
    MaxResolutionConverged,
    /// The per-start step cap was reached.
    IterationCap,
    /// The next step would exceed the evaluation budget.
    EvaluationBudget,
    /// Gradient norm fell below tolerance (gradient descent only).
    GradientConverged,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::MaxResolutionConverged => "max_resolution_converged",
            Termination::IterationCap => "iteration_cap",
            Termination::EvaluationBudget => "evaluation_budget",
            Termination::GradientConverged => "gradient_converged",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord<F> {
    /// Number of completed steps (generations, for the baselines) when recorded.
    pub iteration: u64,
    pub event: Event,
    /// Value of the current parent / current point.
    pub parent_value: F,
    /// Best value seen so far in this run; non-increasing.
    pub best_value: F,
    pub evaluations_so_far: u64,
    /// Per-variable resolution in bits, for bit-string optimizers.
    pub resolution_bits: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunResult<F> {
    pub best_point: Vec<F>,
    pub best_value: F,
    pub best_bits: Option<BitString>,
    pub trace: Vec<IterationRecord<F>>,
    pub evaluations: u64,
    /// Optimizer steps taken (DGO steps, GA generations, GD/SA iterations).
    pub steps: u64,
    pub termination: Termination,
    /// Seed of the generator this run actually used.
    pub seed: u64,
}
