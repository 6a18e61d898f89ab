//! The main search loop.
//!
//! A run keeps one parent bit-string. Each step evaluates all `2N - 1`
//! children of the parent (`N` = total bits) and moves to the best child if
//! it is strictly better. When a step finds nothing better, every variable's
//! resolution doubles ([`SearchSpace::refine_random`] or
//! [`SearchSpace::refine_zeros`]), the refined parent is re-evaluated and
//! stepping resumes. The run ends once a step at `max_bits` finds nothing
//! better.
//!
//! Children of one step may be evaluated concurrently. Selection is the
//! minimum value with ties going to the lowest segment index, so the outcome
//! never depends on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitstring::{generate_children_with, BitString, Transform};
use crate::encoding::SearchSpace;
use crate::error::{Error, Result};
use crate::objectives::Evaluate;
use crate::run::{Event, IterationRecord, RunResult, Termination};
use crate::scalar::Scalar;
use crate::{derive_seed, DEFAULT_SEED};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DgoConfig {
    /// Starting per-variable resolution.
    pub initial_bits: u32,
    /// Final per-variable resolution; must be `initial_bits * 2^k`.
    pub max_bits: u32,
    pub starts: usize,
    pub seed: u64,
    /// Step cap per start.
    pub max_iterations: u64,
    /// Optional objective-call budget per start.
    pub max_evaluations: Option<u64>,
    /// Append zeros instead of random bits when refining.
    pub deterministic_refine: bool,
    pub transform: Transform,
    /// Evaluate children (and independent starts) on the rayon pool.
    pub parallel: bool,
}

impl Default for DgoConfig {
    fn default() -> Self {
        Self {
            initial_bits: 8,
            max_bits: 32,
            starts: 1,
            seed: DEFAULT_SEED,
            max_iterations: 100_000,
            max_evaluations: None,
            deterministic_refine: false,
            transform: Transform::Gray,
            parallel: false,
        }
    }
}

impl DgoConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(1..=64).contains(&self.initial_bits) {
            return bad(format!("initial_bits {} outside 1..=64", self.initial_bits));
        }
        if self.max_bits < self.initial_bits || self.max_bits > 64 {
            return bad(format!(
                "max_bits {} must lie in initial_bits..=64 ({}..=64)",
                self.max_bits, self.initial_bits
            ));
        }
        let ratio = self.max_bits / self.initial_bits;
        if !self.max_bits.is_multiple_of(self.initial_bits) || !ratio.is_power_of_two() {
            return bad(format!(
                "max_bits {} is not initial_bits {} times a power of two",
                self.max_bits, self.initial_bits
            ));
        }
        if self.starts == 0 {
            return bad("starts must be at least 1".into());
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1".into());
        }
        if self.max_evaluations == Some(0) {
            return bad("max_evaluations must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepOutcome<F> {
    Improved {
        child: BitString,
        value: F,
        /// Segment-tree index of the winning child.
        index: usize,
    },
    NoImprovement,
}

fn checked_eval<F: Scalar, O: Evaluate<F> + ?Sized>(
    f: &O,
    x: &[F],
    child: Option<usize>,
) -> Result<F> {
    let v = f.evaluate(x);
    if v.is_nan() {
        Err(Error::NotANumber { child })
    } else {
        Ok(v)
    }
}

/// Lexicographic minimum over `(value, index)`.
///
/// The reduction is commutative and associative, so any evaluation or merge
/// order selects the same child.
pub fn select_best<F: Scalar>(candidates: impl IntoIterator<Item = (usize, F)>) -> Option<(usize, F)> {
    candidates.into_iter().reduce(merge_best)
}

fn merge_best<F: Scalar>(a: (usize, F), b: (usize, F)) -> (usize, F) {
    if b.1 < a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

fn outcome<F: Scalar>(
    children: Vec<BitString>,
    best: Option<(usize, F)>,
    parent_value: F,
) -> StepOutcome<F> {
    match best {
        Some((index, value)) if value < parent_value => StepOutcome::Improved {
            child: children.into_iter().nth(index).expect("winner index in range"),
            value,
            index,
        },
        _ => StepOutcome::NoImprovement,
    }
}

/// One generation: evaluates every child of `parent` and keeps the strict best.
///
/// Performs exactly `2 * parent.len() - 1` objective calls. A NaN from any
/// child is reported with the lowest offending segment index.
pub fn dgo_step<F, O>(
    parent: &BitString,
    parent_value: F,
    space: &SearchSpace<F>,
    f: &O,
    transform: Transform,
    parallel: bool,
) -> Result<StepOutcome<F>>
where
    F: Scalar,
    O: Evaluate<F> + ?Sized,
{
    check_parent(parent, space)?;
    let children = generate_children_with(parent, transform);
    let eval = |(i, c): (usize, &BitString)| checked_eval(f, &space.decode_unchecked(c), Some(i));
    let values: Vec<Result<F>> = if parallel {
        children.par_iter().enumerate().map(eval).collect()
    } else {
        children.iter().enumerate().map(eval).collect()
    };
    let values = values.into_iter().collect::<Result<Vec<F>>>()?;
    let best = select_best(values.into_iter().enumerate());
    Ok(outcome(children, best, parent_value))
}

/// [`dgo_step`] with children evaluated and merged in the given order.
///
/// `order` must be a permutation of `0..2N-1`. Used to audit that selection is
/// independent of evaluation order.
pub fn dgo_step_ordered<F, O>(
    parent: &BitString,
    parent_value: F,
    space: &SearchSpace<F>,
    f: &O,
    transform: Transform,
    order: &[usize],
) -> Result<StepOutcome<F>>
where
    F: Scalar,
    O: Evaluate<F> + ?Sized,
{
    check_parent(parent, space)?;
    let children = generate_children_with(parent, transform);
    assert_eq!(order.len(), children.len(), "order must cover every child");
    let mut best = None;
    for &i in order {
        let v = checked_eval(f, &space.decode_unchecked(&children[i]), Some(i))?;
        best = Some(match best {
            None => (i, v),
            Some(b) => merge_best(b, (i, v)),
        });
    }
    Ok(outcome(children, best, parent_value))
}

fn check_parent<F: Scalar>(parent: &BitString, space: &SearchSpace<F>) -> Result<()> {
    if parent.len() != space.total_bits() {
        return Err(Error::LengthMismatch {
            expected: space.total_bits(),
            actual: parent.len(),
        });
    }
    Ok(())
}

fn check_start<F: Scalar>(bounds: &[(F, F)], start: Option<&[F]>) -> Result<SearchSpace<F>> {
    let space = SearchSpace::uniform(bounds, 1)?;
    if let Some(x) = start {
        space.encode_nearest(x)?;
    }
    Ok(space)
}

/// Runs a single start from `start` (or a random parent drawn from `cfg.seed`).
pub fn optimize<F, O>(
    f: &O,
    bounds: &[(F, F)],
    cfg: &DgoConfig,
    start: Option<&[F]>,
) -> Result<RunResult<F>>
where
    F: Scalar,
    O: Evaluate<F> + ?Sized,
{
    cfg.validate()?;
    check_start(bounds, start)?;
    run_start(f, bounds, cfg, start, derive_seed(cfg.seed, 0))
}

fn run_start<F, O>(
    f: &O,
    bounds: &[(F, F)],
    cfg: &DgoConfig,
    start: Option<&[F]>,
    seed: u64,
) -> Result<RunResult<F>>
where
    F: Scalar,
    O: Evaluate<F> + ?Sized,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits = cfg.initial_bits;
    let mut space = SearchSpace::uniform(bounds, bits)?;
    let mut parent = match start {
        Some(x) => space.encode_nearest(x)?,
        None => BitString::random(space.total_bits(), &mut rng),
    };
    let mut point = space.decode_unchecked(&parent);
    let mut value = checked_eval(f, &point, None)?;
    let mut evaluations: u64 = 1;
    let mut steps: u64 = 0;

    let mut best_value = value;
    let mut best_point = point.clone();
    let mut best_bits = parent.clone();

    let mut trace = vec![IterationRecord {
        iteration: 0,
        event: Event::Start,
        parent_value: value,
        best_value: value,
        evaluations_so_far: evaluations,
        resolution_bits: Some(bits),
    }];
    let over_budget = |evals: u64, extra: u64| cfg.max_evaluations.is_some_and(|b| evals + extra > b);

    let termination = loop {
        if steps >= cfg.max_iterations {
            break Termination::IterationCap;
        }
        let fan_out = 2 * parent.len() as u64 - 1;
        if over_budget(evaluations, fan_out) {
            break Termination::EvaluationBudget;
        }
        let step = dgo_step(&parent, value, &space, f, cfg.transform, cfg.parallel)?;
        steps += 1;
        evaluations += fan_out;
        let event = match step {
            StepOutcome::Improved {
                child, value: v, ..
            } => {
                parent = child;
                value = v;
                Event::Improve
            }
            StepOutcome::NoImprovement => {
                if bits >= cfg.max_bits {
                    break Termination::MaxResolutionConverged;
                }
                if over_budget(evaluations, 1) {
                    break Termination::EvaluationBudget;
                }
                let (refined_space, refined) = if cfg.deterministic_refine {
                    space.refine_zeros(&parent)?
                } else {
                    space.refine_random(&parent, &mut rng)?
                };
                space = refined_space;
                parent = refined;
                bits *= 2;
                point = space.decode_unchecked(&parent);
                value = checked_eval(f, &point, None)?;
                evaluations += 1;
                Event::Refine
            }
        };
        if value < best_value {
            best_value = value;
            best_point = space.decode_unchecked(&parent);
            best_bits = parent.clone();
        }
        trace.push(IterationRecord {
            iteration: steps,
            event,
            parent_value: value,
            best_value,
            evaluations_so_far: evaluations,
            resolution_bits: Some(bits),
        });
    };

    Ok(RunResult {
        best_point,
        best_value,
        best_bits: Some(best_bits),
        trace,
        evaluations,
        steps,
        termination,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiStartResult<F> {
    /// Every start's result, in start order.
    pub runs: Vec<RunResult<F>>,
    /// Index of the start with the lowest best value (first on ties).
    pub best_index: usize,
}

impl<F: Scalar> MultiStartResult<F> {
    pub fn best(&self) -> &RunResult<F> {
        &self.runs[self.best_index]
    }

    pub fn total_evaluations(&self) -> u64 {
        self.runs.iter().map(|r| r.evaluations).sum()
    }
}

/// Runs `cfg.starts` independent starts and keeps the best.
///
/// Start `i` uses the seed `derive_seed(cfg.seed, i)`, so results do not depend
/// on whether starts run concurrently. Start 0 uses `start` when given.
pub fn multi_start<F, O>(
    f: &O,
    bounds: &[(F, F)],
    cfg: &DgoConfig,
    start: Option<&[F]>,
) -> Result<MultiStartResult<F>>
where
    F: Scalar,
    O: Evaluate<F> + ?Sized,
{
    cfg.validate()?;
    check_start(bounds, start)?;
    let one = |i: usize| {
        let s = if i == 0 { start } else { None };
        run_start(f, bounds, cfg, s, derive_seed(cfg.seed, i as u64))
    };
    let runs: Vec<Result<RunResult<F>>> = if cfg.parallel {
        (0..cfg.starts).into_par_iter().map(one).collect()
    } else {
        (0..cfg.starts).map(one).collect()
    };
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;
    let (best_index, _) = select_best(runs.iter().map(|r| r.best_value).enumerate())
        .expect("at least one start");
    Ok(MultiStartResult { runs, best_index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitstring::{gray_decode, gray_encode, invert_segment, segment_tree};
    use std::sync::atomic::{AtomicU64, Ordering};

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn identity(x: &[f64]) -> f64 {
        x[0]
    }

    #[test]
    fn step_at_global_minimum_does_not_improve() {
        let space = SearchSpace::uniform(&[(0.0, 15.0)], 4).unwrap();
        let out = dgo_step(&bs("0000"), 0.0, &space, &identity, Transform::Gray, false).unwrap();
        assert_eq!(out, StepOutcome::NoImprovement);
    }

    #[test]
    fn step_from_top_matches_brute_force() {
        let space = SearchSpace::uniform(&[(0.0, 15.0)], 4).unwrap();
        let parent = bs("1111");
        // Oracle: apply encode / flip / decode per segment by hand.
        let g = gray_encode(&parent);
        let expected = segment_tree(4)
            .into_iter()
            .map(|s| gray_decode(&invert_segment(&g, s)).field(0, 4) as f64)
            .fold(f64::INFINITY, f64::min);
        match dgo_step(&parent, 15.0, &space, &identity, Transform::Gray, false).unwrap() {
            StepOutcome::Improved { value, child, .. } => {
                assert_eq!(value, expected);
                assert_eq!(space.decode(&child).unwrap()[0], expected);
            }
            other => panic!("expected improvement, got {other:?}"),
        }
    }

    #[test]
    fn step_counts_evaluations() {
        let calls = AtomicU64::new(0);
        let f = |x: &[f64]| {
            calls.fetch_add(1, Ordering::Relaxed);
            x[0] * x[1]
        };
        let space = SearchSpace::uniform(&[(-1.0, 1.0), (-1.0, 1.0)], 7).unwrap();
        let parent = BitString::random(14, &mut ChaCha8Rng::seed_from_u64(4));
        dgo_step(&parent, 0.5, &space, &f, Transform::Gray, true).unwrap();
        assert_eq!(calls.load(Ordering::Relaxed), 27);
    }

    #[test]
    fn step_reports_nan_child() {
        let space = SearchSpace::uniform(&[(0.0, 15.0)], 4).unwrap();
        let f = |x: &[f64]| if x[0] == 0.0 { f64::NAN } else { x[0] };
        // Child 0 (root inversion) of 1111 is 0000 -> NaN.
        let err = dgo_step(&bs("1111"), 15.0, &space, &f, Transform::Gray, false).unwrap_err();
        assert!(matches!(err, Error::NotANumber { child: Some(_) }));
        let err = dgo_step(&bs("111"), 15.0, &space, &f, Transform::Gray, false).unwrap_err();
        assert!(matches!(err, Error::LengthMismatch { .. }));
    }

    #[test]
    fn ties_break_to_lowest_segment() {
        let space = SearchSpace::uniform(&[(0.0, 1.0)], 6).unwrap();
        let constant = |_: &[f64]| 1.0;
        let out = dgo_step(&bs("101010"), 2.0, &space, &constant, Transform::Gray, true).unwrap();
        assert!(matches!(out, StepOutcome::Improved { index: 0, .. }));
        assert_eq!(select_best([(3, 1.0), (1, 1.0), (2, 2.0)]), Some((1, 1.0)));
    }

    #[test]
    fn config_validation() {
        let ok = DgoConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            DgoConfig { initial_bits: 0, ..ok.clone() },
            DgoConfig { max_bits: 4, ..ok.clone() },
            DgoConfig { max_bits: 24, ..ok.clone() },
            DgoConfig { initial_bits: 3, max_bits: 96, ..ok.clone() },
            DgoConfig { starts: 0, ..ok.clone() },
            DgoConfig { max_iterations: 0, ..ok.clone() },
            DgoConfig { max_evaluations: Some(0), ..ok.clone() },
        ] {
            assert!(matches!(bad.validate(), Err(Error::Config(_))), "{bad:?}");
        }
        assert!(DgoConfig { initial_bits: 3, max_bits: 48, ..ok }.validate().is_ok());
    }

    #[test]
    fn invalid_config_makes_no_calls() {
        let calls = AtomicU64::new(0);
        let f = |x: &[f64]| {
            calls.fetch_add(1, Ordering::Relaxed);
            x[0]
        };
        let cfg = DgoConfig { max_bits: 12, ..DgoConfig::default() };
        assert!(optimize(&f, &[(0.0, 1.0)], &cfg, None).is_err());
        let cfg = DgoConfig::default();
        assert!(optimize(&f, &[(0.0, 1.0)], &cfg, Some(&[2.0])).is_err());
        assert!(optimize(&f, &[(1.0, 0.0)], &cfg, None).is_err());
        assert_eq!(calls.load(Ordering::Relaxed), 0);
    }

    #[test]
    fn constant_objective_one_sweep_per_level() {
        let cfg = DgoConfig { initial_bits: 4, max_bits: 16, ..DgoConfig::default() };
        let r = optimize(&|_: &[f64]| 2.5, &[(0.0, 1.0)], &cfg, None).unwrap();
        assert_eq!(r.best_value, 2.5);
        assert_eq!(r.termination, Termination::MaxResolutionConverged);
        // Levels 4, 8, 16 bits: one sweep each, two refinements.
        assert_eq!(r.steps, 3);
        assert_eq!(r.evaluations, 1 + 7 + 1 + 15 + 1 + 31);
    }

    #[test]
    fn quadratic_within_one_grid_step() {
        let cfg = DgoConfig { initial_bits: 8, max_bits: 32, ..DgoConfig::default() };
        let f = |x: &[f64]| (x[0] - 3.0).powi(2);
        let r = optimize(&f, &[(0.0, 10.0)], &cfg, None).unwrap();
        let step = 10.0 / (u32::MAX as f64);
        assert!((r.best_point[0] - 3.0).abs() <= step, "{}", r.best_point[0]);
        assert_eq!(r.best_value, f(&r.best_point));
    }

    #[test]
    fn iteration_cap_and_budget() {
        let f = |x: &[f64]| (x[0] - 3.0).powi(2) + (x[1] + 1.0).powi(2);
        let bounds = [(-5.0, 5.0), (-5.0, 5.0)];
        let cfg = DgoConfig { max_iterations: 2, ..DgoConfig::default() };
        let r = optimize(&f, &bounds, &cfg, Some(&[5.0, 5.0])).unwrap();
        assert_eq!(r.termination, Termination::IterationCap);
        assert_eq!(r.steps, 2);

        let cfg = DgoConfig { max_evaluations: Some(100), ..DgoConfig::default() };
        let r = optimize(&f, &bounds, &cfg, None).unwrap();
        assert_eq!(r.termination, Termination::EvaluationBudget);
        assert!(r.evaluations <= 100);
        // Stopped only because the next step (31 or 63 calls) would not fit.
        assert!(r.evaluations + 31 > 100);
    }

    #[test]
    fn user_start_is_honored() {
        let cfg = DgoConfig { max_iterations: 1, ..DgoConfig::default() };
        let r = optimize(&identity, &[(0.0, 255.0)], &cfg, Some(&[128.0])).unwrap();
        assert_eq!(r.trace[0].parent_value, 128.0);
    }

    #[test]
    fn multi_start_single_matches_optimize() {
        let obj = crate::objectives::lookup::<f64>("f3_1d").unwrap();
        let cfg = DgoConfig { seed: 77, ..DgoConfig::default() };
        let single = optimize(&obj, obj.bounds(), &cfg, None).unwrap();
        let multi = multi_start(&obj, obj.bounds(), &cfg, None).unwrap();
        assert_eq!(multi.runs.len(), 1);
        assert_eq!(multi.best(), &single);
    }

    #[test]
    fn multi_start_best_of_k() {
        let obj = crate::objectives::lookup::<f64>("camel6_2d").unwrap();
        let cfg = DgoConfig { starts: 6, parallel: true, ..DgoConfig::default() };
        let m = multi_start(&obj, obj.bounds(), &cfg, None).unwrap();
        assert!(m.runs.iter().all(|r| m.best().best_value <= r.best_value));
        assert_eq!(
            m.total_evaluations(),
            m.runs.iter().map(|r| r.evaluations).sum::<u64>()
        );
        let sequential = multi_start(&obj, obj.bounds(), &DgoConfig { parallel: false, ..cfg }, None).unwrap();
        assert_eq!(m, sequential);
    }

    #[test]
    fn binary_ablation_runs() {
        let obj = crate::objectives::lookup::<f64>("f2_1d").unwrap();
        let cfg = DgoConfig { transform: Transform::Binary, ..DgoConfig::default() };
        let r = optimize(&obj, obj.bounds(), &cfg, None).unwrap();
        assert_eq!(r.termination, Termination::MaxResolutionConverged);
    }

    #[test]
    fn generic_over_f32() {
        let obj = crate::objectives::lookup::<f32>("quadratic_1d").unwrap();
        let cfg = DgoConfig { initial_bits: 8, max_bits: 16, ..DgoConfig::default() };
        let r = optimize(&obj, obj.bounds(), &cfg, None).unwrap();
        assert!((r.best_point[0] - 3.0f32).abs() < 1e-3);
    }
}
