//! Reference optimizers sharing the [`RunResult`] format: uniform Monte Carlo
//! sampling, finite-difference gradient descent, a binary genetic algorithm
//! and simulated annealing.
//!
//! Every baseline spends at most `evaluation_budget` objective calls and is
//! deterministic for a fixed seed. Defaults:
//!
//! * gradient descent: step 0.01, central differences with `h = 1e-6 * width`,
//!   stop when the gradient norm drops below `1e-10`;
//! * genetic: population 50, 16 bits per variable, binary tournament,
//!   one-point crossover with probability 0.9, per-bit mutation `1 / length`,
//!   one elite;
//! * annealing: `T0` = value range over 100 random probes, cooling 0.995 per
//!   step, each step redraws one coordinate within ±10 % of its box width.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bitstring::{BitString, Transform};
use crate::search::{self, DgoConfig};
use crate::encoding::SearchSpace;
use crate::error::{Error, Result};
use crate::objectives::Evaluate;
use crate::run::{Event, IterationRecord, RunResult, Termination};
use crate::scalar::Scalar;
use crate::DEFAULT_SEED;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    MonteCarlo,
    GradientDescent,
    Genetic,
    Annealing,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::MonteCarlo,
        Method::GradientDescent,
        Method::Genetic,
        Method::Annealing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::MonteCarlo => "monte_carlo",
            Method::GradientDescent => "gradient_descent",
            Method::Genetic => "genetic",
            Method::Annealing => "annealing",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown baseline method {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineConfig<F> {
    pub method: Method,
    pub evaluation_budget: u64,
    pub seed: u64,
    /// Starting point for gradient descent and annealing; random when `None`.
    pub start: Option<Vec<F>>,
    pub step_size: F,
    pub gradient_tolerance: F,
    pub population_size: usize,
    /// Bits per variable of the GA genome.
    pub genome_bits: u32,
    /// Per-bit mutation probability; `None` means `1 / genome length`.
    pub mutation_rate: Option<f64>,
    pub crossover_rate: f64,
    /// Fixed initial temperature; `None` estimates it from random probes.
    pub initial_temperature: Option<F>,
    pub probe_points: u64,
    pub cooling: F,
    /// Perturbation radius as a fraction of each variable's box width.
    pub perturbation: F,
}

impl<F: Scalar> BaselineConfig<F> {
    pub fn new(method: Method, evaluation_budget: u64) -> Self {
        Self {
            method,
            evaluation_budget,
            seed: DEFAULT_SEED,
            start: None,
            step_size: F::lit(0.01),
            gradient_tolerance: F::lit(1e-10),
            population_size: 50,
            genome_bits: 16,
            mutation_rate: None,
            crossover_rate: 0.9,
            initial_temperature: None,
            probe_points: 100,
            cooling: F::lit(0.995),
            perturbation: F::lit(0.1),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::Config(msg.to_string()));
        if self.evaluation_budget == 0 {
            return bad("evaluation_budget must be at least 1");
        }
        if !(self.step_size > F::zero()) {
            return bad("step_size must be positive");
        }
        if self.gradient_tolerance < F::zero() {
            return bad("gradient_tolerance must be non-negative");
        }
        if self.population_size < 2 {
            return bad("population_size must be at least 2");
        }
        if !(1..=64).contains(&self.genome_bits) {
            return bad("genome_bits must be in 1..=64");
        }
        if self.mutation_rate.is_some_and(|m| !(0.0..=1.0).contains(&m)) {
            return bad("mutation_rate must be in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad("crossover_rate must be in [0, 1]");
        }
        if self.initial_temperature.is_some_and(|t| !(t > F::zero())) {
            return bad("initial_temperature must be positive");
        }
        if !(self.cooling > F::zero() && self.cooling <= F::one()) {
            return bad("cooling must be in (0, 1]");
        }
        if !(self.perturbation > F::zero()) {
            return bad("perturbation must be positive");
        }
        Ok(())
    }
}

/// Dispatches on `cfg.method`.
pub fn run<F, O>(f: &O, bounds: &[(F, F)], cfg: &BaselineConfig<F>) -> Result<RunResult<F>>
where
    F: Scalar,
    O: Evaluate<F> + ?Sized,
{
    match cfg.method {
        Method::MonteCarlo => monte_carlo(f, bounds, cfg),
        Method::GradientDescent => gradient_descent(f, bounds, cfg),
        Method::Genetic => genetic(f, bounds, cfg),
        Method::Annealing => annealing(f, bounds, cfg),
    }
}

/// Running-best bookkeeping shared by the continuous baselines.
struct Tracker<'a, F, O: ?Sized> {
    f: &'a O,
    budget: u64,
    evaluations: u64,
    best_value: F,
    best_point: Vec<F>,
    best_bits: Option<BitString>,
    trace: Vec<IterationRecord<F>>,
    resolution_bits: Option<u32>,
}

impl<'a, F: Scalar, O: Evaluate<F> + ?Sized> Tracker<'a, F, O> {
    fn new(f: &'a O, budget: u64, resolution_bits: Option<u32>) -> Self {
        Self {
            f,
            budget,
            evaluations: 0,
            best_value: F::infinity(),
            best_point: Vec::new(),
            best_bits: None,
            trace: Vec::new(),
            resolution_bits,
        }
    }

    fn remaining(&self) -> u64 {
        self.budget - self.evaluations
    }

    /// Evaluates without touching the running best.
    fn probe(&mut self, x: &[F]) -> Result<F> {
        debug_assert!(self.evaluations < self.budget);
        self.evaluations += 1;
        let v = self.f.evaluate(x);
        if v.is_nan() {
            return Err(Error::NotANumber { child: None });
        }
        Ok(v)
    }

    fn eval(&mut self, x: &[F], iteration: u64, current: Option<F>) -> Result<F> {
        let v = self.probe(x)?;
        self.offer(x, v, None, iteration, current);
        Ok(v)
    }

    fn offer(&mut self, x: &[F], v: F, bits: Option<&BitString>, iteration: u64, current: Option<F>) {
        let first = self.trace.is_empty();
        if first || v < self.best_value {
            self.best_value = v;
            self.best_point = x.to_vec();
            self.best_bits = bits.cloned();
            self.trace.push(IterationRecord {
                iteration,
                event: if first { Event::Start } else { Event::Improve },
                parent_value: current.unwrap_or(v),
                best_value: v,
                evaluations_so_far: self.evaluations,
                resolution_bits: self.resolution_bits,
            });
        }
    }

    fn finish(self, steps: u64, termination: Termination, seed: u64) -> RunResult<F> {
        RunResult {
            best_point: self.best_point,
            best_value: self.best_value,
            best_bits: self.best_bits,
            trace: self.trace,
            evaluations: self.evaluations,
            steps,
            termination,
            seed,
        }
    }
}

fn uniform_point<F: Scalar, R: Rng>(bounds: &[(F, F)], rng: &mut R) -> Vec<F> {
    bounds
        .iter()
        .map(|&(lo, hi)| {
            let t = F::lit(rng.gen::<f64>());
            (lo + (hi - lo) * t).min(hi)
        })
        .collect()
}

fn check_bounds<F: Scalar>(bounds: &[(F, F)], start: Option<&[F]>) -> Result<()> {
    let space = SearchSpace::uniform(bounds, 1)?;
    if let Some(x) = start {
        space.encode_nearest(x)?;
    }
    Ok(())
}

fn clamp_to<F: Scalar>(x: F, (lo, hi): (F, F)) -> F {
    x.max(lo).min(hi)
}

/// Uniform random sampling, keeping the running minimum.
pub fn monte_carlo<F, O>(f: &O, bounds: &[(F, F)], cfg: &BaselineConfig<F>) -> Result<RunResult<F>>
where
    F: Scalar,
    O: Evaluate<F> + ?Sized,
{
    cfg.validate()?;
    check_bounds(bounds, None)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut t = Tracker::new(f, cfg.evaluation_budget, None);
    for k in 0..cfg.evaluation_budget {
        let x = uniform_point(bounds, &mut rng);
        t.eval(&x, k, None)?;
    }
    Ok(t.finish(cfg.evaluation_budget, Termination::EvaluationBudget, cfg.seed))
}

/// Central-difference gradient with per-coordinate step `1e-6 * width`.
///
/// Probes are clamped to the box; the difference quotient uses the actual
/// probe spacing. Returns the gradient; costs `2 * dim` evaluations.
pub fn central_difference<F, O>(f: &O, x: &[F], bounds: &[(F, F)]) -> Vec<F>
where
    F: Scalar,
    O: Evaluate<F> + ?Sized,
{
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let (lo, hi) = bounds[i];
            let h = F::lit(1e-6) * (hi - lo);
            let up = clamp_to(x[i] + h, bounds[i]);
            let down = clamp_to(x[i] - h, bounds[i]);
            probe[i] = up;
            let fu = f.evaluate(&probe);
            probe[i] = down;
            let fd = f.evaluate(&probe);
            probe[i] = x[i];
            (fu - fd) / (up - down)
        })
        .collect()
}

/// Fixed-step projected gradient descent on finite-difference gradients.
pub fn gradient_descent<F, O>(f: &O, bounds: &[(F, F)], cfg: &BaselineConfig<F>) -> Result<RunResult<F>>
where
    F: Scalar,
    O: Evaluate<F> + ?Sized,
{
    cfg.validate()?;
    check_bounds(bounds, cfg.start.as_deref())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = cfg
        .start
        .clone()
        .unwrap_or_else(|| uniform_point(bounds, &mut rng));
    let mut t = Tracker::new(f, cfg.evaluation_budget, None);
    t.eval(&x, 0, None)?;
    let per_step = 2 * x.len() as u64 + 1;
    let mut steps = 0;
    let termination = loop {
        if t.remaining() < per_step {
            break Termination::EvaluationBudget;
        }
        let g = central_difference(f, &x, bounds);
        t.evaluations += 2 * x.len() as u64;
        if g.iter().any(|v| v.is_nan()) {
            return Err(Error::NotANumber { child: None });
        }
        let norm = g.iter().fold(F::zero(), |a, &v| a + v * v).sqrt();
        if norm < cfg.gradient_tolerance {
            break Termination::GradientConverged;
        }
        for (i, gi) in g.iter().enumerate() {
            x[i] = clamp_to(x[i] - cfg.step_size * *gi, bounds[i]);
        }
        steps += 1;
        let fx = t.probe(&x)?;
        t.offer(&x, fx, None, steps, Some(fx));
    };
    Ok(t.finish(steps, termination, cfg.seed))
}

/// State of a finished GA run, including its last population.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneticOutcome<F> {
    pub result: RunResult<F>,
    pub population: Vec<BitString>,
}

/// Binary GA with a random initial population.
pub fn genetic<F, O>(f: &O, bounds: &[(F, F)], cfg: &BaselineConfig<F>) -> Result<RunResult<F>>
where
    F: Scalar,
    O: Evaluate<F> + ?Sized,
{
    cfg.validate()?;
    let space = SearchSpace::uniform(bounds, cfg.genome_bits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let population = (0..cfg.population_size)
        .map(|_| BitString::random(space.total_bits(), &mut rng))
        .collect();
    genetic_loop(f, &space, cfg, population, rng).map(|o| o.result)
}

/// Binary GA starting from the given population (its size overrides
/// `cfg.population_size`).
pub fn genetic_from<F, O>(
    f: &O,
    bounds: &[(F, F)],
    cfg: &BaselineConfig<F>,
    population: Vec<BitString>,
) -> Result<GeneticOutcome<F>>
where
    F: Scalar,
    O: Evaluate<F> + ?Sized,
{
    cfg.validate()?;
    let space = SearchSpace::uniform(bounds, cfg.genome_bits)?;
    if population.len() < 2 {
        return Err(Error::Config("population_size must be at least 2".into()));
    }
    for g in &population {
        space.decode(g)?;
    }
    let rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    genetic_loop(f, &space, cfg, population, rng)
}

fn genetic_loop<F, O>(
    f: &O,
    space: &SearchSpace<F>,
    cfg: &BaselineConfig<F>,
    mut population: Vec<BitString>,
    mut rng: ChaCha8Rng,
) -> Result<GeneticOutcome<F>>
where
    F: Scalar,
    O: Evaluate<F> + ?Sized,
{
    let len = space.total_bits();
    let mutation = cfg.mutation_rate.unwrap_or(1.0 / len as f64);
    let mut t = Tracker::new(f, cfg.evaluation_budget, Some(cfg.genome_bits));

    let mut fitness = Vec::with_capacity(population.len());
    for genome in &population {
        if t.remaining() == 0 {
            break;
        }
        let x = space.decode_unchecked(genome);
        let v = t.probe(&x)?;
        t.offer(&x, v, Some(genome), 0, None);
        fitness.push(v);
    }
    if fitness.len() < population.len() {
        let result = t.finish(0, Termination::EvaluationBudget, cfg.seed);
        return Ok(GeneticOutcome { result, population });
    }

    let tournament = |fitness: &[F], rng: &mut ChaCha8Rng| {
        let a = rng.gen_range(0..fitness.len());
        let b = rng.gen_range(0..fitness.len());
        if fitness[b] < fitness[a] || (fitness[b] == fitness[a] && b < a) {
            b
        } else {
            a
        }
    };

    let mut generation = 0;
    while t.remaining() > 0 {
        generation += 1;
        let (elite, _) = search::select_best(fitness.iter().copied().enumerate()).expect("non-empty");
        let mut next = vec![population[elite].clone()];
        let mut next_fitness = vec![fitness[elite]];
        while next.len() < population.len() && t.remaining() > 0 {
            let p1 = &population[tournament(&fitness, &mut rng)];
            let p2 = &population[tournament(&fitness, &mut rng)];
            let mut child = p1.clone();
            if len > 1 && rng.gen::<f64>() < cfg.crossover_rate {
                let cut = rng.gen_range(1..len);
                for i in cut..len {
                    child.set(i, p2.get(i));
                }
            }
            if mutation > 0.0 {
                for i in 0..len {
                    if rng.gen::<f64>() < mutation {
                        child.flip(i);
                    }
                }
            }
            let x = space.decode_unchecked(&child);
            let v = t.probe(&x)?;
            t.offer(&x, v, Some(&child), generation, None);
            next.push(child);
            next_fitness.push(v);
        }
        if next.len() < population.len() {
            // Budget ran out mid-generation; keep the survivors of the old one.
            let keep = population.len() - next.len();
            let mut rest: Vec<usize> = (0..population.len()).collect();
            rest.sort_by(|&a, &b| fitness[a].partial_cmp(&fitness[b]).unwrap().then(a.cmp(&b)));
            for i in rest.into_iter().take(keep) {
                next.push(population[i].clone());
                next_fitness.push(fitness[i]);
            }
        }
        population = next;
        fitness = next_fitness;
    }
    let result = t.finish(generation, Termination::EvaluationBudget, cfg.seed);
    Ok(GeneticOutcome { result, population })
}

/// Metropolis rule: always accept `delta <= 0`, otherwise accept when
/// `u < exp(-delta / temperature)`. A zero temperature is purely greedy.
pub fn metropolis_accept<F: Scalar>(delta: F, temperature: F, u: F) -> bool {
    if delta <= F::zero() {
        return true;
    }
    temperature > F::zero() && u < (-delta / temperature).exp()
}

/// Simulated annealing with geometric cooling.
pub fn annealing<F, O>(f: &O, bounds: &[(F, F)], cfg: &BaselineConfig<F>) -> Result<RunResult<F>>
where
    F: Scalar,
    O: Evaluate<F> + ?Sized,
{
    cfg.validate()?;
    check_bounds(bounds, cfg.start.as_deref())?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut x = cfg
        .start
        .clone()
        .unwrap_or_else(|| uniform_point(bounds, &mut rng));
    let mut t = Tracker::new(f, cfg.evaluation_budget, None);
    let mut fx = t.eval(&x, 0, None)?;

    let mut temperature = match cfg.initial_temperature {
        Some(t0) => t0,
        None => {
            let probes = cfg.probe_points.min(t.remaining());
            let (mut lo, mut hi) = (fx, fx);
            for _ in 0..probes {
                let v = t.probe(&uniform_point(bounds, &mut rng))?;
                lo = lo.min(v);
                hi = hi.max(v);
            }
            let range = hi - lo;
            if range > F::zero() && range.is_finite() {
                range
            } else {
                F::one()
            }
        }
    };

    let mut steps = 0;
    while t.remaining() > 0 {
        steps += 1;
        let i = rng.gen_range(0..x.len());
        let (lo, hi) = bounds[i];
        let r = F::lit(rng.gen_range(-1.0..=1.0));
        let mut candidate = x.clone();
        candidate[i] = clamp_to(x[i] + r * cfg.perturbation * (hi - lo), bounds[i]);
        let fc = t.probe(&candidate)?;
        let u = F::lit(rng.gen::<f64>());
        if metropolis_accept(fc - fx, temperature, u) {
            x = candidate;
            fx = fc;
            t.offer(&x, fx, None, steps, Some(fx));
        }
        temperature = temperature * cfg.cooling;
    }
    Ok(t.finish(steps, Termination::EvaluationBudget, cfg.seed))
}

/// Runs DGO twice with identical settings, once with Gray-coded segment
/// inversion and once with plain binary inversion. Observational only.
pub fn gray_vs_binary<F, O>(
    f: &O,
    bounds: &[(F, F)],
    cfg: &DgoConfig,
) -> Result<(RunResult<F>, RunResult<F>)>
where
    F: Scalar,
    O: Evaluate<F> + ?Sized,
{
    let gray = DgoConfig {
        transform: Transform::Gray,
        ..cfg.clone()
    };
    let binary = DgoConfig {
        transform: Transform::Binary,
        ..cfg.clone()
    };
    Ok((
        search::optimize(f, bounds, &gray, None)?,
        search::optimize(f, bounds, &binary, None)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::lookup;
    use std::sync::atomic::{AtomicU64, Ordering};

    fn quadratic(x: &[f64]) -> f64 {
        (x[0] - 3.0).powi(2)
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("gradient".parse::<Method>().is_err());
    }

    #[test]
    fn config_validation() {
        let ok = BaselineConfig::<f64>::new(Method::Genetic, 10);
        assert!(ok.validate().is_ok());
        let cases = [
            BaselineConfig { evaluation_budget: 0, ..ok.clone() },
            BaselineConfig { step_size: 0.0, ..ok.clone() },
            BaselineConfig { population_size: 1, ..ok.clone() },
            BaselineConfig { initial_temperature: Some(0.0), ..ok.clone() },
            BaselineConfig { cooling: 1.5, ..ok.clone() },
            BaselineConfig { mutation_rate: Some(2.0), ..ok.clone() },
        ];
        for c in cases {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn monte_carlo_budget_one() {
        let cfg = BaselineConfig::new(Method::MonteCarlo, 1);
        let r = monte_carlo(&quadratic, &[(0.0, 10.0)], &cfg).unwrap();
        assert_eq!(r.evaluations, 1);
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.best_value, quadratic(&r.best_point));
    }

    #[test]
    fn monte_carlo_running_minimum() {
        let cfg = BaselineConfig::new(Method::MonteCarlo, 500);
        let r = monte_carlo(&quadratic, &[(0.0, 10.0)], &cfg).unwrap();
        assert!(r.trace.windows(2).all(|w| w[1].best_value <= w[0].best_value));
        assert_eq!(r.evaluations, 500);
    }

    #[test]
    fn monte_carlo_order_statistics() {
        // E[min of k uniforms on [0, 1]] = 1 / (k + 1).
        let identity = |x: &[f64]| x[0];
        for k in [1u64, 4, 19, 99] {
            let mean = (0..1000)
                .map(|s| {
                    let cfg = BaselineConfig::new(Method::MonteCarlo, k).with_seed(s);
                    monte_carlo(&identity, &[(0.0, 1.0)], &cfg).unwrap().best_value
                })
                .sum::<f64>()
                / 1000.0;
            let expected = 1.0 / (k as f64 + 1.0);
            assert!((mean - expected).abs() <= 0.2 * expected, "k={k}: {mean} vs {expected}");
        }
    }

    #[test]
    fn finite_difference_matches_analytic() {
        for x in [0.5, 1.7, 3.0, 8.25, 9.9] {
            let g = central_difference(&quadratic, &[x], &[(0.0, 10.0)]);
            assert!((g[0] - 2.0 * (x - 3.0)).abs() < 1e-5, "x={x}: {}", g[0]);
        }
        // On the boundary the difference is one-sided, error ~h.
        let g = central_difference(&quadratic, &[10.0], &[(0.0, 10.0)]);
        assert!((g[0] - 14.0).abs() < 1e-4);
    }

    #[test]
    fn gradient_descent_converges_on_quadratic() {
        let cfg = BaselineConfig {
            start: Some(vec![0.0]),
            step_size: 0.1,
            ..BaselineConfig::new(Method::GradientDescent, 10_000)
        };
        let r = gradient_descent(&quadratic, &[(0.0, 10.0)], &cfg).unwrap();
        assert!((r.best_point[0] - 3.0).abs() < 1e-4, "{:?}", r.best_point);
        assert!(r.evaluations <= 10_000);
    }

    #[test]
    fn gradient_descent_stops_at_stationary_point() {
        let cfg = BaselineConfig {
            start: Some(vec![3.0]),
            ..BaselineConfig::new(Method::GradientDescent, 1000)
        };
        let r = gradient_descent(&quadratic, &[(0.0, 10.0)], &cfg).unwrap();
        assert_eq!(r.termination, Termination::GradientConverged);
        assert_eq!(r.steps, 0);
        assert_eq!(r.evaluations, 3);
    }

    #[test]
    fn genetic_static_without_variation() {
        let genome: BitString = "0110100111010010".parse().unwrap();
        let cfg = BaselineConfig {
            mutation_rate: Some(0.0),
            population_size: 8,
            ..BaselineConfig::new(Method::Genetic, 200)
        };
        let out = genetic_from(&quadratic, &[(0.0, 10.0)], &cfg, vec![genome.clone(); 8]).unwrap();
        assert!(out.population.iter().all(|g| *g == genome));
        assert_eq!(out.population.len(), 8);
        assert_eq!(out.result.evaluations, 200);
    }

    #[test]
    fn metropolis_limits() {
        assert!(metropolis_accept(-1.0, 0.0, 0.99));
        assert!(metropolis_accept(0.0, 1e-300, 0.5));
        for u in [0.0, 1e-12, 0.5] {
            assert!(!metropolis_accept(1e-9, 0.0, u));
            assert!(!metropolis_accept(1.0, 1e-300, u));
        }
        assert!(metropolis_accept(1.0, 1e6, 0.5));
    }

    #[test]
    fn greedy_annealing_never_worsens_current() {
        let calls = AtomicU64::new(0);
        let obj = lookup::<f64>("camel6_2d").unwrap();
        let f = |x: &[f64]| {
            calls.fetch_add(1, Ordering::Relaxed);
            obj.eval(x)
        };
        let cfg = BaselineConfig {
            initial_temperature: Some(1e-300),
            ..BaselineConfig::new(Method::Annealing, 2000)
        };
        let r = annealing(&f, obj.bounds(), &cfg).unwrap();
        // With only improvements accepted, every accepted state is a new best.
        assert!(r.trace.windows(2).all(|w| w[1].parent_value < w[0].parent_value));
        assert!(r.trace.iter().all(|t| t.parent_value == t.best_value));
        assert_eq!(calls.load(Ordering::Relaxed), 2000);
        assert_eq!(r.evaluations, 2000);
    }

    #[test]
    fn budgets_respected_and_seed_deterministic() {
        let obj = lookup::<f64>("camel6_2d").unwrap();
        for method in Method::ALL {
            for budget in [1, 7, 101, 1000] {
                let calls = AtomicU64::new(0);
                let f = |x: &[f64]| {
                    calls.fetch_add(1, Ordering::Relaxed);
                    obj.eval(x)
                };
                let cfg = BaselineConfig::new(method, budget).with_seed(3);
                let a = run(&f, obj.bounds(), &cfg).unwrap();
                let counted = calls.load(Ordering::Relaxed);
                assert!(counted <= budget, "{method} {budget}: {counted}");
                assert_eq!(a.evaluations, counted, "{method} {budget}");
                let b = run(&obj, obj.bounds(), &cfg).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn gray_vs_binary_records_both() {
        let obj = lookup::<f64>("f3_1d").unwrap();
        let (g, b) = gray_vs_binary(&obj, obj.bounds(), &DgoConfig::default()).unwrap();
        assert!(!g.trace.is_empty() && !b.trace.is_empty());
    }
}
