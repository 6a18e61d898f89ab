//! Benchmark objectives and their registry.
//!
//! | name                | dim | box                   | minimum                               |
//! |---------------------|-----|-----------------------|---------------------------------------|
//! | `f2_1d`             | 1   | [3.1, 20.4]           | x = 17.039198947601760, f = -1.905961 |
//! | `f3_1d`             | 1   | [-10, 10]             | x ∈ {5.846333, -0.436852, -6.720037}  |
//! | `shubert_1d`        | 1   | [-10, 10]             | x ∈ {5.791794, -0.491391, -6.774576}  |
//! | `quadratic_1d`      | 1   | [0, 10]               | x = 3, f = 0                          |
//! | `camel6_2d`         | 2   | [-3, 3] × [-2, 2]     | ±(0.0898420, -0.7126564)              |
//! | `sphere_2d`         | 2   | [-10, 10]²            | (0, 0), f = 0                         |
//! | `xor`               | 9   | [-20, 20]⁹            | none (infimum 0, never attained)      |
//! | `synthetic_highdim` | 100 | [-5.12, 5.12]¹⁰⁰      | x = s (shift), f = 0                  |
//!
//! `f3_1d` is `-Σ_{k=1..5} sin((k+1)x + k)`; `shubert_1d` is the same sum with
//! each term weighted by `k`. Optimum locations were obtained from a dense
//! grid scan followed by Newton polishing in extended precision.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::scalar::Scalar;

/// Anything that maps a point to an objective value.
///
/// Implementations must be pure and safe to call from several threads at once.
pub trait Evaluate<F>: Sync {
    fn evaluate(&self, x: &[F]) -> F;
}

impl<F, T> Evaluate<F> for T
where
    T: Fn(&[F]) -> F + Sync,
{
    fn evaluate(&self, x: &[F]) -> F {
        self(x)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnownOptimum<F> {
    /// Every global minimizer in the box (some objectives have several).
    pub points: Vec<Vec<F>>,
    pub value: F,
}

impl<F: Scalar> KnownOptimum<F> {
    /// Euclidean distance from `x` to the nearest registered minimizer.
    pub fn distance(&self, x: &[F]) -> F {
        self.points
            .iter()
            .map(|p| {
                p.iter()
                    .zip(x)
                    .map(|(&a, &b)| (a - b) * (a - b))
                    .fold(F::zero(), |acc, v| acc + v)
                    .sqrt()
            })
            .fold(F::infinity(), F::min)
    }
}

type EvalFn<F> = Arc<dyn Fn(&[F]) -> F + Send + Sync>;

/// A named objective with its search box and, when known, its global optimum.
#[derive(Clone)]
pub struct Objective<F> {
    name: String,
    description: String,
    bounds: Vec<(F, F)>,
    func: EvalFn<F>,
    known_optimum: Option<KnownOptimum<F>>,
}

impl<F: Scalar> Objective<F> {
    pub fn new(
        name: impl Into<String>,
        description: impl Into<String>,
        bounds: Vec<(F, F)>,
        func: impl Fn(&[F]) -> F + Send + Sync + 'static,
        known_optimum: Option<KnownOptimum<F>>,
    ) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
            bounds,
            func: Arc::new(func),
            known_optimum,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn dimension(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(F, F)] {
        &self.bounds
    }

    pub fn known_optimum(&self) -> Option<&KnownOptimum<F>> {
        self.known_optimum.as_ref()
    }

    pub fn eval(&self, x: &[F]) -> F {
        (self.func)(x)
    }
}

impl<F: Scalar> Evaluate<F> for Objective<F> {
    fn evaluate(&self, x: &[F]) -> F {
        self.eval(x)
    }
}

impl<F: Scalar> fmt::Debug for Objective<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("name", &self.name)
            .field("dimension", &self.dimension())
            .field("known_optimum", &self.known_optimum)
            .finish_non_exhaustive()
    }
}

/// `sin(x) + sin(2x/3)`, usually searched on `[3.1, 20.4]`.
pub fn f2_1d<F: Scalar>(x: F) -> F {
    x.sin() + (F::lit(2.0) * x / F::lit(3.0)).sin()
}

/// `-Σ_{k=1..5} sin((k+1)x + k)`, usually searched on `[-10, 10]`.
pub fn f3_1d<F: Scalar>(x: F) -> F {
    -(1..=5)
        .map(|k| (F::lit((k + 1) as f64) * x + F::lit(k as f64)).sin())
        .fold(F::zero(), |a, b| a + b)
}

/// One-dimensional Shubert function `-Σ_{k=1..5} k sin((k+1)x + k)`.
pub fn shubert_1d<F: Scalar>(x: F) -> F {
    -(1..=5)
        .map(|k| {
            let k = F::lit(k as f64);
            k * ((k + F::one()) * x + k).sin()
        })
        .fold(F::zero(), |a, b| a + b)
}

/// Six-hump camel-back function.
pub fn camel6_2d<F: Scalar>(x: F, y: F) -> F {
    let x2 = x * x;
    let y2 = y * y;
    (F::lit(4.0) - F::lit(2.1) * x2 + x2 * x2 / F::lit(3.0)) * x2
        + x * y
        + (F::lit(-4.0) + F::lit(4.0) * y2) * y2
}

pub fn sphere<F: Scalar>(x: &[F]) -> F {
    x.iter().fold(F::zero(), |acc, &v| acc + v * v)
}

pub fn sigmoid<F: Scalar>(z: F) -> F {
    F::one() / (F::one() + (-z).exp())
}

/// The four XOR patterns as `([a, b], target)`.
pub const XOR_PATTERNS: [([f64; 2], f64); 4] = [
    ([0.0, 0.0], 0.0),
    ([0.0, 1.0], 1.0),
    ([1.0, 0.0], 1.0),
    ([1.0, 1.0], 0.0),
];

/// 2-2-1 sigmoid network.
///
/// Weight layout: `[w_ih[0][0], w_ih[0][1], w_ih[1][0], w_ih[1][1], b_h[0], b_h[1],
/// w_ho[0], w_ho[1], b_o]`, where `w_ih[j][i]` connects input `i` to hidden unit `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XorNetwork<F> {
    pub weights: [F; 9],
}

impl<F: Scalar> XorNetwork<F> {
    pub fn new(weights: [F; 9]) -> Self {
        Self { weights }
    }

    pub fn from_slice(w: &[F]) -> Self {
        let mut weights = [F::zero(); 9];
        weights.copy_from_slice(&w[..9]);
        Self { weights }
    }

    pub fn forward(&self, a: F, b: F) -> F {
        let w = &self.weights;
        let h0 = sigmoid(w[0] * a + w[1] * b + w[4]);
        let h1 = sigmoid(w[2] * a + w[3] * b + w[5]);
        sigmoid(w[6] * h0 + w[7] * h1 + w[8])
    }

    /// Summed squared error over the four XOR patterns.
    pub fn error(&self) -> F {
        XOR_PATTERNS.iter().fold(F::zero(), |acc, ([a, b], t)| {
            let d = F::lit(*t) - self.forward(F::lit(*a), F::lit(*b));
            acc + d * d
        })
    }
}

/// Summed squared XOR error of a 2-2-1 network with the given 9 weights.
pub fn xor_error<F: Scalar>(weights: &[F]) -> F {
    XorNetwork::from_slice(weights).error()
}

/// Rastrigin function `Σ z_i² - 10 cos(2π z_i) + 10` evaluated at
/// `z = R (x - s)`, with shift `s` and an optional orthogonal rotation `R`.
///
/// Without the rotation the function is separable, one coordinate at a time;
/// the rotation couples every coordinate with every other one.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedRastrigin<F> {
    shift: Vec<F>,
    rotation: Option<Vec<F>>,
}

/// Seed of the default shift vector and rotation for `synthetic_highdim`.
pub const SYNTHETIC_SHIFT_SEED: u64 = 0x00F1_C100;

impl<F: Scalar> ShiftedRastrigin<F> {
    /// Shift drawn uniformly from `[-2.5, 2.5]^dim`, no rotation.
    pub fn new(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = (0..dim)
            .map(|_| F::lit(rng.gen_range(-2.5..=2.5)))
            .collect();
        Self { shift, rotation: None }
    }

    /// Same shift as [`ShiftedRastrigin::new`] plus a random rotation drawn
    /// from the same seed.
    pub fn rotated(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let shift = (0..dim)
            .map(|_| F::lit(rng.gen_range(-2.5..=2.5)))
            .collect();
        let rotation = random_orthogonal(dim, &mut rng)
            .into_iter()
            .map(F::lit)
            .collect();
        Self { shift, rotation: Some(rotation) }
    }

    pub fn shift(&self) -> &[F] {
        &self.shift
    }

    /// Row-major `dim × dim` rotation, if any.
    pub fn rotation(&self) -> Option<&[F]> {
        self.rotation.as_deref()
    }

    pub fn eval(&self, x: &[F]) -> F {
        let d = self.shift.len();
        let y: Vec<F> = x.iter().zip(&self.shift).map(|(&xi, &si)| xi - si).collect();
        match &self.rotation {
            None => y.into_iter().map(rastrigin_term).fold(F::zero(), |a, b| a + b),
            Some(r) => r
                .chunks_exact(d)
                .map(|row| {
                    let z = row.iter().zip(&y).fold(F::zero(), |a, (&m, &v)| a + m * v);
                    rastrigin_term(z)
                })
                .fold(F::zero(), |a, b| a + b),
        }
    }
}

fn rastrigin_term<F: Scalar>(z: F) -> F {
    let ten = F::lit(10.0);
    z * z - ten * (F::lit(2.0) * F::PI() * z).cos() + ten
}

/// Haar-distributed orthogonal matrix (row-major): Gaussian entries, rows
/// orthonormalized with modified Gram-Schmidt.
fn random_orthogonal(dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut m: Vec<f64> = (0..dim * dim).map(|_| rng.sample(StandardNormal)).collect();
    for i in 0..dim {
        for j in 0..i {
            let dot: f64 = (0..dim).map(|k| m[i * dim + k] * m[j * dim + k]).sum();
            for k in 0..dim {
                m[i * dim + k] -= dot * m[j * dim + k];
            }
        }
        let norm = (0..dim).map(|k| m[i * dim + k].powi(2)).sum::<f64>().sqrt();
        for k in 0..dim {
            m[i * dim + k] /= norm;
        }
    }
    m
}

pub const SYNTHETIC_DEFAULT_DIM: usize = 100;

/// Names accepted by [`lookup`], in registry order.
pub const NAMES: [&str; 8] = [
    "f2_1d",
    "f3_1d",
    "shubert_1d",
    "quadratic_1d",
    "camel6_2d",
    "sphere_2d",
    "xor",
    "synthetic_highdim",
];

fn lit<F: Scalar>(v: f64) -> F {
    F::lit(v)
}

fn one_point<F: Scalar>(points: &[&[f64]], value: f64) -> Option<KnownOptimum<F>> {
    Some(KnownOptimum {
        points: points
            .iter()
            .map(|p| p.iter().map(|&v| lit(v)).collect())
            .collect(),
        value: lit(value),
    })
}

pub fn synthetic_highdim<F: Scalar>(dim: usize, seed: u64) -> Objective<F> {
    let rastrigin = ShiftedRastrigin::<F>::rotated(dim, seed);
    let optimum = KnownOptimum {
        points: vec![rastrigin.shift().to_vec()],
        value: F::zero(),
    };
    Objective::new(
        "synthetic_highdim",
        format!("shifted rotated Rastrigin, d={dim}, seed {seed:#x}"),
        vec![(lit(-5.12), lit(5.12)); dim],
        move |x: &[F]| rastrigin.eval(x),
        Some(optimum),
    )
}

/// Builds a registered objective by name.
pub fn lookup<F: Scalar>(name: &str) -> Option<Objective<F>> {
    let obj = match name {
        "f2_1d" => Objective::new(
            name,
            "sin(x) + sin(2x/3)",
            vec![(lit(3.1), lit(20.4))],
            |x: &[F]| f2_1d(x[0]),
            one_point(&[&[17.039_198_947_601_76]], -1.905_961_118_715_785),
        ),
        "f3_1d" => Objective::new(
            name,
            "-sum_{k=1..5} sin((k+1)x + k)",
            vec![(lit(-10.0), lit(10.0))],
            |x: &[F]| f3_1d(x[0]),
            one_point(
                &[
                    &[5.846_333_126_985_189],
                    &[-0.436_852_180_194_397_4],
                    &[-6.720_037_487_373_984],
                ],
                -3.372_897_872_829_974,
            ),
        ),
        "shubert_1d" => Objective::new(
            name,
            "-sum_{k=1..5} k sin((k+1)x + k)",
            vec![(lit(-10.0), lit(10.0))],
            |x: &[F]| shubert_1d(x[0]),
            one_point(
                &[
                    &[5.791_794_470_920_272],
                    &[-0.491_390_836_259_314_5],
                    &[-6.774_576_143_438_901],
                ],
                -12.031_249_442_167_14,
            ),
        ),
        "quadratic_1d" => Objective::new(
            name,
            "(x - 3)^2",
            vec![(lit(0.0), lit(10.0))],
            |x: &[F]| (x[0] - lit(3.0)) * (x[0] - lit(3.0)),
            one_point(&[&[3.0]], 0.0),
        ),
        "camel6_2d" => Objective::new(
            name,
            "six-hump camel-back",
            vec![(lit(-3.0), lit(3.0)), (lit(-2.0), lit(2.0))],
            |x: &[F]| camel6_2d(x[0], x[1]),
            one_point(
                &[
                    &[0.089_842_013_100_318_06, -0.712_656_403_020_739_6],
                    &[-0.089_842_013_100_318_06, 0.712_656_403_020_739_6],
                ],
                -1.031_628_453_489_877_4,
            ),
        ),
        "sphere_2d" => Objective::new(
            name,
            "x^2 + y^2",
            vec![(lit(-10.0), lit(10.0)); 2],
            |x: &[F]| sphere(x),
            one_point(&[&[0.0, 0.0]], 0.0),
        ),
        "xor" => Objective::new(
            name,
            "2-2-1 sigmoid network, summed squared XOR error",
            vec![(lit(-20.0), lit(20.0)); 9],
            |x: &[F]| xor_error(x),
            None,
        ),
        "synthetic_highdim" => synthetic_highdim(SYNTHETIC_DEFAULT_DIM, SYNTHETIC_SHIFT_SEED),
        _ => return None,
    };
    Some(obj)
}

/// Every registered objective at its default dimension.
pub fn registry<F: Scalar>() -> Vec<Objective<F>> {
    NAMES.iter().filter_map(|n| lookup(n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_spot_checks() {
        assert_eq!(f2_1d(0.0f64), 0.0);
        assert_eq!(camel6_2d(0.0f64, 0.0), 0.0);
        assert_eq!(sphere(&[3.0f64, 4.0]), 25.0);
        // Each sine term is at most 1, so f3 >= -5.
        let min = (0..200_001)
            .map(|i| f3_1d(-10.0 + 20.0 * i as f64 / 200_000.0))
            .fold(f64::INFINITY, f64::min);
        assert!(min >= -5.0);
    }

    #[test]
    fn xor_examples() {
        assert_eq!(xor_error(&[0.0f64; 9]), 1.0);
        // OR and NAND hidden units feeding an AND output.
        let w = [20.0, 20.0, -20.0, -20.0, -10.0, 30.0, 20.0, 20.0, -30.0];
        assert!(xor_error(&w) < 1e-4, "{}", xor_error(&w));
        let net = XorNetwork::new(w);
        assert!(net.forward(0.0, 1.0) > 0.99 && net.forward(1.0, 1.0) < 0.01);
    }

    #[test]
    fn xor_hidden_permutation_symmetry() {
        let w = [1.3, -0.7, 2.2, 0.4, -1.1, 0.9, 3.0, -2.5, 0.2];
        let swapped = [w[2], w[3], w[0], w[1], w[5], w[4], w[7], w[6], w[8]];
        assert_eq!(xor_error(&w), xor_error(&swapped));
    }

    #[test]
    fn xor_error_bounded_and_positive() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let w: Vec<f64> = (0..9).map(|_| rng.gen_range(-20.0..=20.0)).collect();
            let e = xor_error(&w);
            assert!(e > 0.0 && e <= 4.0, "{e}");
        }
        let corner = [20.0, 20.0, -20.0, -20.0, -20.0, 20.0, 20.0, 20.0, -20.0];
        assert!(xor_error(&corner) > 0.0);
    }

    #[test]
    fn shifted_rastrigin_examples() {
        let r = ShiftedRastrigin::<f64>::new(7, 3);
        assert_eq!(r.eval(r.shift()), 0.0);
        let mut x = r.shift().to_vec();
        x[0] += 1.0;
        assert!((r.eval(&x) - 1.0).abs() < 1e-12);
        assert!(r.shift().iter().all(|s| s.abs() <= 2.5));
    }

    #[test]
    fn rotation_is_orthogonal_and_keeps_the_optimum() {
        let d = 12;
        let r = ShiftedRastrigin::<f64>::rotated(d, 9);
        assert_eq!(r.shift(), ShiftedRastrigin::<f64>::new(d, 9).shift());
        let m = r.rotation().unwrap();
        for i in 0..d {
            for j in 0..d {
                let dot: f64 = (0..d).map(|k| m[i * d + k] * m[j * d + k]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12, "({i},{j}) {dot}");
            }
        }
        assert!(r.eval(r.shift()).abs() < 1e-12);
        let mut x = r.shift().to_vec();
        x[3] += 0.5;
        assert!(r.eval(&x) > 0.0);
    }

    #[test]
    fn known_optima_match_values() {
        for obj in registry::<f64>() {
            if let Some(opt) = obj.known_optimum() {
                for p in &opt.points {
                    let v = obj.eval(p);
                    assert!((v - opt.value).abs() <= 1e-9, "{}: {v} vs {}", obj.name(), opt.value);
                    for (x, (lo, hi)) in p.iter().zip(obj.bounds()) {
                        assert!(x >= lo && x <= hi);
                    }
                }
            }
        }
    }

    #[test]
    fn lookup_and_registry() {
        assert!(lookup::<f64>("nope").is_none());
        let reg = registry::<f64>();
        assert_eq!(reg.len(), NAMES.len());
        assert_eq!(lookup::<f64>("xor").unwrap().dimension(), 9);
        assert_eq!(lookup::<f64>("synthetic_highdim").unwrap().dimension(), 100);
        assert_eq!(lookup::<f32>("camel6_2d").unwrap().dimension(), 2);
    }

    #[test]
    fn objectives_are_pure() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for obj in registry::<f64>() {
            let x: Vec<f64> = obj
                .bounds()
                .iter()
                .map(|&(lo, hi)| rng.gen_range(lo..=hi))
                .collect();
            let first = obj.eval(&x).to_bits();
            assert!((0..1000).all(|_| obj.eval(&x).to_bits() == first), "{}", obj.name());
        }
    }

    #[test]
    fn known_optimum_distance_picks_nearest() {
        let obj = lookup::<f64>("camel6_2d").unwrap();
        let opt = obj.known_optimum().unwrap();
        assert!(opt.distance(&[-0.0898, 0.7126]) < 1e-3);
        assert!(opt.distance(&[0.0898, -0.7127]) < 1e-3);
    }
}
