//! Deterministic global optimization over fixed-point bit encodings.
//!
//! The optimizer keeps a single parent bit-string. Each step builds `2n - 1`
//! children from an `n`-bit parent by Gray-encoding it, complementing one
//! segment of a binary subdivision tree and decoding back, then moves to the
//! strictly best child. When no child improves, the per-variable resolution
//! doubles and the search continues until the maximum resolution converges.
//!
//! The crate is organized as:
//!
//! * [`bitstring`] – bit-strings, Gray coding, the segment tree and child generation.
//! * [`encoding`] – the map between bit-strings and points in a bounded box.
//! * [`search`] – the main loop, dynamic resolution and multi-start driver.
//! * [`objectives`] – the benchmark objective suite and its registry.
//! * [`baselines`] – Monte Carlo, gradient descent, a binary GA and simulated annealing.
//! * [`report`] – result and trace serialization (CSV and JSON).
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below are the concrete types used by the command-line harness.
//!
//! ```
//! use dgo::{optimize, DgoConfig};
//!
//! let quadratic = |x: &[f64]| (x[0] - 3.0).powi(2);
//! let cfg = DgoConfig { initial_bits: 8, max_bits: 32, ..DgoConfig::default() };
//! let result = optimize(&quadratic, &[(0.0, 10.0)], &cfg, None).unwrap();
//! assert!((result.best_point[0] - 3.0).abs() < 1e-6);
//! ```

pub mod baselines;
pub mod bitstring;
pub mod search;
pub mod encoding;
mod error;
pub mod objectives;
pub mod report;
mod run;
mod scalar;

pub use bitstring::{BitString, Segment, Transform};
pub use search::{dgo_step, multi_start, optimize, DgoConfig, MultiStartResult, StepOutcome};
pub use encoding::{SearchSpace, VariableSpec};
pub use error::{Error, Result};
pub use objectives::{Evaluate, KnownOptimum, Objective};
pub use run::{Event, IterationRecord, RunResult, Termination};
pub use scalar::Scalar;

/// Default seed used whenever a caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x0D60_5EED;

pub type Objective64 = Objective<f64>;
pub type Objective32 = Objective<f32>;
pub type RunResult64 = RunResult<f64>;
pub type RunResult32 = RunResult<f32>;
pub type SearchSpace64 = SearchSpace<f64>;
pub type SearchSpace32 = SearchSpace<f32>;
pub type MultiStartResult64 = MultiStartResult<f64>;
pub type BaselineConfig64 = baselines::BaselineConfig<f64>;

/// Mixes a base seed with a stream index (SplitMix64 finalizer), so
/// independent runs get decorrelated generators that do not depend on
/// execution order.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
