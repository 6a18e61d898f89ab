use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bit-string length {actual} does not match search space width {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("coordinate {index} = {value} lies outside [{lower}, {upper}]")]
    OutOfBounds {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("point has {actual} coordinates, search space has {expected}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid variable {index}: {reason}")]
    InvalidVariable { index: usize, reason: String },

    #[error("search space must have at least one variable")]
    EmptySpace,

    #[error("refining variable {index} from {bits} bits would exceed 64 bits")]
    WidthOverflow { index: usize, bits: u32 },

    #[error("invalid configuration: {0}")]
    Config(String),

    /// The objective returned NaN. `child` is the segment index of the
    /// offending child, or `None` for a parent evaluation.
    #[error("objective returned NaN (child {child:?})")]
    NotANumber { child: Option<usize> },
}

pub type Result<T> = std::result::Result<T, Error>;
