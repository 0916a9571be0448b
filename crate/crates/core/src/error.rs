use thiserror::Error;

/// Errors reported by the sorting kernels and drivers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector width {0} is not a power of two in [2, 256]")]
    InvalidWidth(usize),

    #[error("{count} vectors requested but the bitonic kernels handle at most {max}")]
    TooManyVectors { count: usize, max: usize },

    #[error("{len} elements exceed the small-sort capacity of {capacity}")]
    SmallSortCapacity { len: usize, capacity: usize },

    #[error("stair step {step} is not a power of two no larger than half the width {width}")]
    InvalidStairStep { step: usize, width: usize },

    #[error("interval {start}..{end} is empty")]
    EmptyInterval { start: usize, end: usize },

    #[error("interval {start}..{end} is out of bounds for length {len}")]
    IntervalOutOfBounds { start: usize, end: usize, len: usize },

    #[error("input contains NaN at index {0}")]
    NanInput(usize),

    #[error("key and payload slices differ in length ({keys} vs {payloads})")]
    LengthMismatch { keys: usize, payloads: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown input kind `{0}`")]
    UnknownKind(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
