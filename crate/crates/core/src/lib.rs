//! In-place hybrid sorting over a runtime-width vector model.
//!
//! The vector width `W` is a value chosen when a backend is built, never a
//! compile-time constant, and every kernel is written against the
//! [`VectorBackend`] capability set. The pieces are:
//!
//! * [`bitonic`]: Bitonic networks for one to sixteen vectors and the
//!   sentinel-padded small-array sort.
//! * [`partition`]: an in-place vector partition around a pivot.
//! * [`hybrid`]: sequential Quicksort that hands small intervals to the
//!   Bitonic small sort.
//! * [`parallel`]: the same Quicksort spread over worker threads with
//!   per-worker interval lists and work stealing.
//! * [`bench`]: input generation, verification and timing for the CLI.
//!
//! Keys can be sorted alone, with payloads in a separate array, or as
//! interleaved `(key, payload)` pairs.
//!
//! ```
//! use vexsort::{sort, ScalarBackend, SortConfig};
//!
//! let backend = ScalarBackend::new(8)?;
//! let mut data = vec![3, 1, 2, 0, 5];
//! sort(&backend, &mut data, &SortConfig::default())?;
//! assert_eq!(data, [0, 1, 2, 3, 5]);
//! # Ok::<(), vexsort::Error>(())
//! ```

pub mod backend;
pub mod bench;
pub mod bitonic;
pub mod element;
pub mod error;
pub mod hybrid;
pub mod interval;
pub mod parallel;
pub mod partition;
pub mod register;
pub mod vector;
pub mod view;

pub use backend::{native_width, ScalarBackend, TrafficCounter, VectorBackend, WIDTH_ENV};
pub use bitonic::{
    exchange_reverse, skip_exchange, small_sort, small_sort_kv, small_sort_pairs, sort_one_vector, sort_vectors,
    stair_stage, vector_is_sorted, BitonicNetwork, StageState, MAX_VECTORS,
};
pub use element::{Lane, SortKey};
pub use error::{Error, Result};
pub use hybrid::{sort, sort_kv, sort_pairs, sort_view, SortConfig, SortStats};
pub use interval::Interval;
pub use parallel::{
    parallel_sort, parallel_sort_kv, parallel_sort_pairs, parallel_sort_traced, parallel_sort_view, BucketSet,
    ParallelStats, StealOrder, Trace,
};
pub use partition::{
    partition_in_place, partition_in_place_kv, partition_in_place_pairs, partition_view, select_pivot,
    PartitionResult, PartitionRule,
};
pub use register::{KvVector, Register};
pub use vector::{Predicate, Vector};
pub use view::{AosView, ScalarView, SoaView, SortView};
