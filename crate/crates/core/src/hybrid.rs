//! Sequential Quicksort with a Bitonic base case.
//!
//! Intervals are partitioned around a median-of-five pivot until they fit in
//! `small_threshold_vectors` vectors, and then sorted by the Bitonic small
//! sort. Recursion is an explicit stack: the larger side is pushed and the
//! loop continues on the smaller one, so the stack never holds more than
//! `log2(n)` intervals.

use crate::backend::VectorBackend;
use crate::bitonic::{BitonicNetwork, MAX_VECTORS};
use crate::element::{Lane, SortKey};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::partition::{partition_view, select_pivot, PartitionRule};
use crate::view::{AosView, ScalarView, SoaView, SortView};

/// Tuning knobs shared by the sequential and parallel drivers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortConfig {
    /// Intervals of at most this many vectors go to the Bitonic small sort.
    pub small_threshold_vectors: usize,
    /// Intervals of at most this many bytes are never handed to another worker.
    pub l1_bytes: usize,
    pub workers: usize,
    /// Enables the min/max and already-sorted shortcuts in the Bitonic kernels.
    pub enable_skip_optimizations: bool,
}

impl Default for SortConfig {
    fn default() -> Self {
        Self {
            small_threshold_vectors: MAX_VECTORS,
            l1_bytes: 64 * 1024,
            workers: 1,
            enable_skip_optimizations: false,
        }
    }
}

impl SortConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_VECTORS).contains(&self.small_threshold_vectors) {
            return Err(Error::InvalidConfig(format!(
                "small_threshold_vectors must be in [1, {MAX_VECTORS}], got {}",
                self.small_threshold_vectors
            )));
        }
        if self.l1_bytes == 0 {
            return Err(Error::InvalidConfig("l1_bytes must be positive".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub(crate) fn network<B: VectorBackend>(&self, b: &B) -> BitonicNetwork {
        BitonicNetwork::new(b).with_skip_optimizations(self.enable_skip_optimizations)
    }
}

/// Counters collected while sorting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SortStats {
    pub partition_steps: u64,
    pub small_sorts: u64,
    /// Runs of keys equal to the pivot that were settled in one step.
    pub equal_runs: u64,
    pub max_stack_depth: usize,
}

impl SortStats {
    pub(crate) fn merge(&mut self, other: &SortStats) {
        self.partition_steps += other.partition_steps;
        self.small_sorts += other.small_sorts;
        self.equal_runs += other.equal_runs;
        self.max_stack_depth = self.max_stack_depth.max(other.max_stack_depth);
    }
}

/// Outcome of one partitioning step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Split {
    pub first: Interval,
    pub second: Interval,
    /// The step found no key above the pivot and split off the keys equal
    /// to it instead; those are already in their final place.
    pub settled_equal: bool,
}

/// Partitions `interval` (at least two records) around its pivot.
///
/// The pivot is one of the keys, so the `<=` side is never empty. When the
/// other side is empty every key is at most the pivot, and a second pass
/// with `<` separates the keys equal to it. Without that pass an array of
/// equal keys would take a quadratic number of steps.
pub(crate) fn split<B: VectorBackend, S: SortView>(b: &B, view: &mut S, interval: Interval) -> Result<Split> {
    let pivot = select_pivot(view, interval)?;
    let p = partition_view(b, view, interval, pivot, PartitionRule::LessEqual)?;
    if !p.right.is_empty() {
        return Ok(Split {
            first: p.left,
            second: p.right,
            settled_equal: false,
        });
    }
    let p = partition_view(b, view, interval, pivot, PartitionRule::Less)?;
    Ok(Split {
        first: p.left,
        second: Interval::new(interval.end, interval.end),
        settled_equal: true,
    })
}

pub(crate) fn check_nan<S: SortView>(view: &S) -> Result<()> {
    match (0..view.len()).find(|&i| view.key(i).is_nan()) {
        Some(i) => Err(Error::NanInput(i)),
        None => Ok(()),
    }
}

/// Sorts `interval` of `view` with a prepared network.
pub(crate) fn sort_interval<B: VectorBackend, S: SortView>(
    b: &B,
    net: &BitonicNetwork,
    view: &mut S,
    interval: Interval,
    config: &SortConfig,
    stats: &mut SortStats,
) -> Result<()> {
    let threshold = config.small_threshold_vectors * b.width();
    let mut stack: Vec<Interval> = Vec::new();
    let mut current = Some(interval);
    loop {
        let iv = match current.take().or_else(|| stack.pop()) {
            Some(iv) => iv,
            None => return Ok(()),
        };
        if iv.len() <= 1 {
            continue;
        }
        if iv.len() <= threshold {
            net.small_sort(b, view, iv)?;
            stats.small_sorts += 1;
            continue;
        }

        let s = split(b, view, iv)?;
        stats.partition_steps += 1;
        stats.equal_runs += s.settled_equal as u64;
        let (smaller, larger) = if s.first.len() <= s.second.len() {
            (s.first, s.second)
        } else {
            (s.second, s.first)
        };
        if larger.len() > 1 {
            stack.push(larger);
            stats.max_stack_depth = stats.max_stack_depth.max(stack.len());
        }
        current = Some(smaller);
    }
}

/// Sorts every record of `view` by key.
pub fn sort_view<B: VectorBackend, S: SortView>(b: &B, view: &mut S, config: &SortConfig) -> Result<SortStats> {
    config.validate()?;
    check_nan(view)?;
    let mut stats = SortStats::default();
    let len = view.len();
    sort_interval(b, &config.network(b), view, Interval::of_len(len), config, &mut stats)?;
    Ok(stats)
}

pub fn sort<B: VectorBackend, T: SortKey>(b: &B, data: &mut [T], config: &SortConfig) -> Result<SortStats> {
    sort_view(b, &mut ScalarView::new(data), config)
}

/// Sorts `keys` and applies the same permutation to `payloads`.
pub fn sort_kv<B: VectorBackend, K: SortKey, V: Lane>(
    b: &B,
    keys: &mut [K],
    payloads: &mut [V],
    config: &SortConfig,
) -> Result<SortStats> {
    sort_view(b, &mut SoaView::new(keys, payloads)?, config)
}

/// Sorts `(key, payload)` pairs by key.
pub fn sort_pairs<B: VectorBackend, K: SortKey, V: Lane>(
    b: &B,
    pairs: &mut [(K, V)],
    config: &SortConfig,
) -> Result<SortStats> {
    sort_view(b, &mut AosView::new(pairs), config)
}
