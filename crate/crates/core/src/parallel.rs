//! Task-parallel Quicksort over per-worker interval lists.
//!
//! Every worker owns a double-ended list of intervals. A worker partitions
//! its interval, pushes the right part onto its own list when it is larger
//! than the L1 budget (sorting it on the spot otherwise), and continues on
//! the left part. Out of work, it pops its own list as a stack and then
//! steals the oldest interval of the nearest worker that has one, nearest by
//! id distance. Workers that find nothing become idle; they all stop once
//! every worker is idle and no interval is queued.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;

use crate::backend::VectorBackend;
use crate::bitonic::BitonicNetwork;
use crate::element::{Lane, SortKey};
use crate::error::Result;
use crate::hybrid::{check_nan, sort_interval, split, SortConfig, SortStats};
use crate::interval::Interval;
use crate::view::{AosView, ScalarView, SoaView, SortView};

/// Victim order of one worker: itself, then `i+1, i-1, i+2, i-2, ...`,
/// skipping ids outside `[0, workers)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StealOrder {
    order: Vec<usize>,
}

impl StealOrder {
    pub fn new(worker: usize, workers: usize) -> Self {
        assert!(worker < workers, "worker {worker} out of range for {workers} workers");
        let mut order = Vec::with_capacity(workers);
        order.push(worker);
        let mut d = 1;
        while order.len() < workers {
            if worker + d < workers {
                order.push(worker + d);
            }
            if d <= worker {
                order.push(worker - d);
            }
            d += 1;
        }
        Self { order }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }
}

/// Per-worker interval lists with idle accounting.
#[derive(Debug)]
pub struct BucketSet {
    lists: Vec<Mutex<VecDeque<Interval>>>,
    orders: Vec<StealOrder>,
    idle: AtomicUsize,
    /// Intervals pushed and not yet popped. Raised before the push.
    queued: AtomicUsize,
    aborted: AtomicBool,
}

impl BucketSet {
    pub fn new(workers: usize) -> Self {
        assert!(workers > 0, "at least one worker");
        Self {
            lists: (0..workers).map(|_| Mutex::new(VecDeque::new())).collect(),
            orders: (0..workers).map(|i| StealOrder::new(i, workers)).collect(),
            idle: AtomicUsize::new(0),
            queued: AtomicUsize::new(0),
            aborted: AtomicBool::new(false),
        }
    }

    pub fn workers(&self) -> usize {
        self.lists.len()
    }

    pub fn idle_count(&self) -> usize {
        self.idle.load(Ordering::SeqCst)
    }

    pub fn queued(&self) -> usize {
        self.queued.load(Ordering::SeqCst)
    }

    pub fn insert(&self, worker: usize, interval: Interval) {
        self.queued.fetch_add(1, Ordering::SeqCst);
        self.lists[worker].lock().expect("bucket lock").push_back(interval);
    }

    /// Own list from the newest end, then other lists from the oldest end.
    pub fn steal_task(&self, worker: usize) -> Option<Interval> {
        // Never hold two list locks at once: two workers stealing from each
        // other would each wait for the lock the other holds.
        let own = self.lists[worker].lock().expect("bucket lock").pop_back();
        let found = own.or_else(|| {
            self.orders[worker].as_slice()[1..]
                .iter()
                .find_map(|&v| self.lists[v].lock().expect("bucket lock").pop_front())
        });
        if found.is_some() {
            self.queued.fetch_sub(1, Ordering::SeqCst);
        }
        found
    }

    fn finished(&self) -> bool {
        self.queued() == 0 && self.idle_count() == self.workers() && self.queued() == 0
    }

    fn abort(&self) {
        self.aborted.store(true, Ordering::SeqCst);
    }

    fn is_aborted(&self) -> bool {
        self.aborted.load(Ordering::SeqCst)
    }
}

/// What a worker should do next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Poll {
    Work(Interval),
    /// Nothing to take right now, but other workers may still produce work.
    Wait,
    Done,
}

/// Idle/active state machine of one worker.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WorkerState {
    id: usize,
    idle: bool,
}

impl WorkerState {
    pub fn new(id: usize) -> Self {
        Self { id, idle: false }
    }

    pub fn is_idle(&self) -> bool {
        self.idle
    }

    pub fn poll(&mut self, buckets: &BucketSet) -> Poll {
        if buckets.is_aborted() {
            return Poll::Done;
        }
        if !self.idle {
            if let Some(iv) = buckets.steal_task(self.id) {
                return Poll::Work(iv);
            }
            buckets.idle.fetch_add(1, Ordering::SeqCst);
            self.idle = true;
        }
        if buckets.queued() > 0 {
            // Leave the idle count before taking work so that no worker ever
            // counts as idle while holding an interval.
            buckets.idle.fetch_sub(1, Ordering::SeqCst);
            if let Some(iv) = buckets.steal_task(self.id) {
                self.idle = false;
                return Poll::Work(iv);
            }
            buckets.idle.fetch_add(1, Ordering::SeqCst);
            return Poll::Wait;
        }
        if buckets.finished() {
            Poll::Done
        } else {
            Poll::Wait
        }
    }
}

/// Counters of a parallel sort, summed over workers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParallelStats {
    /// Partitioning steps taken on intervals above the L1 budget.
    pub partition_steps: u64,
    /// Right parts pushed to a list.
    pub insertions: u64,
    /// Right parts within the L1 budget, sorted by the worker that split them.
    pub inline_sorts: u64,
    /// Steps whose right part was a run of keys equal to the pivot.
    pub equal_runs: u64,
    /// Intervals taken from a list.
    pub tasks_executed: u64,
    /// Counters of the sequential sorts below the L1 budget.
    pub sequential: SortStats,
}

impl ParallelStats {
    fn merge(&mut self, o: &ParallelStats) {
        self.partition_steps += o.partition_steps;
        self.insertions += o.insertions;
        self.inline_sorts += o.inline_sorts;
        self.equal_runs += o.equal_runs;
        self.tasks_executed += o.tasks_executed;
        self.sequential.merge(&o.sequential);
    }
}

/// Every interval pushed to a list and every interval taken from one.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Trace {
    pub inserted: Vec<Interval>,
    pub executed: Vec<Interval>,
}

struct Shared<'a, B> {
    b: &'a B,
    net: &'a BitonicNetwork,
    config: &'a SortConfig,
    buckets: &'a BucketSet,
    trace: Option<&'a Mutex<Trace>>,
}

impl<B> Shared<'_, B> {
    fn log(&self, f: impl FnOnce(&mut Trace)) {
        if let Some(t) = self.trace {
            f(&mut t.lock().expect("trace lock"));
        }
    }
}

fn fits_l1<S: SortView>(iv: Interval, config: &SortConfig) -> bool {
    iv.len() * S::RECORD_BYTES <= config.l1_bytes
}

/// Sorts `interval`, handing right parts above the L1 budget to the lists.
fn core_step<B: VectorBackend, S: SortView>(
    sh: &Shared<'_, B>,
    view: &mut S,
    interval: Interval,
    worker: usize,
    stats: &mut ParallelStats,
) -> Result<()> {
    let mut iv = interval;
    while iv.len() > 1 {
        if fits_l1::<S>(iv, sh.config) {
            return sort_interval(sh.b, sh.net, view, iv, sh.config, &mut stats.sequential);
        }
        let s = split(sh.b, view, iv)?;
        stats.partition_steps += 1;
        if s.settled_equal {
            stats.equal_runs += 1;
        } else if fits_l1::<S>(s.second, sh.config) {
            sort_interval(sh.b, sh.net, view, s.second, sh.config, &mut stats.sequential)?;
            stats.inline_sorts += 1;
        } else {
            sh.log(|t| t.inserted.push(s.second));
            sh.buckets.insert(worker, s.second);
            stats.insertions += 1;
        }
        iv = s.first;
    }
    Ok(())
}

/// Raises the abort flag if the worker unwinds, so the others stop waiting.
struct AbortOnPanic<'a>(&'a BucketSet);

impl Drop for AbortOnPanic<'_> {
    fn drop(&mut self) {
        if std::thread::panicking() {
            self.0.abort();
        }
    }
}

fn worker_loop<B: VectorBackend, S: SortView>(sh: &Shared<'_, B>, mut view: S, id: usize) -> Result<ParallelStats> {
    let _guard = AbortOnPanic(sh.buckets);
    let mut stats = ParallelStats::default();
    let mut state = WorkerState::new(id);
    loop {
        match state.poll(sh.buckets) {
            Poll::Work(iv) => {
                sh.log(|t| t.executed.push(iv));
                stats.tasks_executed += 1;
                if let Err(e) = core_step(sh, &mut view, iv, id, &mut stats) {
                    sh.buckets.abort();
                    return Err(e);
                }
            }
            Poll::Wait => std::thread::yield_now(),
            Poll::Done => return Ok(stats),
        }
    }
}

fn run<B: VectorBackend, S: SortView>(
    b: &B,
    view: &mut S,
    config: &SortConfig,
    trace: Option<&Mutex<Trace>>,
) -> Result<ParallelStats> {
    config.validate()?;
    check_nan(view)?;
    let net = config.network(b);
    let root = Interval::of_len(view.len());
    let mut total = ParallelStats::default();
    if fits_l1::<S>(root, config) {
        sort_interval(b, &net, view, root, config, &mut total.sequential)?;
        return Ok(total);
    }

    let buckets = BucketSet::new(config.workers);
    let sh = Shared {
        b,
        net: &net,
        config,
        buckets: &buckets,
        trace,
    };
    sh.log(|t| t.inserted.push(root));
    buckets.insert(0, root);

    let results: Vec<Result<ParallelStats>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (1..config.workers)
            .map(|id| {
                // SAFETY: workers only touch the intervals they hold, and
                // the intervals held at any time are pairwise disjoint.
                let alias = unsafe { view.alias() };
                let sh = &sh;
                scope.spawn(move || worker_loop(sh, alias, id))
            })
            .collect();
        // SAFETY: as above; worker 0 runs on the calling thread.
        let mine = worker_loop(&sh, unsafe { view.alias() }, 0);
        let mut all = vec![mine];
        all.extend(handles.into_iter().map(|h| h.join().expect("sort worker panicked")));
        all
    });
    for r in results {
        total.merge(&r?);
    }
    Ok(total)
}

/// Sorts every record of `view` by key using `config.workers` threads.
pub fn parallel_sort_view<B: VectorBackend, S: SortView>(b: &B, view: &mut S, config: &SortConfig) -> Result<ParallelStats> {
    run(b, view, config, None)
}

/// As [`parallel_sort_view`], also recording every interval pushed to and
/// taken from the lists.
pub fn parallel_sort_traced<B: VectorBackend, S: SortView>(
    b: &B,
    view: &mut S,
    config: &SortConfig,
) -> Result<(ParallelStats, Trace)> {
    let trace = Mutex::new(Trace::default());
    let stats = run(b, view, config, Some(&trace))?;
    Ok((stats, trace.into_inner().expect("trace lock")))
}

pub fn parallel_sort<B: VectorBackend, T: SortKey>(b: &B, data: &mut [T], config: &SortConfig) -> Result<ParallelStats> {
    parallel_sort_view(b, &mut ScalarView::new(data), config)
}

pub fn parallel_sort_kv<B: VectorBackend, K: SortKey, V: Lane>(
    b: &B,
    keys: &mut [K],
    payloads: &mut [V],
    config: &SortConfig,
) -> Result<ParallelStats> {
    parallel_sort_view(b, &mut SoaView::new(keys, payloads)?, config)
}

pub fn parallel_sort_pairs<B: VectorBackend, K: SortKey, V: Lane>(
    b: &B,
    pairs: &mut [(K, V)],
    config: &SortConfig,
) -> Result<ParallelStats> {
    parallel_sort_view(b, &mut AosView::new(pairs), config)
}
