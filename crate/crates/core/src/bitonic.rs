//! Bitonic sorting networks over one to sixteen vectors.
//!
//! A network is a list of compare-exchange stages. Inside one vector a stage
//! pairs each lane with a partner lane given by a permutation index vector,
//! and a direction predicate says which lane of each pair keeps the maximum.
//! The in-vector stages are derived once per width by [`BitonicNetwork::new`]
//! with the same predicate recurrences a hardware kernel would run in its
//! loop, and then replayed for every vector.
//!
//! Several vectors are merged with [`exchange_reverse`] (the symmetric stage
//! across two vectors) followed by lanewise min/max between vectors and a
//! final in-vector stair. Vector counts that are not a power of two behave as
//! if the missing vectors were filled with the sentinel.

use smallvec::SmallVec;

use crate::backend::VectorBackend;
use crate::element::SortKey;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::register::Register;
use crate::vector::{Predicate, Vector};
use crate::view::{AosView, ScalarView, SoaView, SortView};

/// Most vectors [`sort_vectors`] and [`small_sort`] accept.
pub const MAX_VECTORS: usize = 16;

/// Loop state of the in-vector network: which lanes take the maximum, the
/// partner offsets of the current symmetric stage, and its half-block size.
#[derive(Clone, Debug, PartialEq)]
pub struct StageState {
    pub dir: Predicate,
    pub shift: Vector<i32>,
    pub step_out: usize,
}

impl StageState {
    /// The first symmetric stage: neighbouring lanes, `[F, T, F, T, ...]`.
    pub fn initial<B: VectorBackend>(b: &B) -> Self {
        let dir = b.interleave_low_pred(&b.all_false(), &b.all_true());
        let shift = b.select(&dir, &b.dup(-1), &b.dup(1));
        Self {
            dir,
            shift,
            step_out: 1,
        }
    }

    /// Partner lane of every lane in the current symmetric stage.
    pub fn partners<B: VectorBackend>(&self, b: &B) -> Vector<i32> {
        b.add(&b.index_vector(), &self.shift)
    }

    /// Moves to the symmetric stage over blocks twice as large.
    pub fn advance<B: VectorBackend>(&mut self, b: &B) {
        let jump = b.dup(2 * self.step_out as i32);
        self.dir = b.interleave_low_pred(&self.dir, &self.dir);
        self.shift = b.select(&self.dir, &b.sub(&self.shift, &jump), &b.add(&self.shift, &jump));
        self.step_out *= 2;
    }
}

#[derive(Clone, Debug)]
struct Stage {
    partner: Vector<i32>,
    take_max: Predicate,
}

impl Stage {
    #[inline]
    fn apply<B: VectorBackend, R: Register>(&self, b: &B, r: &R) -> R {
        let partner = r.permute(b, &self.partner);
        R::compare_exchange(b, &self.take_max, r, &partner)
    }
}

/// Stair stages with distances `step_out, step_out/2, ..., 1`. `dir` must
/// alternate in runs of `step_out`.
fn stair_stages<B: VectorBackend>(b: &B, dir: Predicate, step_out: usize, out: &mut Vec<Stage>) {
    let idx = b.index_vector();
    let mut dir = dir;
    let mut incr = b.dup(step_out as i32);
    let mut distance = step_out;
    loop {
        out.push(Stage {
            partner: b.add(&idx, &b.negate_where(&dir, &incr)),
            take_max: dir.clone(),
        });
        if distance == 1 {
            break;
        }
        dir = b.concat_odd(&dir, &dir);
        incr = b.halve(&incr);
        distance /= 2;
    }
}

/// Direction predicate with runs of `run` lanes, `run` a power of two below the width.
fn blocked_dir<B: VectorBackend>(b: &B, run: usize) -> Predicate {
    let mut dir = b.interleave_low_pred(&b.all_false(), &b.all_true());
    let mut r = 1;
    while r < run {
        dir = b.interleave_low_pred(&dir, &dir);
        r *= 2;
    }
    dir
}

fn check_stair_step(width: usize, step_out: usize) -> Result<()> {
    if step_out.is_power_of_two() && step_out <= width / 2 {
        Ok(())
    } else {
        Err(Error::InvalidStairStep {
            step: step_out,
            width,
        })
    }
}

/// Precomputed network for one width, shared by every sort using that width.
#[derive(Clone, Debug)]
pub struct BitonicNetwork {
    width: usize,
    one_vector: Vec<Stage>,
    full_stair: Vec<Stage>,
    skip_optimizations: bool,
}

impl BitonicNetwork {
    pub fn new<B: VectorBackend>(b: &B) -> Self {
        let w = b.width();
        let mut one_vector = Vec::new();
        let mut state = StageState::initial(b);
        while state.step_out < w {
            one_vector.push(Stage {
                partner: state.partners(b),
                take_max: state.dir.clone(),
            });
            if state.step_out > 1 {
                let inner = b.concat_odd(&state.dir, &state.dir);
                stair_stages(b, inner, state.step_out / 2, &mut one_vector);
            }
            state.advance(b);
        }

        let mut full_stair = Vec::new();
        stair_stages(b, blocked_dir(b, w / 2), w / 2, &mut full_stair);

        Self {
            width: w,
            one_vector,
            full_stair,
            skip_optimizations: false,
        }
    }

    /// Enables the min/max and already-sorted shortcuts.
    pub fn with_skip_optimizations(mut self, enabled: bool) -> Self {
        self.skip_optimizations = enabled;
        self
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn skip_optimizations(&self) -> bool {
        self.skip_optimizations
    }

    /// Compare-exchange stages in the one-vector sort.
    pub fn one_vector_stages(&self) -> usize {
        self.one_vector.len()
    }

    pub fn sort_one_vector<B: VectorBackend, R: Register>(&self, b: &B, v: &R) -> R {
        debug_assert_eq!(b.width(), self.width);
        if self.skip_optimizations && vector_is_sorted(b, v.keys()) {
            return v.clone();
        }
        self.one_vector.iter().fold(v.clone(), |r, s| s.apply(b, &r))
    }

    /// Sorts a vector that is bitonic over its full width.
    fn full_stair<B: VectorBackend, R: Register>(&self, b: &B, v: &R) -> R {
        if self.skip_optimizations && vector_is_sorted(b, v.keys()) {
            return v.clone();
        }
        self.full_stair.iter().fold(v.clone(), |r, s| s.apply(b, &r))
    }

    /// Sorts the concatenation of `regs` in place.
    pub fn sort_vectors<B: VectorBackend, R: Register>(&self, b: &B, regs: &mut [R]) -> Result<()> {
        let count = regs.len();
        if count > MAX_VECTORS {
            return Err(Error::TooManyVectors {
                count,
                max: MAX_VECTORS,
            });
        }
        for r in regs.iter_mut() {
            *r = self.sort_one_vector(b, r);
        }

        let padded = count.next_power_of_two();
        let mut block = 2;
        while block <= padded {
            let half = block / 2;
            for start in (0..count).step_by(block) {
                self.merge_block(b, regs, start, half);
            }
            for r in regs.iter_mut() {
                *r = self.full_stair(b, r);
            }
            block *= 2;
        }
        Ok(())
    }

    /// Cross-vector part of merging the two sorted halves of one block.
    fn merge_block<B: VectorBackend, R: Register>(&self, b: &B, regs: &mut [R], start: usize, half: usize) {
        let count = regs.len();
        for k in 0..half {
            let lo = start + half - 1 - k;
            let hi = start + half + k;
            if lo >= count {
                continue;
            }
            // An absent upper vector is all sentinel: the exchange only
            // reverses the lower one. Skipping the reversal would leave the
            // lower half in an inconsistent lane order.
            if hi >= count || (self.skip_optimizations && skip_exchange(b, regs[lo].keys(), regs[hi].keys())) {
                regs[lo] = regs[lo].reverse(b);
                continue;
            }
            let (l, h) = exchange_reverse(b, &regs[lo], &regs[hi]);
            regs[lo] = l;
            regs[hi] = h;
        }

        let mut distance = half / 2;
        while distance >= 1 {
            let end = (start + 2 * half).min(count);
            for j in start..end {
                if (j - start) % (2 * distance) >= distance || j + distance >= count {
                    continue;
                }
                let (a, c) = (&regs[j], &regs[j + distance]);
                if self.skip_optimizations && skip_exchange(b, a.keys(), c.keys()) {
                    continue;
                }
                let (l, h) = R::min_max(b, a, c);
                regs[j] = l;
                regs[j + distance] = h;
            }
            distance /= 2;
        }
    }

    /// Sorts `interval` of `view`, which holds at most `16 * W` records.
    pub fn small_sort<B: VectorBackend, S: SortView>(&self, b: &B, view: &mut S, interval: Interval) -> Result<()> {
        interval.check_within(view.len())?;
        let w = self.width;
        let capacity = MAX_VECTORS * w;
        let mut n = interval.len();
        if n > capacity {
            return Err(Error::SmallSortCapacity { len: n, capacity });
        }
        if n <= 1 {
            return Ok(());
        }

        if S::Reg::HAS_PAYLOAD && !n.is_multiple_of(w) {
            // Padding lanes carry the sentinel key with a dummy payload. A
            // real record with the sentinel key could trade places with one,
            // so those records are moved to the back first.
            n = move_sentinels_back(view, interval);
            if n <= 1 {
                return Ok(());
            }
        }

        let start = interval.start;
        let vectors = n.div_ceil(w);
        let rem = n - (vectors - 1) * w;
        let mut regs: SmallVec<[S::Reg; MAX_VECTORS]> = (0..vectors)
            .map(|i| {
                let active = if i + 1 == vectors { rem } else { w };
                view.load(b, start + i * w, active)
            })
            .collect();
        if rem < w {
            let last = regs.last_mut().expect("at least one vector");
            *last = S::Reg::select(b, &b.first_n(rem), last, &S::Reg::sentinel(b));
        }

        self.sort_vectors(b, &mut regs)?;

        for (i, r) in regs.iter().enumerate() {
            let active = if i + 1 == vectors { rem } else { w };
            view.store(b, start + i * w, active, r);
        }
        Ok(())
    }
}

fn move_sentinels_back<S: SortView>(view: &mut S, interval: Interval) -> usize {
    let mut end = interval.end;
    let mut i = interval.start;
    while i < end {
        if view.key(i) == S::Key::SENTINEL {
            end -= 1;
            view.swap(i, end);
        } else {
            i += 1;
        }
    }
    end - interval.start
}

/// Sorts the lanes of one vector.
pub fn sort_one_vector<B: VectorBackend, R: Register>(b: &B, v: &R) -> R {
    BitonicNetwork::new(b).sort_one_vector(b, v)
}

/// Symmetric stage across two vectors: `v1` is reversed and compared lanewise
/// with `v2`. Returns (minimums, maximums).
pub fn exchange_reverse<B: VectorBackend, R: Register>(b: &B, v1: &R, v2: &R) -> (R, R) {
    R::min_max(b, &v1.reverse(b), v2)
}

/// Stair stages with distances `step_out` down to 1. Every aligned block of
/// `2 * step_out` lanes that was bitonic comes out sorted.
pub fn stair_stage<B: VectorBackend, R: Register>(b: &B, v: &R, step_out: usize) -> Result<R> {
    check_stair_step(b.width(), step_out)?;
    let mut stages = Vec::new();
    stair_stages(b, blocked_dir(b, step_out), step_out, &mut stages);
    Ok(stages.iter().fold(v.clone(), |r, s| s.apply(b, &r)))
}

/// Sorts the concatenation of up to [`MAX_VECTORS`] vectors in place.
pub fn sort_vectors<B: VectorBackend, R: Register>(b: &B, regs: &mut [R]) -> Result<()> {
    BitonicNetwork::new(b).sort_vectors(b, regs)
}

/// True when the lanes are non-decreasing: the vector is compared with
/// itself shifted one lane to the left.
pub fn vector_is_sorted<B: VectorBackend, T: SortKey>(b: &B, v: &Vector<T>) -> bool {
    let w = b.width();
    let tail = b.not(&b.first_n(1));
    let shifted = b.compact(&tail, v);
    let head = b.first_n(w - 1);
    b.count_true(&b.and(&head, &b.compare_lte(v, &shifted))) == w - 1
}

/// True when every lane of `lower` is at most every lane of `upper`, in
/// which case merging them only has to reverse `lower`.
pub fn skip_exchange<B: VectorBackend, T: SortKey>(b: &B, lower: &Vector<T>, upper: &Vector<T>) -> bool {
    b.reduce_max(lower) <= b.reduce_min(upper)
}

/// Sorts a slice of at most `16 * W` keys.
pub fn small_sort<B: VectorBackend, T: SortKey>(b: &B, data: &mut [T]) -> Result<()> {
    let len = data.len();
    BitonicNetwork::new(b).small_sort(b, &mut ScalarView::new(data), Interval::of_len(len))
}

/// Sorts keys and carries the payload of each key along (two arrays).
pub fn small_sort_kv<B, K, V>(b: &B, keys: &mut [K], payloads: &mut [V]) -> Result<()>
where
    B: VectorBackend,
    K: SortKey,
    V: crate::element::Lane,
{
    let len = keys.len();
    let mut view = SoaView::new(keys, payloads)?;
    BitonicNetwork::new(b).small_sort(b, &mut view, Interval::of_len(len))
}

/// Sorts `(key, payload)` pairs by key.
pub fn small_sort_pairs<B, K, V>(b: &B, pairs: &mut [(K, V)]) -> Result<()>
where
    B: VectorBackend,
    K: SortKey,
    V: crate::element::Lane,
{
    let len = pairs.len();
    BitonicNetwork::new(b).small_sort(b, &mut AosView::new(pairs), Interval::of_len(len))
}
