//! In-place vector partition and pivot selection.
//!
//! The partition keeps one vector from each end of the interval aside, which
//! opens a gap of `W` slots on both sides. Each loaded vector is split with a
//! comparison against the pivot: the lanes going left are compacted and
//! stored at the left write cursor, the others compacted and stored just
//! below the right write cursor. Loads are taken from whichever side has the
//! smaller gap, so neither side is ever overwritten before it is read. The
//! two saved vectors are flushed last.

use std::cmp::Ordering;

use crate::backend::VectorBackend;
use crate::element::{Lane, SortKey};
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::register::Register;
use crate::view::{AosView, ScalarView, SoaView, SortView};

/// Which records go to the left side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PartitionRule {
    /// `key <= pivot` goes left.
    #[default]
    LessEqual,
    /// `key < pivot` goes left.
    Less,
}

impl PartitionRule {
    #[inline(always)]
    fn goes_left<T: SortKey>(self, key: T, pivot: T) -> bool {
        match self {
            Self::LessEqual => key <= pivot,
            Self::Less => key < pivot,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PartitionResult {
    /// First index of the right side.
    pub boundary: usize,
    pub left: Interval,
    pub right: Interval,
}

impl PartitionResult {
    fn split(interval: Interval, boundary: usize) -> Self {
        Self {
            boundary,
            left: Interval::new(interval.start, boundary),
            right: Interval::new(boundary, interval.end),
        }
    }
}

/// Median of five probes spread evenly over the interval, both ends included.
/// Intervals shorter than five use the first, middle and last records.
pub fn select_pivot<S: SortView>(view: &S, interval: Interval) -> Result<S::Key> {
    interval.check_within(view.len())?;
    let (start, len) = (interval.start, interval.len());
    if len == 0 {
        return Err(Error::EmptyInterval {
            start,
            end: interval.end,
        });
    }
    let mut positions: Vec<usize> = if len >= 5 {
        vec![start, start + len / 4, start + len / 2, start + 3 * len / 4, interval.end - 1]
    } else {
        vec![start, start + len / 2, interval.end - 1]
    };
    positions.dedup();
    let mut probes: Vec<S::Key> = positions.into_iter().map(|i| view.key(i)).collect();
    probes.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    Ok(probes[(probes.len() - 1) / 2])
}

/// Partitions `interval` of `view` around `pivot` under `rule`.
pub fn partition_view<B: VectorBackend, S: SortView>(
    b: &B,
    view: &mut S,
    interval: Interval,
    pivot: S::Key,
    rule: PartitionRule,
) -> Result<PartitionResult> {
    interval.check_within(view.len())?;
    let boundary = if interval.len() < 2 * b.width() {
        scalar_partition(view, interval, pivot, rule)
    } else {
        vector_partition(b, view, interval, pivot, rule)
    };
    Ok(PartitionResult::split(interval, boundary))
}

fn scalar_partition<S: SortView>(view: &mut S, interval: Interval, pivot: S::Key, rule: PartitionRule) -> usize {
    let (mut i, mut j) = (interval.start, interval.end);
    while i < j {
        if rule.goes_left(view.key(i), pivot) {
            i += 1;
        } else {
            j -= 1;
            view.swap(i, j);
        }
    }
    i
}

struct Cursors {
    write_left: usize,
    write_right: usize,
}

impl Cursors {
    #[inline]
    fn flush<B: VectorBackend, S: SortView>(
        &mut self,
        b: &B,
        view: &mut S,
        reg: &S::Reg,
        active: usize,
        pivot: &crate::vector::Vector<S::Key>,
        rule: PartitionRule,
    ) {
        let keys = reg.keys();
        let left = match rule {
            PartitionRule::LessEqual => b.compare_lte(keys, pivot),
            PartitionRule::Less => b.not(&b.compare_lte(pivot, keys)),
        };
        let (left, right) = if active == b.width() {
            let right = b.not(&left);
            (left, right)
        } else {
            let valid = b.first_n(active);
            let left = b.and(&left, &valid);
            let right = b.and(&b.not(&left), &valid);
            (left, right)
        };
        let nl = b.count_true(&left);
        let nr = active - nl;

        view.store(b, self.write_left, nl, &reg.compact(b, &left));
        self.write_left += nl;
        self.write_right -= nr;
        view.store(b, self.write_right, nr, &reg.compact(b, &right));
    }
}

fn vector_partition<B: VectorBackend, S: SortView>(
    b: &B,
    view: &mut S,
    interval: Interval,
    pivot: S::Key,
    rule: PartitionRule,
) -> usize {
    let w = b.width();
    let (start, end) = (interval.start, interval.end);
    let pivot = b.dup(pivot);

    let saved_left = view.load(b, start, w);
    let saved_right = view.load(b, end - w, w);
    let (mut read_left, mut read_right) = (start + w, end - w);
    let mut c = Cursors {
        write_left: start,
        write_right: end,
    };

    while read_right - read_left >= w {
        let reg = if read_left - c.write_left <= c.write_right - read_right {
            let r = view.load(b, read_left, w);
            read_left += w;
            r
        } else {
            read_right -= w;
            view.load(b, read_right, w)
        };
        c.flush(b, view, &reg, w, &pivot, rule);
    }

    let rem = read_right - read_left;
    if rem > 0 {
        let reg = view.load(b, read_left, rem);
        c.flush(b, view, &reg, rem, &pivot, rule);
    }
    c.flush(b, view, &saved_left, w, &pivot, rule);
    c.flush(b, view, &saved_right, w, &pivot, rule);

    debug_assert_eq!(c.write_left, c.write_right);
    c.write_left
}

/// Moves keys `<= pivot` to the front of `interval`, the rest behind them.
pub fn partition_in_place<B: VectorBackend, T: SortKey>(
    b: &B,
    data: &mut [T],
    interval: Interval,
    pivot: T,
) -> Result<PartitionResult> {
    partition_view(b, &mut ScalarView::new(data), interval, pivot, PartitionRule::LessEqual)
}

/// Key/value partition over two arrays.
pub fn partition_in_place_kv<B: VectorBackend, K: SortKey, V: Lane>(
    b: &B,
    keys: &mut [K],
    payloads: &mut [V],
    interval: Interval,
    pivot: K,
) -> Result<PartitionResult> {
    let mut view = SoaView::new(keys, payloads)?;
    partition_view(b, &mut view, interval, pivot, PartitionRule::LessEqual)
}

/// Key/value partition over an array of pairs.
pub fn partition_in_place_pairs<B: VectorBackend, K: SortKey, V: Lane>(
    b: &B,
    pairs: &mut [(K, V)],
    interval: Interval,
    pivot: K,
) -> Result<PartitionResult> {
    partition_view(b, &mut AosView::new(pairs), interval, pivot, PartitionRule::LessEqual)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::ScalarBackend;

    fn be(w: usize) -> ScalarBackend {
        ScalarBackend::new(w).unwrap()
    }

    fn sorted<T: Clone + Ord>(s: &[T]) -> Vec<T> {
        let mut v = s.to_vec();
        v.sort();
        v
    }

    #[test]
    fn pivot_examples() {
        let mut d = [9, 0, 1, 0, 5, 0, 3, 0, 7];
        // len 9: probes at 0, 2, 4, 6, 8
        let view = ScalarView::new(&mut d);
        assert_eq!(select_pivot(&view, Interval::of_len(9)).unwrap(), 5);
        let mut c = [4; 10];
        assert_eq!(select_pivot(&ScalarView::new(&mut c), Interval::of_len(10)).unwrap(), 4);
        let mut one = [7];
        assert_eq!(select_pivot(&ScalarView::new(&mut one), Interval::of_len(1)).unwrap(), 7);
        let mut three = [3, 1, 2];
        assert_eq!(select_pivot(&ScalarView::new(&mut three), Interval::of_len(3)).unwrap(), 2);
        assert_eq!(
            select_pivot(&ScalarView::new(&mut three), Interval::new(1, 1)),
            Err(Error::EmptyInterval { start: 1, end: 1 })
        );
    }

    #[test]
    fn partition_examples() {
        for w in [2, 4] {
            let b = be(w);
            let mut d = [3, 1, 2, 0, 5];
            let r = partition_in_place(&b, &mut d, Interval::of_len(5), 2).unwrap();
            assert_eq!(r.boundary, 3);
            assert_eq!(sorted(&d[..3]), vec![0, 1, 2]);
            assert_eq!(sorted(&d[3..]), vec![3, 5]);
        }
        let b = be(2);
        let mut d: Vec<i32> = (0..20).collect();
        assert_eq!(partition_in_place(&b, &mut d, Interval::of_len(20), 100).unwrap().boundary, 20);
        assert_eq!(partition_in_place(&b, &mut d, Interval::of_len(20), -1).unwrap().boundary, 0);
        assert_eq!(partition_in_place(&b, &mut d, Interval::new(4, 4), 3).unwrap().boundary, 4);
        assert!(matches!(
            partition_in_place(&b, &mut d, Interval::new(4, 21), 3),
            Err(Error::IntervalOutOfBounds { .. })
        ));
    }

    #[test]
    fn vector_path_boundary() {
        let b = be(4);
        let mut d: Vec<i32> = (0..37).map(|i| (i * 17) % 11).collect();
        let before = sorted(&d);
        let r = partition_in_place(&b, &mut d, Interval::new(2, 35), 5).unwrap();
        assert!(d[2..r.boundary].iter().all(|&x| x <= 5));
        assert!(d[r.boundary..35].iter().all(|&x| x > 5));
        assert_eq!(sorted(&d), before);
    }

    #[test]
    fn strict_rule() {
        let b = be(2);
        let mut d = vec![2; 9];
        d[4] = 1;
        let r = partition_view(&b, &mut ScalarView::new(&mut d), Interval::of_len(9), 2, PartitionRule::Less).unwrap();
        assert_eq!(r.boundary, 1);
        assert_eq!(d[0], 1);
    }

    #[test]
    fn payloads_follow_keys() {
        let b = be(2);
        let mut keys = [3, 1, 2, 0, 5];
        let mut vals = [30, 10, 20, 0, 50];
        let r = partition_in_place_kv(&b, &mut keys, &mut vals, Interval::of_len(5), 2).unwrap();
        assert_eq!(r.boundary, 3);
        assert!(keys.iter().zip(&vals).all(|(k, v)| 10 * k == *v));

        let mut pairs = [(3, 30), (1, 10), (2, 20), (0, 0), (5, 50)];
        let r = partition_in_place_pairs(&b, &mut pairs, Interval::of_len(5), 2).unwrap();
        assert_eq!(r.boundary, 3);
        assert!(pairs.iter().all(|(k, v)| 10 * k == *v));

        let mut short = [1];
        assert_eq!(
            partition_in_place_kv(&b, &mut keys, &mut short, Interval::of_len(1), 0),
            Err(Error::LengthMismatch { keys: 5, payloads: 1 })
        );
    }
}
