use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::select;
use vexsort::{
    partition_in_place, partition_in_place_kv, partition_in_place_pairs, partition_view, select_pivot, Error, Interval,
    PartitionRule, ScalarBackend, ScalarView, SoaView,
};

fn backend(w: usize) -> ScalarBackend {
    ScalarBackend::new(w).unwrap()
}

fn sorted<T: Ord + Clone>(s: &[T]) -> Vec<T> {
    let mut v = s.to_vec();
    v.sort();
    v
}

fn input() -> impl Strategy<Value = (usize, Vec<i32>, i32)> {
    (select(vec![2usize, 4, 8, 16, 64]), vec(-30i32..30, 0..600), -35i32..35)
}

proptest! {
    #[test]
    fn partition_splits_around_the_pivot((w, data, pivot) in input()) {
        let b = backend(w);
        let mut d = data.clone();
        let r = partition_in_place(&b, &mut d, Interval::of_len(data.len()), pivot).unwrap();
        prop_assert!(d[..r.boundary].iter().all(|&x| x <= pivot));
        prop_assert!(d[r.boundary..].iter().all(|&x| x > pivot));
        prop_assert_eq!(r.boundary, data.iter().filter(|&&x| x <= pivot).count());
        prop_assert_eq!(sorted(&d), sorted(&data));
    }

    #[test]
    fn strict_rule_keeps_equal_keys_right((w, data, pivot) in input()) {
        let b = backend(w);
        let mut d = data.clone();
        let len = d.len();
        let r = partition_view(&b, &mut ScalarView::new(&mut d), Interval::of_len(len), pivot, PartitionRule::Less).unwrap();
        prop_assert!(d[..r.boundary].iter().all(|&x| x < pivot));
        prop_assert!(d[r.boundary..].iter().all(|&x| x >= pivot));
        prop_assert_eq!(sorted(&d), sorted(&data));
    }

    #[test]
    fn sub_interval_leaves_the_rest_alone((w, data, pivot) in input(), cut in any::<(prop::sample::Index, prop::sample::Index)>()) {
        let b = backend(w);
        let (mut lo, mut hi) = (cut.0.index(data.len() + 1), cut.1.index(data.len() + 1));
        if lo > hi {
            std::mem::swap(&mut lo, &mut hi);
        }
        let mut d = data.clone();
        let r = partition_in_place(&b, &mut d, Interval::new(lo, hi), pivot).unwrap();
        prop_assert!(lo <= r.boundary && r.boundary <= hi);
        prop_assert_eq!(&d[..lo], &data[..lo]);
        prop_assert_eq!(&d[hi..], &data[hi..]);
        prop_assert_eq!(sorted(&d[lo..hi]), sorted(&data[lo..hi]));
    }

    #[test]
    fn payloads_follow_keys((w, data, pivot) in input()) {
        let b = backend(w);
        let index: Vec<u32> = (0..data.len() as u32).collect();
        let (mut k, mut p) = (data.clone(), index.clone());
        let n = k.len();
        let r = partition_in_place_kv(&b, &mut k, &mut p, Interval::of_len(n), pivot).unwrap();
        prop_assert!(k[..r.boundary].iter().all(|&x| x <= pivot));
        prop_assert!(k.iter().zip(&p).all(|(&key, &i)| data[i as usize] == key));
        prop_assert_eq!(sorted(&p), index.clone());

        let mut pairs: Vec<(i32, u32)> = data.iter().copied().zip(index.clone()).collect();
        let r2 = partition_in_place_pairs(&b, &mut pairs, Interval::of_len(n), pivot).unwrap();
        prop_assert_eq!(r2.boundary, r.boundary);
        prop_assert!(pairs.iter().all(|&(key, i)| data[i as usize] == key));
        prop_assert!(pairs[r2.boundary..].iter().all(|r| r.0 > pivot));
    }

    #[test]
    fn pivot_is_a_median_of_probes(data in vec(any::<i32>(), 1..500)) {
        let mut d = data.clone();
        let p = select_pivot(&ScalarView::new(&mut d), Interval::of_len(data.len())).unwrap();
        prop_assert!(data.contains(&p));
        prop_assert!(data.iter().any(|&x| x <= p));
    }
}

#[test]
fn pivot_probes_five_evenly_spaced_records() {
    // Probes at 0, n/4, n/2, 3n/4 and n-1.
    let mut d: Vec<i32> = vec![0; 20];
    for (pos, v) in [(0, 50), (5, 10), (10, 40), (15, 20), (19, 30)] {
        d[pos] = v;
    }
    assert_eq!(select_pivot(&ScalarView::new(&mut d), Interval::of_len(20)).unwrap(), 30);
    let mut short = vec![3, 9, 1];
    assert_eq!(select_pivot(&ScalarView::new(&mut short), Interval::of_len(3)).unwrap(), 3);
    let mut two = vec![8, 2];
    assert_eq!(select_pivot(&ScalarView::new(&mut two), Interval::of_len(2)).unwrap(), 2);
}

#[test]
fn rejects_bad_intervals_and_layouts() {
    let b = backend(4);
    let mut d = vec![1, 2, 3];
    assert!(matches!(
        partition_in_place(&b, &mut d, Interval::new(1, 5), 2),
        Err(Error::IntervalOutOfBounds { start: 1, end: 5, .. })
    ));
    assert!(matches!(
        select_pivot(&ScalarView::new(&mut d), Interval::new(2, 2)),
        Err(Error::EmptyInterval { start: 2, end: 2 })
    ));
    let (mut k, mut p) = (vec![1, 2], vec![0u8]);
    assert!(matches!(SoaView::new(&mut k, &mut p), Err(Error::LengthMismatch { keys: 2, payloads: 1 })));
}

#[test]
fn extreme_pivots_send_everything_one_way() {
    let b = backend(8);
    let data: Vec<i32> = (0..100).map(|i| (i * 37) % 101).collect();
    let mut d = data.clone();
    assert_eq!(partition_in_place(&b, &mut d, Interval::of_len(100), i32::MIN).unwrap().boundary, 0);
    let mut d = data.clone();
    assert_eq!(partition_in_place(&b, &mut d, Interval::of_len(100), i32::MAX).unwrap().boundary, 100);
    assert_eq!(sorted(&d), sorted(&data));
}
