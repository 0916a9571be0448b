use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::select;
use vexsort::{
    exchange_reverse, skip_exchange, small_sort, small_sort_kv, small_sort_pairs, sort_vectors, stair_stage,
    BitonicNetwork, Error, Interval, KvVector, ScalarBackend, ScalarView, Vector, VectorBackend, MAX_VECTORS,
};

fn backend(w: usize) -> ScalarBackend {
    ScalarBackend::new(w).unwrap()
}

fn is_sorted<T: PartialOrd>(d: &[T]) -> bool {
    d.windows(2).all(|w| w[0] <= w[1])
}

fn sorted(mut v: Vec<i32>) -> Vec<i32> {
    v.sort_unstable();
    v
}

/// A width and a key list that fits in the small sort at that width.
fn small_input() -> impl Strategy<Value = (usize, Vec<i32>)> {
    select(vec![2usize, 4, 8, 16, 32]).prop_flat_map(|w| (Just(w), vec(-50i32..50, 0..=MAX_VECTORS * w)))
}

proptest! {
    #[test]
    fn sort_vectors_sorts_the_concatenation(w in select(vec![2usize, 4, 8, 16]), count in 1usize..=MAX_VECTORS, seed in any::<u64>()) {
        let b = backend(w);
        let mut x = seed;
        let mut next = || { x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407); ((x >> 33) % 1000) as i32 };
        let data: Vec<i32> = (0..w * count).map(|_| next()).collect();
        let mut regs: Vec<Vector<i32>> = data.chunks(w).map(Vector::from_lanes).collect();
        sort_vectors(&b, &mut regs).unwrap();
        let out: Vec<i32> = regs.iter().flat_map(|r| r.to_vec()).collect();
        prop_assert_eq!(out, sorted(data));
    }

    #[test]
    fn small_sort_matches_std((w, data) in small_input()) {
        let b = backend(w);
        let mut d = data.clone();
        small_sort(&b, &mut d).unwrap();
        prop_assert_eq!(d, sorted(data));
    }

    #[test]
    fn skip_shortcuts_do_not_change_results((w, data) in small_input()) {
        let b = backend(w);
        let (mut plain, mut skip) = (data.clone(), data.clone());
        let iv = Interval::of_len(data.len());
        BitonicNetwork::new(&b).small_sort(&b, &mut ScalarView::new(&mut plain), iv).unwrap();
        BitonicNetwork::new(&b)
            .with_skip_optimizations(true)
            .small_sort(&b, &mut ScalarView::new(&mut skip), iv)
            .unwrap();
        prop_assert_eq!(plain, skip);
    }

    #[test]
    fn kv_small_sort_carries_payloads((w, keys) in small_input()) {
        let b = backend(w);
        let index: Vec<u16> = (0..keys.len() as u16).collect();
        let (mut k, mut p) = (keys.clone(), index.clone());
        small_sort_kv(&b, &mut k, &mut p).unwrap();
        prop_assert_eq!(&k, &sorted(keys.clone()));
        prop_assert!(k.iter().zip(&p).all(|(&key, &i)| keys[i as usize] == key));
        prop_assert_eq!(sorted(p.iter().map(|&i| i as i32).collect()), (0..keys.len() as i32).collect::<Vec<_>>());

        let mut pairs: Vec<(i32, u16)> = keys.iter().copied().zip(index).collect();
        small_sort_pairs(&b, &mut pairs).unwrap();
        prop_assert!(is_sorted(&pairs.iter().map(|r| r.0).collect::<Vec<_>>()));
        prop_assert!(pairs.iter().all(|&(key, i)| keys[i as usize] == key));
    }

    #[test]
    fn exchange_reverse_separates_sorted_vectors(w in select(vec![2usize, 4, 8, 16]), a in vec(0i32..100, 16), c in vec(0i32..100, 16)) {
        let b = backend(w);
        let v1 = Vector::from_lanes(&sorted(a[..w].to_vec()));
        let v2 = Vector::from_lanes(&sorted(c[..w].to_vec()));
        let (lo, hi) = exchange_reverse(&b, &v1, &v2);
        prop_assert!(b.reduce_max(&lo) <= b.reduce_min(&hi));
        let mut all = lo.to_vec();
        all.extend(hi.to_vec());
        let mut expect = a[..w].to_vec();
        expect.extend_from_slice(&c[..w]);
        prop_assert_eq!(sorted(all), sorted(expect));
        prop_assert_eq!(skip_exchange(&b, &lo, &hi), true);
    }

    #[test]
    fn stair_stage_sorts_bitonic_blocks(k in 1u32..=5, s in 0u32..5, seed in any::<u64>()) {
        let w = 1usize << k;
        let step = 1usize << s.min(k - 1);
        let b = backend(w);
        // Each block of 2*step lanes: ascending half then descending half.
        let mut x = seed;
        let mut lanes = Vec::with_capacity(w);
        for _ in 0..w / (2 * step) {
            let mut block: Vec<i32> = (0..2 * step).map(|_| { x = x.wrapping_mul(6364136223846793005).wrapping_add(1); ((x >> 40) % 50) as i32 }).collect();
            block[..step].sort_unstable();
            block[step..].sort_unstable_by(|a, b| b.cmp(a));
            lanes.extend(block);
        }
        let out = stair_stage(&b, &Vector::from_lanes(&lanes), step).unwrap().to_vec();
        for (blk_in, blk_out) in lanes.chunks(2 * step).zip(out.chunks(2 * step)) {
            prop_assert_eq!(blk_out.to_vec(), sorted(blk_in.to_vec()));
        }
    }
}

#[test]
fn kv_registers_sort_by_key() {
    let b = backend(4);
    let v = KvVector::new(Vector::from_lanes(&[3, 1, 2, 0]), Vector::from_lanes(&[30u8, 10, 20, 0]));
    let out = vexsort::sort_one_vector(&b, &v);
    assert_eq!(out.keys.to_vec(), vec![0, 1, 2, 3]);
    assert_eq!(out.values.to_vec(), vec![0, 10, 20, 30]);
}

#[test]
fn rejects_too_many_vectors_and_bad_steps() {
    let b = backend(4);
    let mut regs = vec![b.dup(0); MAX_VECTORS + 1];
    assert!(matches!(sort_vectors(&b, &mut regs), Err(Error::TooManyVectors { count: 17, .. })));
    assert!(matches!(stair_stage(&b, &b.dup(0), 3), Err(Error::InvalidStairStep { step: 3, .. })));
    assert!(matches!(stair_stage(&b, &b.dup(0), 4), Err(Error::InvalidStairStep { step: 4, .. })));
    let mut big = vec![0; 16 * 4 + 1];
    assert!(matches!(small_sort(&b, &mut big), Err(Error::SmallSortCapacity { len: 65, capacity: 64 })));
}

#[test]
fn small_sort_keeps_sentinel_valued_keys() {
    let b = backend(8);
    let mut d = vec![i32::MAX, 5, i32::MAX, -1, 0];
    small_sort(&b, &mut d).unwrap();
    assert_eq!(d, [-1, 0, 5, i32::MAX, i32::MAX]);

    let mut k = vec![i32::MAX, 1, i32::MAX];
    let mut p = vec![0u8, 1, 2];
    small_sort_kv(&b, &mut k, &mut p).unwrap();
    assert_eq!(k, [1, i32::MAX, i32::MAX]);
    assert_eq!(p[0], 1);
    assert_eq!(sorted(p.iter().map(|&x| x as i32).collect()), vec![0, 1, 2]);

    let mut f = vec![f64::INFINITY, 2.0, f64::NEG_INFINITY];
    small_sort(&b, &mut f).unwrap();
    assert_eq!(f, [f64::NEG_INFINITY, 2.0, f64::INFINITY]);
}
