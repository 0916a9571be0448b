use proptest::collection::vec;
use proptest::prelude::*;
use proptest::sample::select;
use vexsort::{sort, sort_kv, Error, ScalarBackend, SortConfig};

fn backend(w: usize) -> ScalarBackend {
    ScalarBackend::new(w).unwrap()
}

fn depth_bound(n: usize) -> usize {
    (2.0 * (n.max(2) as f64).log2() + 4.0).floor() as usize
}

proptest! {
    #[test]
    fn matches_std_sort(
        w in select(vec![2usize, 4, 8, 16, 32]),
        threshold in 1usize..=16,
        data in vec(-1000i32..1000, 0..5000),
    ) {
        let b = backend(w);
        let config = SortConfig { small_threshold_vectors: threshold, ..SortConfig::default() };
        let mut d = data.clone();
        let stats = sort(&b, &mut d, &config).unwrap();
        let mut expect = data;
        expect.sort_unstable();
        prop_assert_eq!(&d, &expect);
        prop_assert!(stats.max_stack_depth <= depth_bound(d.len()));
    }

    #[test]
    fn few_distinct_keys_finish_quickly(w in select(vec![4usize, 16]), data in vec(0u8..3, 0..20_000)) {
        let b = backend(w);
        let mut d = data.clone();
        let stats = sort(&b, &mut d, &SortConfig::default()).unwrap();
        prop_assert!(d.windows(2).all(|p| p[0] <= p[1]));
        // Each distinct key costs at most two steps before its run is settled.
        let n = d.len().max(1) as f64;
        prop_assert!(stats.partition_steps as f64 <= 4.0 * n.log2() + 8.0, "{} steps", stats.partition_steps);
    }

    #[test]
    fn floats_with_signed_zero_and_infinities(data in vec(prop_oneof![
        Just(0.0f64), Just(-0.0), Just(f64::INFINITY), Just(f64::NEG_INFINITY), -1e6f64..1e6,
    ], 0..3000)) {
        let b = backend(8);
        let mut d = data.clone();
        sort(&b, &mut d, &SortConfig::default()).unwrap();
        let mut expect = data;
        expect.sort_by(|a, c| a.partial_cmp(c).unwrap());
        // -0.0 and 0.0 compare equal; compare as values, not bit patterns.
        prop_assert!(d.iter().zip(&expect).all(|(a, c)| a == c));
    }

    #[test]
    fn kv_sort_is_a_permutation(data in vec(-50i16..50, 0..4000)) {
        let b = backend(16);
        let index: Vec<u32> = (0..data.len() as u32).collect();
        let (mut k, mut p) = (data.clone(), index.clone());
        sort_kv(&b, &mut k, &mut p, &SortConfig::default()).unwrap();
        prop_assert!(k.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(k.iter().zip(&p).all(|(&key, &i)| data[i as usize] == key));
        p.sort_unstable();
        prop_assert_eq!(p, index);
    }
}

#[test]
fn constant_input_is_one_step() {
    let b = backend(16);
    let mut d = vec![7; 1_000_000];
    let stats = sort(&b, &mut d, &SortConfig::default()).unwrap();
    assert_eq!(stats.partition_steps, 1);
    assert_eq!(stats.equal_runs, 1);
}

#[test]
fn rejects_nan_and_bad_thresholds() {
    let b = backend(4);
    let mut d = vec![1.0, f64::NAN, 0.0];
    assert!(matches!(sort(&b, &mut d, &SortConfig::default()), Err(Error::NanInput(1))));
    assert_eq!(d[0], 1.0, "input must be untouched on error");
    let mut d = vec![1, 0];
    for bad in [0, 17] {
        let config = SortConfig {
            small_threshold_vectors: bad,
            ..SortConfig::default()
        };
        assert!(matches!(sort(&b, &mut d, &config), Err(Error::InvalidConfig(_))));
    }
    let mut d: Vec<i32> = Vec::new();
    assert_eq!(sort(&b, &mut d, &SortConfig::default()).unwrap().partition_steps, 0);
}
