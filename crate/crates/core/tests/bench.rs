use statrs::distribution::{ChiSquared, ContinuousCDF};
use vexsort::bench::{
    generate_input, parse_sizes, resolve_width, run_cell, Algo, BenchConfig, ElementKind, InputKind, SAWTOOTH_PERIOD,
};
use vexsort::Error;

/// Pearson statistic of bin counts against a flat expectation.
fn chi_square(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expect = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum()
}

#[test]
fn uniform_keys_pass_a_chi_square_test() {
    const BINS: usize = 64;
    let dof = (BINS - 1) as f64;
    let critical = ChiSquared::new(dof).unwrap().inverse_cdf(0.999);

    let keys: Vec<i32> = generate_input(InputKind::Uniform, 200_000, 3);
    let mut counts = [0u64; BINS];
    for k in keys {
        counts[((k as i64 - i32::MIN as i64) as u64 >> 26) as usize] += 1;
    }
    assert!(chi_square(&counts) < critical, "i32 statistic {} >= {critical}", chi_square(&counts));

    let keys: Vec<f64> = generate_input(InputKind::Uniform, 200_000, 3);
    let mut counts = [0u64; BINS];
    for k in keys {
        assert!((-1e9..1e9).contains(&k));
        counts[(((k + 1e9) / 2e9) * BINS as f64) as usize] += 1;
    }
    assert!(chi_square(&counts) < critical);
}

#[test]
fn input_shapes() {
    let n = 3000;
    let sorted: Vec<i32> = generate_input(InputKind::Sorted, n, 1);
    assert!(sorted.windows(2).all(|w| w[0] < w[1]));
    let reverse: Vec<i32> = generate_input(InputKind::Reverse, n, 1);
    assert!(reverse.windows(2).all(|w| w[0] > w[1]));
    let constant: Vec<f64> = generate_input(InputKind::Constant, n, 1);
    assert!(constant.iter().all(|&x| x == constant[0]));
    let saw: Vec<i32> = generate_input(InputKind::Sawtooth, n, 1);
    assert_eq!(saw[SAWTOOTH_PERIOD - 1], SAWTOOTH_PERIOD as i32 - 1);
    assert_eq!(saw[SAWTOOTH_PERIOD], 0);

    // Same seed, same input; different seed, different input.
    let a: Vec<i32> = generate_input(InputKind::Uniform, 100, 4);
    assert_eq!(a, generate_input::<i32>(InputKind::Uniform, 100, 4));
    assert_ne!(a, generate_input::<i32>(InputKind::Uniform, 100, 5));
}

#[test]
fn size_lists() {
    assert_eq!(parse_sizes("64:1048576:x8").unwrap(), [64, 512, 4096, 32768, 262144]);
    assert_eq!(parse_sizes("1000:1000000:x10").unwrap(), [1000, 10_000, 100_000, 1_000_000]);
    assert_eq!(parse_sizes("0:10:+5").unwrap(), [0, 5, 10]);
    assert_eq!(parse_sizes("7, 3,9").unwrap(), [7, 3, 9]);
    assert_eq!(parse_sizes("1:2:+1,100").unwrap(), [1, 2, 100]);
    for bad in ["", "x", "5:1:x2", "1:10:x1", "0:10:x2", "1:10:+0", "1:10:*2", "1:2", "-3"] {
        assert!(matches!(parse_sizes(bad), Err(Error::InvalidConfig(_))), "{bad:?}");
    }
}

#[test]
fn names_parse_back() {
    for kind in InputKind::ALL {
        assert_eq!(kind.name().parse::<InputKind>().unwrap(), kind);
    }
    for kind in ElementKind::ALL {
        assert_eq!(kind.name().parse::<ElementKind>().unwrap(), kind);
    }
    assert_eq!("qs-par".parse::<Algo>().unwrap(), Algo::QsPar);
    assert!(matches!("heap".parse::<InputKind>(), Err(Error::UnknownKind(_))));
}

#[test]
fn width_resolution() {
    assert_eq!(resolve_width(Some(32), ElementKind::I32).unwrap(), 32);
    assert!(matches!(resolve_width(Some(24), ElementKind::I32), Err(Error::InvalidWidth(24))));
    assert_eq!(ElementKind::I32.native_width(), 16);
    assert_eq!(ElementKind::F64.native_width(), 8);
    assert_eq!(ElementKind::KvAos.native_width(), 16);
}

#[test]
fn cells_verify_and_count() {
    let config = BenchConfig {
        element: ElementKind::KvAos,
        input: InputKind::Sawtooth,
        reps: 3,
        width: 4,
        count_traffic: true,
        ..BenchConfig::default()
    };
    for algo in [Algo::SmallSort, Algo::Partition, Algo::Qs, Algo::QsPar, Algo::BaselineStd] {
        let row = run_cell(&config, algo, 64).unwrap();
        assert!(row.verified, "{algo:?}");
        assert_eq!(row.n, 64);
        assert!(row.ns_per_element_over_nlogn > 0.0);
        let moved = row.bytes_read + row.bytes_written;
        assert_eq!(moved == 0, algo == Algo::BaselineStd, "{algo:?} moved {moved} bytes");
    }
    let small = BenchConfig {
        algos: vec![Algo::SmallSort],
        width: 4,
        ..BenchConfig::default()
    };
    assert_eq!(small.sizes_for(Algo::SmallSort), (1..=64).collect::<Vec<_>>());
    assert!(small.validate().is_ok());
}
