//! Input generation, verification and timing for the command-line harness.
//!
//! Every timed run is checked against a snapshot of its input before its
//! row is produced, so a row with `verified = true` always describes a
//! correct run.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::backend::{native_width, validate_width, width_from_env, ScalarBackend, VectorBackend};
use crate::bitonic::MAX_VECTORS;
use crate::element::SortKey;
use crate::error::{Error, Result};
use crate::hybrid::{sort_view, SortConfig};
use crate::interval::Interval;
use crate::parallel::parallel_sort_view;
use crate::partition::{partition_view, select_pivot, PartitionRule};
use crate::view::{AosView, ScalarView, SoaView, SortView};

/// Period of the sawtooth input.
pub const SAWTOOTH_PERIOD: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InputKind {
    Uniform,
    Sorted,
    Reverse,
    Constant,
    Sawtooth,
}

impl InputKind {
    pub const ALL: [InputKind; 5] = [Self::Uniform, Self::Sorted, Self::Reverse, Self::Constant, Self::Sawtooth];

    pub fn name(self) -> &'static str {
        match self {
            Self::Uniform => "uniform",
            Self::Sorted => "sorted",
            Self::Reverse => "reverse",
            Self::Constant => "constant",
            Self::Sawtooth => "sawtooth",
        }
    }
}

impl FromStr for InputKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

impl fmt::Display for InputKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ElementKind {
    #[serde(rename = "i32")]
    I32,
    #[serde(rename = "f64")]
    F64,
    /// `i32` keys with `i32` payloads in two arrays.
    #[serde(rename = "kv-soa")]
    KvSoa,
    /// `(i32, i32)` pairs in one array.
    #[serde(rename = "kv-aos")]
    KvAos,
}

impl ElementKind {
    pub const ALL: [ElementKind; 4] = [Self::I32, Self::F64, Self::KvSoa, Self::KvAos];

    pub fn name(self) -> &'static str {
        match self {
            Self::I32 => "i32",
            Self::F64 => "f64",
            Self::KvSoa => "kv-soa",
            Self::KvAos => "kv-aos",
        }
    }

    /// Lane count of a 512-bit register of this element's keys.
    pub fn native_width(self) -> usize {
        match self {
            Self::F64 => native_width::<f64>(),
            _ => native_width::<i32>(),
        }
    }
}

impl FromStr for ElementKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    SmallSort,
    Partition,
    Qs,
    QsPar,
    BaselineStd,
}

impl Algo {
    pub const ALL: [Algo; 5] = [Self::SmallSort, Self::Partition, Self::Qs, Self::QsPar, Self::BaselineStd];

    pub fn name(self) -> &'static str {
        match self {
            Self::SmallSort => "small-sort",
            Self::Partition => "partition",
            Self::Qs => "qs",
            Self::QsPar => "qs-par",
            Self::BaselineStd => "baseline-std",
        }
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown algorithm `{s}`")))
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Keys the generator can produce.
pub trait BenchKey: SortKey {
    fn random(rng: &mut StdRng) -> Self;
    fn from_index(i: usize) -> Self;
    fn cmp_keys(&self, other: &Self) -> Ordering;
}

impl BenchKey for i32 {
    fn random(rng: &mut StdRng) -> Self {
        rng.gen()
    }

    fn from_index(i: usize) -> Self {
        i as i32
    }

    fn cmp_keys(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

impl BenchKey for f64 {
    fn random(rng: &mut StdRng) -> Self {
        rng.gen_range(-1.0e9..1.0e9)
    }

    fn from_index(i: usize) -> Self {
        i as f64
    }

    fn cmp_keys(&self, other: &Self) -> Ordering {
        self.total_cmp(other)
    }
}

/// Deterministic input of `n` keys for `(kind, n, seed)`.
pub fn generate_input<T: BenchKey>(kind: InputKind, n: usize, seed: u64) -> Vec<T> {
    let mut rng = StdRng::seed_from_u64(seed);
    match kind {
        InputKind::Uniform => (0..n).map(|_| T::random(&mut rng)).collect(),
        InputKind::Sorted => (0..n).map(T::from_index).collect(),
        InputKind::Reverse => (0..n).rev().map(T::from_index).collect(),
        InputKind::Constant => vec![T::random(&mut rng); n],
        InputKind::Sawtooth => (0..n).map(|i| T::from_index(i % SAWTOOTH_PERIOD)).collect(),
    }
}

/// Parses a size list: comma-separated items, each `n`, `lo:hi:xF`
/// (geometric, factor `F`) or `lo:hi:+S` (arithmetic, step `S`). Bounds
/// are inclusive.
pub fn parse_sizes(spec: &str) -> Result<Vec<usize>> {
    let bad = |why: &str| Error::InvalidConfig(format!("bad size list `{spec}`: {why}"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(&format!("`{s}` is not a count")));
    let mut sizes = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [n] => sizes.push(num(n)?),
            [lo, hi, step] => {
                let (lo, hi) = (num(lo)?, num(hi)?);
                if lo > hi {
                    return Err(bad("lower bound above upper bound"));
                }
                if let Some(f) = step.strip_prefix('x') {
                    let f = num(f)?;
                    if f < 2 || lo == 0 {
                        return Err(bad("geometric sweeps need a factor of at least 2 and a positive start"));
                    }
                    let mut n = lo;
                    while n <= hi {
                        sizes.push(n);
                        n = match n.checked_mul(f) {
                            Some(m) => m,
                            None => break,
                        };
                    }
                } else if let Some(s) = step.strip_prefix('+') {
                    let s = num(s)?;
                    if s == 0 {
                        return Err(bad("step must be positive"));
                    }
                    sizes.extend((lo..=hi).step_by(s));
                } else {
                    return Err(bad("step must start with `x` or `+`"));
                }
            }
            _ => return Err(bad("expected `n` or `lo:hi:xF` or `lo:hi:+S`")),
        }
    }
    if sizes.is_empty() {
        return Err(bad("no sizes"));
    }
    Ok(sizes)
}

/// Width from the flag, else the environment, else the native width.
pub fn resolve_width(flag: Option<usize>, element: ElementKind) -> Result<usize> {
    match flag {
        Some(w) => validate_width(w),
        None => Ok(width_from_env()?.unwrap_or_else(|| element.native_width())),
    }
}

/// One CSV row.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub algo: Algo,
    pub element_kind: ElementKind,
    pub n: usize,
    pub width: usize,
    pub workers: usize,
    pub seed: u64,
    /// Median over repetitions of elapsed nanoseconds / (n ln n).
    pub ns_per_element_over_nlogn: f64,
    pub bytes_read: u64,
    pub bytes_written: u64,
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub algos: Vec<Algo>,
    pub element: ElementKind,
    pub input: InputKind,
    /// `None`: every size up to `16 * W` for the small sort, a geometric
    /// sweep otherwise.
    pub sizes: Option<Vec<usize>>,
    pub reps: usize,
    pub width: usize,
    pub workers: usize,
    pub seed: u64,
    pub count_traffic: bool,
    pub enable_skip_opt: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            algos: vec![Algo::Qs],
            element: ElementKind::I32,
            input: InputKind::Uniform,
            sizes: None,
            reps: 5,
            width: native_width::<i32>(),
            workers: 1,
            seed: 42,
            count_traffic: false,
            enable_skip_opt: false,
        }
    }
}

pub const DEFAULT_SIZES: &str = "1000:1000000:x10";

impl BenchConfig {
    pub fn sizes_for(&self, algo: Algo) -> Vec<usize> {
        match (&self.sizes, algo) {
            (Some(s), _) => s.clone(),
            (None, Algo::SmallSort) => (1..=MAX_VECTORS * self.width).collect(),
            (None, _) => parse_sizes(DEFAULT_SIZES).expect("default sizes parse"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        validate_width(self.width)?;
        if self.algos.is_empty() {
            return Err(Error::InvalidConfig("no algorithm selected".into()));
        }
        if self.reps == 0 {
            return Err(Error::InvalidConfig("--reps must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::InvalidConfig("--workers must be at least 1".into()));
        }
        if self.algos.contains(&Algo::SmallSort) {
            let cap = MAX_VECTORS * self.width;
            if let Some(&n) = self.sizes_for(Algo::SmallSort).iter().find(|&&n| n > cap) {
                return Err(Error::InvalidConfig(format!(
                    "small-sort handles at most 16 vectors ({cap} elements at width {}), got size {n}",
                    self.width
                )));
            }
        }
        Ok(())
    }

    fn sort_config(&self) -> SortConfig {
        SortConfig {
            workers: self.workers,
            enable_skip_optimizations: self.enable_skip_opt,
            ..SortConfig::default()
        }
    }
}

/// Input records of one element kind.
#[derive(Clone, Debug, PartialEq)]
enum Records {
    I32(Vec<i32>),
    F64(Vec<f64>),
    Soa(Vec<i32>, Vec<i32>),
    Aos(Vec<(i32, i32)>),
}

impl Records {
    fn generate(element: ElementKind, kind: InputKind, n: usize, seed: u64) -> Self {
        let index = || (0..n as i32).collect::<Vec<_>>();
        match element {
            ElementKind::I32 => Self::I32(generate_input(kind, n, seed)),
            ElementKind::F64 => Self::F64(generate_input(kind, n, seed)),
            ElementKind::KvSoa => Self::Soa(generate_input(kind, n, seed), index()),
            ElementKind::KvAos => {
                let keys: Vec<i32> = generate_input(kind, n, seed);
                Self::Aos(keys.into_iter().zip(index()).collect())
            }
        }
    }

    /// Runs `algo`; returns the partition boundary for [`Algo::Partition`].
    fn run<B: VectorBackend>(&mut self, algo: Algo, b: &B, config: &SortConfig) -> Result<Option<usize>> {
        if algo == Algo::BaselineStd {
            self.baseline();
            return Ok(None);
        }
        match self {
            Self::I32(d) => run_view(algo, b, &mut ScalarView::new(d), config),
            Self::F64(d) => run_view(algo, b, &mut ScalarView::new(d), config),
            Self::Soa(k, p) => run_view(algo, b, &mut SoaView::new(k, p)?, config),
            Self::Aos(d) => run_view(algo, b, &mut AosView::new(d), config),
        }
    }

    fn baseline(&mut self) {
        match self {
            Self::I32(d) => d.sort_unstable(),
            Self::F64(d) => d.sort_unstable_by(f64::total_cmp),
            Self::Soa(k, p) => {
                let mut pairs: Vec<(i32, i32)> = k.iter().copied().zip(p.iter().copied()).collect();
                pairs.sort_unstable_by_key(|r| r.0);
                for (i, (key, payload)) in pairs.into_iter().enumerate() {
                    k[i] = key;
                    p[i] = payload;
                }
            }
            Self::Aos(d) => d.sort_unstable_by_key(|r| r.0),
        }
    }
}

fn run_view<B: VectorBackend, S: SortView>(algo: Algo, b: &B, view: &mut S, config: &SortConfig) -> Result<Option<usize>> {
    let len = view.len();
    let all = Interval::of_len(len);
    match algo {
        Algo::SmallSort => config.network(b).small_sort(b, view, all).map(|_| None),
        Algo::Partition => {
            if len == 0 {
                return Ok(Some(0));
            }
            let pivot = select_pivot(view, all)?;
            partition_view(b, view, all, pivot, PartitionRule::LessEqual).map(|p| Some(p.boundary))
        }
        Algo::Qs => sort_view(b, view, config).map(|_| None),
        Algo::QsPar => parallel_sort_view(b, view, config).map(|_| None),
        Algo::BaselineStd => unreachable!("the baseline does not run on views"),
    }
}

fn sorted_keys<T: BenchKey>(keys: &[T]) -> Vec<T> {
    let mut s = keys.to_vec();
    s.sort_unstable_by(T::cmp_keys);
    s
}

fn same_keys<T: BenchKey>(a: &[T], b: &[T]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.cmp_keys(y) == Ordering::Equal)
}

/// Checks `after` against the snapshot `before` for a full sort, or for a
/// partition at `boundary`.
fn verify_keys<T: BenchKey>(before: &[T], after: &[T], boundary: Option<usize>) -> bool {
    let expect = sorted_keys(before);
    match boundary {
        None => same_keys(after, &expect),
        Some(k) => {
            if before.is_empty() {
                return after.is_empty() && k == 0;
            }
            let mut probe = before.to_vec();
            let pivot = match select_pivot(&ScalarView::new(&mut probe), Interval::of_len(before.len())) {
                Ok(p) => p,
                Err(_) => return false,
            };
            k <= after.len()
                && after[..k].iter().all(|x| *x <= pivot)
                && after[k..].iter().all(|x| *x > pivot)
                && same_keys(&sorted_keys(after), &expect)
        }
    }
}

/// Payloads are original indices: each must point at a record with the same
/// key, and each index must appear once.
fn verify_payloads(before_keys: &[i32], keys: &[i32], payloads: &[i32]) -> bool {
    let mut seen = vec![false; before_keys.len()];
    keys.iter().zip(payloads).all(|(&k, &p)| {
        let Ok(i) = usize::try_from(p) else { return false };
        i < seen.len() && !std::mem::replace(&mut seen[i], true) && before_keys[i] == k
    })
}

fn verify(before: &Records, after: &Records, boundary: Option<usize>) -> bool {
    match (before, after) {
        (Records::I32(b), Records::I32(a)) => verify_keys(b, a, boundary),
        (Records::F64(b), Records::F64(a)) => verify_keys(b, a, boundary),
        (Records::Soa(bk, _), Records::Soa(ak, ap)) => verify_keys(bk, ak, boundary) && verify_payloads(bk, ak, ap),
        (Records::Aos(b), Records::Aos(a)) => {
            let bk: Vec<i32> = b.iter().map(|r| r.0).collect();
            let ak: Vec<i32> = a.iter().map(|r| r.0).collect();
            let ap: Vec<i32> = a.iter().map(|r| r.1).collect();
            verify_keys(&bk, &ak, boundary) && verify_payloads(&bk, &ak, &ap)
        }
        _ => false,
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_unstable_by(f64::total_cmp);
    let m = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    }
}

fn n_ln_n(n: usize) -> f64 {
    let n = n as f64;
    (n * n.ln()).max(1.0)
}

/// Times and verifies one `(algo, n)` cell over `config.reps` repetitions.
pub fn run_cell(config: &BenchConfig, algo: Algo, n: usize) -> Result<BenchRecord> {
    let input = Records::generate(config.element, config.input, n, config.seed);
    let sort_config = config.sort_config();
    let mut samples = Vec::with_capacity(config.reps);
    let mut verified = true;
    let (mut bytes_read, mut bytes_written) = (0, 0);
    for rep in 0..config.reps {
        let b = if config.count_traffic {
            ScalarBackend::counting(config.width)?
        } else {
            ScalarBackend::new(config.width)?
        };
        let mut data = input.clone();
        let t = Instant::now();
        let boundary = data.run(algo, &b, &sort_config)?;
        let elapsed = t.elapsed().as_nanos() as f64;
        samples.push(elapsed / n_ln_n(n));
        verified &= verify(&input, &data, boundary);
        if rep == 0 {
            if let Some(t) = b.traffic() {
                bytes_read = t.bytes_read();
                bytes_written = t.bytes_written();
            }
        }
    }
    Ok(BenchRecord {
        algo,
        element_kind: config.element,
        n,
        width: config.width,
        workers: config.workers,
        seed: config.seed,
        ns_per_element_over_nlogn: median(samples),
        bytes_read,
        bytes_written,
        verified,
    })
}

/// Runs every `(algo, n)` cell, handing each row to `on_row` as it completes.
pub fn run_suite(config: &BenchConfig, mut on_row: impl FnMut(&BenchRecord) -> Result<()>) -> Result<Vec<BenchRecord>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &algo in &config.algos {
        for n in config.sizes_for(algo) {
            let row = run_cell(config, algo, n)?;
            on_row(&row)?;
            rows.push(row);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inputs_are_deterministic() {
        assert_eq!(generate_input::<i32>(InputKind::Uniform, 100, 7), generate_input::<i32>(InputKind::Uniform, 100, 7));
        assert_ne!(generate_input::<i32>(InputKind::Uniform, 100, 7), generate_input::<i32>(InputKind::Uniform, 100, 8));
        let c = generate_input::<i32>(InputKind::Constant, 4, 99);
        assert!(c.iter().all(|&x| x == c[0]));
        assert_eq!(generate_input::<i32>(InputKind::Reverse, 3, 0), vec![2, 1, 0]);
        assert_eq!(generate_input::<f64>(InputKind::Sawtooth, 1026, 0)[1025], 1.0);
        assert_eq!("sorted".parse::<InputKind>(), Ok(InputKind::Sorted));
        assert_eq!("zigzag".parse::<InputKind>(), Err(Error::UnknownKind("zigzag".into())));
        assert_eq!("kv-aos".parse::<ElementKind>(), Ok(ElementKind::KvAos));
        assert!("u8".parse::<ElementKind>().is_err());
    }

    #[test]
    fn size_lists() {
        assert_eq!(parse_sizes("64:1048576:x8").unwrap(), vec![64, 512, 4096, 32768, 262144]);
        assert_eq!(parse_sizes("64:1048576:x2").unwrap().len(), 15);
        assert_eq!(parse_sizes("1:5:+2").unwrap(), vec![1, 3, 5]);
        assert_eq!(parse_sizes("4096").unwrap(), vec![4096]);
        assert_eq!(parse_sizes("10, 20,1:2:+1").unwrap(), vec![10, 20, 1, 2]);
        for bad in ["", "x", "5:1:x2", "1:9:x1", "0:9:x2", "1:9:*2", "1:2", "1:9:+0"] {
            assert!(parse_sizes(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn verification_catches_mistakes() {
        let before = Records::I32(vec![3, 1, 2]);
        assert!(verify(&before, &Records::I32(vec![1, 2, 3]), None));
        assert!(!verify(&before, &Records::I32(vec![1, 3, 2]), None));
        assert!(!verify(&before, &Records::I32(vec![1, 2, 2]), None));
        let before = Records::Soa(vec![5, 4], vec![0, 1]);
        assert!(verify(&before, &Records::Soa(vec![4, 5], vec![1, 0]), None));
        assert!(!verify(&before, &Records::Soa(vec![4, 5], vec![0, 1]), None));
        assert!(!verify(&before, &Records::Soa(vec![4, 5], vec![1, 1]), None));
    }

    #[test]
    fn every_algo_verifies() {
        for element in ElementKind::ALL {
            for algo in Algo::ALL {
                let config = BenchConfig {
                    algos: vec![algo],
                    element,
                    sizes: Some(vec![0, 1, 37, 64]),
                    reps: 2,
                    width: 4,
                    workers: 2,
                    count_traffic: true,
                    ..BenchConfig::default()
                };
                let rows = run_suite(&config, |_| Ok(())).unwrap();
                assert_eq!(rows.len(), 4);
                assert!(rows.iter().all(|r| r.verified), "{algo} {element}");
                if algo != Algo::BaselineStd {
                    assert!(rows[3].bytes_read > 0 && rows[3].bytes_written > 0);
                }
            }
        }
    }

    #[test]
    fn small_sort_sizes_are_capped() {
        let config = BenchConfig {
            algos: vec![Algo::SmallSort],
            sizes: Some(vec![65]),
            width: 4,
            ..BenchConfig::default()
        };
        assert!(matches!(config.validate(), Err(Error::InvalidConfig(_))));
        let config = BenchConfig { sizes: None, ..config };
        assert_eq!(config.sizes_for(Algo::SmallSort), (1..=64).collect::<Vec<_>>());
    }
}
