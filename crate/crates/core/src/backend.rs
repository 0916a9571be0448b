//! The vector capability set and its scalar reference implementation.
//!
//! Kernels are written against [`VectorBackend`] and never assume a lane
//! count at compile time. [`ScalarBackend`] transcribes every operation lane
//! by lane; built with [`ScalarBackend::counting`] it also records the bytes
//! moved by contiguous loads and stores and the number of min/max stages.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use crate::element::{Lane, LaneInt, SortKey};
use crate::error::{Error, Result};
use crate::vector::{Predicate, Vector};

/// Smallest supported lane count.
pub const MIN_WIDTH: usize = 2;
/// Largest supported lane count.
pub const MAX_WIDTH: usize = 256;

/// Environment variable read by [`width_from_env`].
pub const WIDTH_ENV: &str = "VEXSORT_WIDTH";

pub fn validate_width(width: usize) -> Result<usize> {
    if width.is_power_of_two() && (MIN_WIDTH..=MAX_WIDTH).contains(&width) {
        Ok(width)
    } else {
        Err(Error::InvalidWidth(width))
    }
}

/// Lane count of a 512-bit register holding `T`.
pub fn native_width<T>() -> usize {
    (64 / std::mem::size_of::<T>().max(1)).clamp(MIN_WIDTH, MAX_WIDTH)
}

/// Reads [`WIDTH_ENV`]. `Ok(None)` when unset.
pub fn width_from_env() -> Result<Option<usize>> {
    match std::env::var(WIDTH_ENV) {
        Ok(raw) => {
            let width = raw
                .trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidConfig(format!("{WIDTH_ENV}={raw} is not a number")))?;
            validate_width(width).map(Some)
        }
        Err(_) => Ok(None),
    }
}

/// Bytes moved by vector loads and stores.
#[derive(Debug, Default)]
pub struct TrafficCounter {
    bytes_read: AtomicU64,
    bytes_written: AtomicU64,
}

impl TrafficCounter {
    pub fn bytes_read(&self) -> u64 {
        self.bytes_read.load(Ordering::Relaxed)
    }

    pub fn bytes_written(&self) -> u64 {
        self.bytes_written.load(Ordering::Relaxed)
    }

    pub fn total(&self) -> u64 {
        self.bytes_read() + self.bytes_written()
    }

    fn add_read(&self, bytes: usize) {
        self.bytes_read.fetch_add(bytes as u64, Ordering::Relaxed);
    }

    fn add_written(&self, bytes: usize) {
        self.bytes_written.fetch_add(bytes as u64, Ordering::Relaxed);
    }
}

#[derive(Debug, Default)]
struct Counters {
    traffic: TrafficCounter,
    min_max_stages: AtomicU64,
}

/// Lane-level operations used by the sorting kernels.
///
/// Vectors and predicates passed in must come from a backend of the same
/// width.
pub trait VectorBackend: Send + Sync {
    /// Lane count `W`.
    fn width(&self) -> usize;

    fn traffic(&self) -> Option<&TrafficCounter> {
        None
    }

    /// Number of `blend_min_max` calls so far, when counting.
    fn min_max_stages(&self) -> Option<u64> {
        None
    }

    fn all_true(&self) -> Predicate;
    fn all_false(&self) -> Predicate;
    /// Lanes `[0, k)` set.
    fn first_n(&self, k: usize) -> Predicate;
    fn count_true(&self, p: &Predicate) -> usize;
    fn not(&self, p: &Predicate) -> Predicate;
    fn and(&self, a: &Predicate, b: &Predicate) -> Predicate;
    fn or(&self, a: &Predicate, b: &Predicate) -> Predicate;

    /// Lane `2i` from `a[i]`, lane `2i+1` from `b[i]`, over the low halves.
    fn interleave_low_pred(&self, a: &Predicate, b: &Predicate) -> Predicate;
    fn interleave_low<T: Lane>(&self, a: &Vector<T>, b: &Vector<T>) -> Vector<T>;
    /// Odd lanes of `a` followed by odd lanes of `b`.
    fn concat_odd(&self, a: &Predicate, b: &Predicate) -> Predicate;

    /// `[0, 1, ..., W-1]`.
    fn index_vector(&self) -> Vector<i32>;
    fn dup<T: Lane>(&self, value: T) -> Vector<T>;
    /// Lane `i` of the result is `v[idx[i]]`. Indices must lie in `[0, W)`.
    fn permute<T: Lane>(&self, v: &Vector<T>, idx: &Vector<i32>) -> Vector<T>;
    /// `p ? a : b`, lanewise.
    fn select<T: Lane>(&self, p: &Predicate, a: &Vector<T>, b: &Vector<T>) -> Vector<T>;

    /// `dir ? max(a, b) : min(a, b)`, lanewise.
    fn blend_min_max<T: SortKey>(&self, dir: &Predicate, a: &Vector<T>, b: &Vector<T>) -> Vector<T>;
    fn min<T: SortKey>(&self, a: &Vector<T>, b: &Vector<T>) -> Vector<T>;
    fn max<T: SortKey>(&self, a: &Vector<T>, b: &Vector<T>) -> Vector<T>;
    /// `a <= b`, lanewise.
    fn compare_lte<T: SortKey>(&self, a: &Vector<T>, b: &Vector<T>) -> Predicate;
    /// `!(a <= b)`, lanewise.
    fn compare_gt<T: SortKey>(&self, a: &Vector<T>, b: &Vector<T>) -> Predicate {
        self.not(&self.compare_lte(a, b))
    }

    /// Active lanes packed to the front in lane order; the rest are zero.
    fn compact<T: Lane>(&self, p: &Predicate, v: &Vector<T>) -> Vector<T>;
    fn reverse<T: Lane>(&self, v: &Vector<T>) -> Vector<T>;
    fn reduce_min<T: SortKey>(&self, v: &Vector<T>) -> T;
    fn reduce_max<T: SortKey>(&self, v: &Vector<T>) -> T;

    fn add<T: LaneInt>(&self, a: &Vector<T>, b: &Vector<T>) -> Vector<T>;
    fn sub<T: LaneInt>(&self, a: &Vector<T>, b: &Vector<T>) -> Vector<T>;
    /// Negates the active lanes only.
    fn negate_where<T: LaneInt>(&self, p: &Predicate, v: &Vector<T>) -> Vector<T>;
    /// Halves every lane. Lanes must be even and non-negative.
    fn halve<T: LaneInt>(&self, v: &Vector<T>) -> Vector<T>;

    /// Active lane `i` reads `mem[i]`; inactive lanes are zero.
    fn load<T: Lane>(&self, p: &Predicate, mem: &[T]) -> Vector<T>;
    /// Active lane `i` writes `mem[i]`.
    fn store<T: Lane>(&self, p: &Predicate, mem: &mut [T], v: &Vector<T>);
    /// Loads interleaved `(key, value)` records into a key and a value vector.
    fn load_pairs<K: Lane, V: Lane>(&self, p: &Predicate, mem: &[(K, V)]) -> (Vector<K>, Vector<V>);
    fn store_pairs<K: Lane, V: Lane>(&self, p: &Predicate, mem: &mut [(K, V)], keys: &Vector<K>, values: &Vector<V>);

    /// `load` under `first_n(mem.len())`.
    fn load_n<T: Lane>(&self, mem: &[T]) -> Vector<T> {
        self.load(&self.first_n(mem.len()), mem)
    }

    /// `store` under `first_n(mem.len())`.
    fn store_n<T: Lane>(&self, mem: &mut [T], v: &Vector<T>) {
        self.store(&self.first_n(mem.len()), mem, v)
    }

    /// `load_pairs` under `first_n(mem.len())`.
    fn load_pairs_n<K: Lane, V: Lane>(&self, mem: &[(K, V)]) -> (Vector<K>, Vector<V>) {
        self.load_pairs(&self.first_n(mem.len()), mem)
    }

    /// `store_pairs` under `first_n(mem.len())`.
    fn store_pairs_n<K: Lane, V: Lane>(&self, mem: &mut [(K, V)], keys: &Vector<K>, values: &Vector<V>) {
        self.store_pairs(&self.first_n(mem.len()), mem, keys, values)
    }
}

/// Lane-by-lane reference backend.
#[derive(Debug, Clone)]
pub struct ScalarBackend {
    width: usize,
    counters: Option<Arc<Counters>>,
}

impl ScalarBackend {
    pub fn new(width: usize) -> Result<Self> {
        Ok(Self {
            width: validate_width(width)?,
            counters: None,
        })
    }

    /// A backend that counts traffic and min/max stages. Clones share the counters.
    pub fn counting(width: usize) -> Result<Self> {
        Ok(Self {
            width: validate_width(width)?,
            counters: Some(Arc::default()),
        })
    }

    pub fn is_counting(&self) -> bool {
        self.counters.is_some()
    }

    // Slicing to exactly `W` up front lets the loops below drop their bounds checks.
    #[inline(always)]
    fn lanes<'a, T: Lane>(&self, v: &'a Vector<T>) -> &'a [T] {
        debug_assert_eq!(v.width(), self.width, "vector width does not match the backend");
        &v.lanes()[..self.width]
    }

    #[inline(always)]
    fn bits<'a>(&self, p: &'a Predicate) -> &'a [bool] {
        debug_assert_eq!(p.width(), self.width, "predicate width does not match the backend");
        &p.lanes()[..self.width]
    }

    #[inline(always)]
    fn zip<T: Lane, U: Lane>(&self, a: &Vector<T>, b: &Vector<T>, f: impl Fn(T, T) -> U) -> Vector<U> {
        let (a, b) = (self.lanes(a), self.lanes(b));
        Vector::from_fn(self.width, |i| f(a[i], b[i]))
    }

    #[inline(always)]
    fn zip_pred(&self, a: &Predicate, b: &Predicate, f: impl Fn(bool, bool) -> bool) -> Predicate {
        let (a, b) = (self.bits(a), self.bits(b));
        Predicate::from_fn(self.width, |i| f(a[i], b[i]))
    }

    #[inline(always)]
    fn read(&self, bytes: usize) {
        if let Some(c) = &self.counters {
            c.traffic.add_read(bytes);
        }
    }

    #[inline(always)]
    fn written(&self, bytes: usize) {
        if let Some(c) = &self.counters {
            c.traffic.add_written(bytes);
        }
    }
}

#[inline(always)]
fn active(p: &[bool]) -> usize {
    p.iter().map(|&x| x as usize).sum()
}

impl VectorBackend for ScalarBackend {
    #[inline(always)]
    fn width(&self) -> usize {
        self.width
    }

    fn traffic(&self) -> Option<&TrafficCounter> {
        self.counters.as_deref().map(|c| &c.traffic)
    }

    fn min_max_stages(&self) -> Option<u64> {
        self.counters.as_deref().map(|c| c.min_max_stages.load(Ordering::Relaxed))
    }

    #[inline]
    fn all_true(&self) -> Predicate {
        Predicate::from_fn(self.width, |_| true)
    }

    #[inline]
    fn all_false(&self) -> Predicate {
        Predicate::from_fn(self.width, |_| false)
    }

    #[inline]
    fn first_n(&self, k: usize) -> Predicate {
        assert!(k <= self.width, "first_n({k}) exceeds width {}", self.width);
        Predicate::from_fn(self.width, |i| i < k)
    }

    #[inline]
    fn count_true(&self, p: &Predicate) -> usize {
        active(self.bits(p))
    }

    #[inline]
    fn not(&self, p: &Predicate) -> Predicate {
        let p = self.bits(p);
        Predicate::from_fn(self.width, |i| !p[i])
    }

    #[inline]
    fn and(&self, a: &Predicate, b: &Predicate) -> Predicate {
        self.zip_pred(a, b, |x, y| x & y)
    }

    #[inline]
    fn or(&self, a: &Predicate, b: &Predicate) -> Predicate {
        self.zip_pred(a, b, |x, y| x | y)
    }

    fn interleave_low_pred(&self, a: &Predicate, b: &Predicate) -> Predicate {
        let (a, b) = (self.bits(a), self.bits(b));
        Predicate::from_fn(self.width, |i| if i % 2 == 0 { a[i / 2] } else { b[i / 2] })
    }

    fn interleave_low<T: Lane>(&self, a: &Vector<T>, b: &Vector<T>) -> Vector<T> {
        let (a, b) = (self.lanes(a), self.lanes(b));
        Vector::from_fn(self.width, |i| if i % 2 == 0 { a[i / 2] } else { b[i / 2] })
    }

    fn concat_odd(&self, a: &Predicate, b: &Predicate) -> Predicate {
        let half = self.width / 2;
        let (a, b) = (self.bits(a), self.bits(b));
        Predicate::from_fn(self.width, |i| if i < half { a[2 * i + 1] } else { b[2 * (i - half) + 1] })
    }

    fn index_vector(&self) -> Vector<i32> {
        Vector::from_fn(self.width, |i| i as i32)
    }

    #[inline]
    fn dup<T: Lane>(&self, value: T) -> Vector<T> {
        Vector::from_fn(self.width, |_| value)
    }

    #[inline]
    fn permute<T: Lane>(&self, v: &Vector<T>, idx: &Vector<i32>) -> Vector<T> {
        let w = self.width;
        let (v, idx) = (self.lanes(v), self.lanes(idx));
        Vector::from_fn(w, |i| {
            let j = idx[i];
            // Negative indices wrap to huge ones and miss as well.
            match v.get(j as usize) {
                Some(&x) => x,
                None => panic!("permute index {j} in lane {i} is outside [0, {w})"),
            }
        })
    }

    #[inline]
    fn select<T: Lane>(&self, p: &Predicate, a: &Vector<T>, b: &Vector<T>) -> Vector<T> {
        let (p, a, b) = (self.bits(p), self.lanes(a), self.lanes(b));
        Vector::from_fn(self.width, |i| if p[i] { a[i] } else { b[i] })
    }

    #[inline]
    fn blend_min_max<T: SortKey>(&self, dir: &Predicate, a: &Vector<T>, b: &Vector<T>) -> Vector<T> {
        if let Some(c) = &self.counters {
            c.min_max_stages.fetch_add(1, Ordering::Relaxed);
        }
        let (dir, a, b) = (self.bits(dir), self.lanes(a), self.lanes(b));
        Vector::from_fn(self.width, |i| if dir[i] { a[i].max_of(b[i]) } else { a[i].min_of(b[i]) })
    }

    #[inline]
    fn min<T: SortKey>(&self, a: &Vector<T>, b: &Vector<T>) -> Vector<T> {
        self.zip(a, b, T::min_of)
    }

    #[inline]
    fn max<T: SortKey>(&self, a: &Vector<T>, b: &Vector<T>) -> Vector<T> {
        self.zip(a, b, T::max_of)
    }

    #[inline]
    fn compare_lte<T: SortKey>(&self, a: &Vector<T>, b: &Vector<T>) -> Predicate {
        let (a, b) = (self.lanes(a), self.lanes(b));
        Predicate::from_fn(self.width, |i| a[i] <= b[i])
    }

    #[inline]
    fn compare_gt<T: SortKey>(&self, a: &Vector<T>, b: &Vector<T>) -> Predicate {
        let (a, b) = (self.lanes(a), self.lanes(b));
        // Not `>`: unordered lanes must come out true here.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        Predicate::from_fn(self.width, |i| !(a[i] <= b[i]))
    }

    #[inline]
    fn compact<T: Lane>(&self, p: &Predicate, v: &Vector<T>) -> Vector<T> {
        let (p, src) = (self.bits(p), self.lanes(v));
        let mut out = Vector::from_fn(self.width, |_| T::default());
        let dst = out.lanes_mut();
        // Branch-free: every lane is written at the cursor, which only
        // advances past active ones. Lanes past the last active one are
        // cleared afterwards.
        let mut k = 0;
        for (&on, &x) in p.iter().zip(src) {
            dst[k] = x;
            k += on as usize;
            k = k.min(self.width - 1);
        }
        for slot in &mut dst[active(p)..] {
            *slot = T::default();
        }
        out
    }

    #[inline]
    fn reverse<T: Lane>(&self, v: &Vector<T>) -> Vector<T> {
        let (w, v) = (self.width, self.lanes(v));
        Vector::from_fn(w, |i| v[w - 1 - i])
    }

    fn reduce_min<T: SortKey>(&self, v: &Vector<T>) -> T {
        let v = self.lanes(v);
        v[1..].iter().fold(v[0], |m, &x| m.min_of(x))
    }

    fn reduce_max<T: SortKey>(&self, v: &Vector<T>) -> T {
        let v = self.lanes(v);
        v[1..].iter().fold(v[0], |m, &x| m.max_of(x))
    }

    #[inline]
    fn add<T: LaneInt>(&self, a: &Vector<T>, b: &Vector<T>) -> Vector<T> {
        self.zip(a, b, |x, y| x + y)
    }

    #[inline]
    fn sub<T: LaneInt>(&self, a: &Vector<T>, b: &Vector<T>) -> Vector<T> {
        self.zip(a, b, |x, y| x - y)
    }

    #[inline]
    fn negate_where<T: LaneInt>(&self, p: &Predicate, v: &Vector<T>) -> Vector<T> {
        let (p, v) = (self.bits(p), self.lanes(v));
        Vector::from_fn(self.width, |i| if p[i] { -v[i] } else { v[i] })
    }

    #[inline]
    fn halve<T: LaneInt>(&self, v: &Vector<T>) -> Vector<T> {
        let v = self.lanes(v);
        Vector::from_fn(self.width, |i| {
            let x = v[i];
            debug_assert!(
                x >= T::zero() && (x & T::one()) == T::zero(),
                "halve expects even non-negative lanes, got {x:?}"
            );
            x >> 1
        })
    }

    #[inline]
    fn load<T: Lane>(&self, p: &Predicate, mem: &[T]) -> Vector<T> {
        let p = self.bits(p);
        let out = Vector::from_fn(self.width, |i| if p[i] { mem[i] } else { T::default() });
        if self.counters.is_some() {
            self.read(active(p) * std::mem::size_of::<T>());
        }
        out
    }

    #[inline]
    fn store<T: Lane>(&self, p: &Predicate, mem: &mut [T], v: &Vector<T>) {
        let (p, v) = (self.bits(p), self.lanes(v));
        for (i, (&on, &x)) in p.iter().zip(v).enumerate() {
            if on {
                mem[i] = x;
            }
        }
        if self.counters.is_some() {
            self.written(active(p) * std::mem::size_of::<T>());
        }
    }

    fn load_pairs<K: Lane, V: Lane>(&self, p: &Predicate, mem: &[(K, V)]) -> (Vector<K>, Vector<V>) {
        let p = self.bits(p);
        let keys = Vector::from_fn(self.width, |i| if p[i] { mem[i].0 } else { K::default() });
        let values = Vector::from_fn(self.width, |i| if p[i] { mem[i].1 } else { V::default() });
        if self.counters.is_some() {
            self.read(active(p) * std::mem::size_of::<(K, V)>());
        }
        (keys, values)
    }

    #[inline]
    fn load_n<T: Lane>(&self, mem: &[T]) -> Vector<T> {
        let n = mem.len();
        assert!(n <= self.width, "load of {n} lanes exceeds width {}", self.width);
        self.read(std::mem::size_of_val(mem));
        Vector::from_fn(self.width, |i| if i < n { mem[i] } else { T::default() })
    }

    #[inline]
    fn store_n<T: Lane>(&self, mem: &mut [T], v: &Vector<T>) {
        let n = mem.len();
        assert!(n <= self.width, "store of {n} lanes exceeds width {}", self.width);
        mem.copy_from_slice(&self.lanes(v)[..n]);
        self.written(std::mem::size_of_val(mem));
    }

    #[inline]
    fn load_pairs_n<K: Lane, V: Lane>(&self, mem: &[(K, V)]) -> (Vector<K>, Vector<V>) {
        let n = mem.len();
        assert!(n <= self.width, "load of {n} lanes exceeds width {}", self.width);
        self.read(std::mem::size_of_val(mem));
        (
            Vector::from_fn(self.width, |i| if i < n { mem[i].0 } else { K::default() }),
            Vector::from_fn(self.width, |i| if i < n { mem[i].1 } else { V::default() }),
        )
    }

    #[inline]
    fn store_pairs_n<K: Lane, V: Lane>(&self, mem: &mut [(K, V)], keys: &Vector<K>, values: &Vector<V>) {
        let n = mem.len();
        assert!(n <= self.width, "store of {n} lanes exceeds width {}", self.width);
        let (k, v) = (&self.lanes(keys)[..n], &self.lanes(values)[..n]);
        for (slot, (&k, &v)) in mem.iter_mut().zip(k.iter().zip(v)) {
            *slot = (k, v);
        }
        self.written(std::mem::size_of_val(mem));
    }

    fn store_pairs<K: Lane, V: Lane>(&self, p: &Predicate, mem: &mut [(K, V)], keys: &Vector<K>, values: &Vector<V>) {
        let (p, k, v) = (self.bits(p), self.lanes(keys), self.lanes(values));
        for i in 0..self.width {
            if p[i] {
                mem[i] = (k[i], v[i]);
            }
        }
        if self.counters.is_some() {
            self.written(active(p) * std::mem::size_of::<(K, V)>());
        }
    }
}
