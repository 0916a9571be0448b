//! Memory layouts the kernels sort in place.
//!
//! A view addresses records by absolute index and moves them between memory
//! and registers through the backend's predicated loads and stores, so the
//! traffic counter sees every vector access. Three layouts exist:
//!
//! * [`ScalarView`]: one array of keys.
//! * [`SoaView`]: a key array and a payload array of equal length.
//! * [`AosView`]: one array of `(key, payload)` pairs.
//!
//! Views hold raw pointers so that the parallel driver can hand disjoint
//! intervals of the same array to several workers through [`SortView::alias`].

use std::marker::PhantomData;
use std::mem::size_of;
use std::slice;

use crate::backend::VectorBackend;
use crate::element::{Lane, SortKey};
use crate::error::{Error, Result};
use crate::register::{KvVector, Register};

pub trait SortView: Send {
    type Key: SortKey;
    type Reg: Register<Key = Self::Key>;

    /// Bytes occupied by one record in memory.
    const RECORD_BYTES: usize;

    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn key(&self, i: usize) -> Self::Key;

    fn swap(&mut self, i: usize, j: usize);

    /// Loads `active` records starting at `at` into the first lanes.
    fn load<B: VectorBackend>(&self, b: &B, at: usize, active: usize) -> Self::Reg;

    /// Stores the first `active` lanes of `reg` at `at`.
    fn store<B: VectorBackend>(&mut self, b: &B, at: usize, active: usize, reg: &Self::Reg);

    /// A second view of the same memory.
    ///
    /// # Safety
    ///
    /// While both views are alive, no index may be accessed through one of
    /// them while the other accesses it too, unless both only read.
    unsafe fn alias(&self) -> Self
    where
        Self: Sized;
}

#[inline(always)]
fn check_range(at: usize, active: usize, len: usize) {
    assert!(
        at <= len && active <= len - at,
        "access {at}..{} out of bounds for length {len}",
        at + active
    );
}

pub struct ScalarView<'a, T> {
    ptr: *mut T,
    len: usize,
    _marker: PhantomData<&'a mut [T]>,
}

// SAFETY: the view is a `&mut [T]` in disguise; `alias` is the only way to
// share it and carries its own contract.
unsafe impl<T: Send> Send for ScalarView<'_, T> {}

impl<'a, T: SortKey> ScalarView<'a, T> {
    pub fn new(data: &'a mut [T]) -> Self {
        Self {
            ptr: data.as_mut_ptr(),
            len: data.len(),
            _marker: PhantomData,
        }
    }
}

impl<T: SortKey> SortView for ScalarView<'_, T> {
    type Key = T;
    type Reg = crate::vector::Vector<T>;
    const RECORD_BYTES: usize = size_of::<T>();

    #[inline(always)]
    fn len(&self) -> usize {
        self.len
    }

    #[inline(always)]
    fn key(&self, i: usize) -> T {
        assert!(i < self.len);
        // SAFETY: bounds checked above.
        unsafe { *self.ptr.add(i) }
    }

    #[inline(always)]
    fn swap(&mut self, i: usize, j: usize) {
        assert!(i < self.len && j < self.len);
        // SAFETY: both indices in bounds; ptr::swap tolerates i == j.
        unsafe { std::ptr::swap(self.ptr.add(i), self.ptr.add(j)) }
    }

    #[inline]
    fn load<B: VectorBackend>(&self, b: &B, at: usize, active: usize) -> Self::Reg {
        check_range(at, active, self.len);
        // SAFETY: range checked; the shared slice lives only for this call.
        let mem = unsafe { slice::from_raw_parts(self.ptr.add(at), active) };
        b.load_n(mem)
    }

    #[inline]
    fn store<B: VectorBackend>(&mut self, b: &B, at: usize, active: usize, reg: &Self::Reg) {
        check_range(at, active, self.len);
        // SAFETY: range checked; the view has exclusive access to it.
        let mem = unsafe { slice::from_raw_parts_mut(self.ptr.add(at), active) };
        b.store_n(mem, reg);
    }

    unsafe fn alias(&self) -> Self {
        Self {
            ptr: self.ptr,
            len: self.len,
            _marker: PhantomData,
        }
    }
}

/// Keys and payloads in two arrays.
pub struct SoaView<'a, K, V> {
    keys: *mut K,
    values: *mut V,
    len: usize,
    _marker: PhantomData<(&'a mut [K], &'a mut [V])>,
}

// SAFETY: as for `ScalarView`.
unsafe impl<K: Send, V: Send> Send for SoaView<'_, K, V> {}

impl<'a, K: SortKey, V: Lane> SoaView<'a, K, V> {
    pub fn new(keys: &'a mut [K], values: &'a mut [V]) -> Result<Self> {
        if keys.len() != values.len() {
            return Err(Error::LengthMismatch {
                keys: keys.len(),
                payloads: values.len(),
            });
        }
        Ok(Self {
            keys: keys.as_mut_ptr(),
            values: values.as_mut_ptr(),
            len: keys.len(),
            _marker: PhantomData,
        })
    }
}

impl<K: SortKey, V: Lane> SortView for SoaView<'_, K, V> {
    type Key = K;
    type Reg = KvVector<K, V>;
    const RECORD_BYTES: usize = size_of::<K>() + size_of::<V>();

    #[inline(always)]
    fn len(&self) -> usize {
        self.len
    }

    #[inline(always)]
    fn key(&self, i: usize) -> K {
        assert!(i < self.len);
        // SAFETY: bounds checked above.
        unsafe { *self.keys.add(i) }
    }

    #[inline(always)]
    fn swap(&mut self, i: usize, j: usize) {
        assert!(i < self.len && j < self.len);
        // SAFETY: both indices in bounds.
        unsafe {
            std::ptr::swap(self.keys.add(i), self.keys.add(j));
            std::ptr::swap(self.values.add(i), self.values.add(j));
        }
    }

    #[inline]
    fn load<B: VectorBackend>(&self, b: &B, at: usize, active: usize) -> Self::Reg {
        check_range(at, active, self.len);
        // SAFETY: range checked; slices live only for this call.
        let (keys, values) = unsafe {
            (
                slice::from_raw_parts(self.keys.add(at), active),
                slice::from_raw_parts(self.values.add(at), active),
            )
        };
        KvVector {
            keys: b.load_n(keys),
            values: b.load_n(values),
        }
    }

    #[inline]
    fn store<B: VectorBackend>(&mut self, b: &B, at: usize, active: usize, reg: &Self::Reg) {
        check_range(at, active, self.len);
        // SAFETY: range checked; the view has exclusive access to it.
        let (keys, values) = unsafe {
            (
                slice::from_raw_parts_mut(self.keys.add(at), active),
                slice::from_raw_parts_mut(self.values.add(at), active),
            )
        };
        b.store_n(keys, &reg.keys);
        b.store_n(values, &reg.values);
    }

    unsafe fn alias(&self) -> Self {
        Self {
            keys: self.keys,
            values: self.values,
            len: self.len,
            _marker: PhantomData,
        }
    }
}

/// Interleaved `(key, payload)` pairs in one array.
pub struct AosView<'a, K, V> {
    ptr: *mut (K, V),
    len: usize,
    _marker: PhantomData<&'a mut [(K, V)]>,
}

// SAFETY: as for `ScalarView`.
unsafe impl<K: Send, V: Send> Send for AosView<'_, K, V> {}

impl<'a, K: SortKey, V: Lane> AosView<'a, K, V> {
    pub fn new(pairs: &'a mut [(K, V)]) -> Self {
        Self {
            ptr: pairs.as_mut_ptr(),
            len: pairs.len(),
            _marker: PhantomData,
        }
    }
}

impl<K: SortKey, V: Lane> SortView for AosView<'_, K, V> {
    type Key = K;
    type Reg = KvVector<K, V>;
    const RECORD_BYTES: usize = size_of::<(K, V)>();

    #[inline(always)]
    fn len(&self) -> usize {
        self.len
    }

    #[inline(always)]
    fn key(&self, i: usize) -> K {
        assert!(i < self.len);
        // SAFETY: bounds checked above.
        unsafe { (*self.ptr.add(i)).0 }
    }

    #[inline(always)]
    fn swap(&mut self, i: usize, j: usize) {
        assert!(i < self.len && j < self.len);
        // SAFETY: both indices in bounds.
        unsafe { std::ptr::swap(self.ptr.add(i), self.ptr.add(j)) }
    }

    #[inline]
    fn load<B: VectorBackend>(&self, b: &B, at: usize, active: usize) -> Self::Reg {
        check_range(at, active, self.len);
        // SAFETY: range checked; the slice lives only for this call.
        let mem = unsafe { slice::from_raw_parts(self.ptr.add(at), active) };
        let (keys, values) = b.load_pairs_n(mem);
        KvVector { keys, values }
    }

    #[inline]
    fn store<B: VectorBackend>(&mut self, b: &B, at: usize, active: usize, reg: &Self::Reg) {
        check_range(at, active, self.len);
        // SAFETY: range checked; the view has exclusive access to it.
        let mem = unsafe { slice::from_raw_parts_mut(self.ptr.add(at), active) };
        b.store_pairs_n(mem, &reg.keys, &reg.values);
    }

    unsafe fn alias(&self) -> Self {
        Self {
            ptr: self.ptr,
            len: self.len,
            _marker: PhantomData,
        }
    }
}
