//! In-register record sets: plain key vectors or key vectors with payloads.
//!
//! The bitonic and partition kernels are written once against [`Register`].
//! For plain keys a compare-exchange is a single `blend_min_max`; for
//! key/value records the key comparison produces a predicate that then
//! moves both the keys and the payloads.

use std::fmt::Debug;

use crate::backend::VectorBackend;
use crate::element::{Lane, SortKey};
use crate::vector::{Predicate, Vector};

pub trait Register: Clone + Debug + Send + Sync {
    type Key: SortKey;

    /// True when lanes carry data besides the key.
    const HAS_PAYLOAD: bool;

    fn keys(&self) -> &Vector<Self::Key>;

    /// Every key lane set to the sentinel.
    fn sentinel<B: VectorBackend>(b: &B) -> Self;

    fn permute<B: VectorBackend>(&self, b: &B, idx: &Vector<i32>) -> Self;
    fn reverse<B: VectorBackend>(&self, b: &B) -> Self;
    fn compact<B: VectorBackend>(&self, b: &B, p: &Predicate) -> Self;
    fn select<B: VectorBackend>(b: &B, p: &Predicate, on: &Self, off: &Self) -> Self;

    /// One network stage: lanes where `take_max` is set keep the larger of
    /// `own` and `partner`, the others keep the smaller.
    fn compare_exchange<B: VectorBackend>(b: &B, take_max: &Predicate, own: &Self, partner: &Self) -> Self;

    /// Lanewise (lower, upper).
    fn min_max<B: VectorBackend>(b: &B, a: &Self, c: &Self) -> (Self, Self);
}

impl<T: SortKey> Register for Vector<T> {
    type Key = T;
    const HAS_PAYLOAD: bool = false;

    #[inline(always)]
    fn keys(&self) -> &Vector<T> {
        self
    }

    fn sentinel<B: VectorBackend>(b: &B) -> Self {
        b.dup(T::SENTINEL)
    }

    #[inline(always)]
    fn permute<B: VectorBackend>(&self, b: &B, idx: &Vector<i32>) -> Self {
        b.permute(self, idx)
    }

    #[inline(always)]
    fn reverse<B: VectorBackend>(&self, b: &B) -> Self {
        b.reverse(self)
    }

    #[inline(always)]
    fn compact<B: VectorBackend>(&self, b: &B, p: &Predicate) -> Self {
        b.compact(p, self)
    }

    #[inline(always)]
    fn select<B: VectorBackend>(b: &B, p: &Predicate, on: &Self, off: &Self) -> Self {
        b.select(p, on, off)
    }

    #[inline(always)]
    fn compare_exchange<B: VectorBackend>(b: &B, take_max: &Predicate, own: &Self, partner: &Self) -> Self {
        b.blend_min_max(take_max, own, partner)
    }

    #[inline(always)]
    fn min_max<B: VectorBackend>(b: &B, a: &Self, c: &Self) -> (Self, Self) {
        (b.min(a, c), b.max(a, c))
    }
}

/// Key lanes with a payload lane riding along each key.
#[derive(Clone, Debug, PartialEq)]
pub struct KvVector<K: Lane, V: Lane> {
    pub keys: Vector<K>,
    pub values: Vector<V>,
}

impl<K: SortKey, V: Lane> KvVector<K, V> {
    pub fn new(keys: Vector<K>, values: Vector<V>) -> Self {
        assert_eq!(keys.width(), values.width(), "key and payload widths differ");
        Self { keys, values }
    }
}

impl<K: SortKey, V: Lane> Register for KvVector<K, V> {
    type Key = K;
    const HAS_PAYLOAD: bool = true;

    #[inline(always)]
    fn keys(&self) -> &Vector<K> {
        &self.keys
    }

    fn sentinel<B: VectorBackend>(b: &B) -> Self {
        Self {
            keys: b.dup(K::SENTINEL),
            values: b.dup(V::default()),
        }
    }

    #[inline]
    fn permute<B: VectorBackend>(&self, b: &B, idx: &Vector<i32>) -> Self {
        Self {
            keys: b.permute(&self.keys, idx),
            values: b.permute(&self.values, idx),
        }
    }

    #[inline]
    fn reverse<B: VectorBackend>(&self, b: &B) -> Self {
        Self {
            keys: b.reverse(&self.keys),
            values: b.reverse(&self.values),
        }
    }

    #[inline]
    fn compact<B: VectorBackend>(&self, b: &B, p: &Predicate) -> Self {
        Self {
            keys: b.compact(p, &self.keys),
            values: b.compact(p, &self.values),
        }
    }

    #[inline]
    fn select<B: VectorBackend>(b: &B, p: &Predicate, on: &Self, off: &Self) -> Self {
        Self {
            keys: b.select(p, &on.keys, &off.keys),
            values: b.select(p, &on.values, &off.values),
        }
    }

    #[inline]
    fn compare_exchange<B: VectorBackend>(b: &B, take_max: &Predicate, own: &Self, partner: &Self) -> Self {
        // Both lanes of a pair must agree on swapping even when keys tie,
        // otherwise one payload is duplicated and the other lost. A min lane
        // swaps iff own > partner, a max lane iff partner > own: the same event.
        let own_greater = b.not(&b.compare_lte(&own.keys, &partner.keys));
        let partner_greater = b.not(&b.compare_lte(&partner.keys, &own.keys));
        let swap = b.or(
            &b.and(take_max, &partner_greater),
            &b.and(&b.not(take_max), &own_greater),
        );
        Self::select(b, &swap, partner, own)
    }

    #[inline]
    fn min_max<B: VectorBackend>(b: &B, a: &Self, c: &Self) -> (Self, Self) {
        let keep = b.compare_lte(&a.keys, &c.keys);
        (Self::select(b, &keep, a, c), Self::select(b, &keep, c, a))
    }
}
