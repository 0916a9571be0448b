//! Lane element traits.

use std::fmt::Debug;

use num_traits::{PrimInt, Signed};

/// Anything that can sit in a vector lane: keys, payloads, lane indices.
pub trait Lane: Copy + Default + PartialEq + Debug + Send + Sync + 'static {}

impl<T> Lane for T where T: Copy + Default + PartialEq + Debug + Send + Sync + 'static {}

/// A totally ordered (NaN excluded) sort key with a padding sentinel.
pub trait SortKey: Lane + PartialOrd {
    /// Greatest value of the type. Padded lanes hold it so they never move left.
    const SENTINEL: Self;

    fn is_nan(self) -> bool {
        false
    }

    #[inline(always)]
    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    #[inline(always)]
    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

macro_rules! int_key {
    ($($t:ty),*) => {
        $(impl SortKey for $t {
            const SENTINEL: Self = <$t>::MAX;
        })*
    };
}

int_key!(i8, i16, i32, i64, u8, u16, u32, u64, usize, isize);

macro_rules! float_key {
    ($($t:ty),*) => {
        $(impl SortKey for $t {
            const SENTINEL: Self = <$t>::INFINITY;

            #[inline(always)]
            fn is_nan(self) -> bool {
                <$t>::is_nan(self)
            }
        })*
    };
}

float_key!(f32, f64);

/// Signed integer lanes used for index and shift arithmetic.
pub trait LaneInt: Lane + PrimInt + Signed {}

impl<T> LaneInt for T where T: Lane + PrimInt + Signed {}
