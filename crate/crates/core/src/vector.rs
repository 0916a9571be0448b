//! Runtime-width element and predicate vectors.
//!
//! A vector always holds exactly `width` lanes, where the width is chosen by
//! the backend that produced it. Widths up to 16 live inline.

use std::fmt;

use smallvec::SmallVec;

use crate::element::Lane;

pub(crate) const INLINE_LANES: usize = 16;

/// A vector of `W` lanes.
#[derive(Clone, PartialEq)]
pub struct Vector<T> {
    lanes: SmallVec<[T; INLINE_LANES]>,
}

impl<T: Lane> Vector<T> {
    pub fn from_lanes(lanes: &[T]) -> Self {
        Self {
            lanes: SmallVec::from_slice(lanes),
        }
    }

    #[inline]
    pub fn from_fn(width: usize, mut f: impl FnMut(usize) -> T) -> Self {
        if width <= INLINE_LANES {
            let mut buf = [T::default(); INLINE_LANES];
            for (i, slot) in buf[..width].iter_mut().enumerate() {
                *slot = f(i);
            }
            return Self {
                lanes: SmallVec::from_buf_and_len(buf, width),
            };
        }
        Self {
            lanes: (0..width).map(f).collect(),
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.lanes.len()
    }

    #[inline]
    pub fn lanes(&self) -> &[T] {
        &self.lanes
    }

    #[inline]
    pub fn lane(&self, i: usize) -> T {
        self.lanes[i]
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.lanes.to_vec()
    }

    #[inline]
    pub(crate) fn lanes_mut(&mut self) -> &mut [T] {
        &mut self.lanes
    }
}

impl<T: Lane> fmt::Debug for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.lanes.iter()).finish()
    }
}

impl<T: Lane> From<Vec<T>> for Vector<T> {
    fn from(v: Vec<T>) -> Self {
        Self::from_lanes(&v)
    }
}

/// A vector of `W` booleans.
#[derive(Clone, PartialEq, Eq)]
pub struct Predicate {
    lanes: SmallVec<[bool; INLINE_LANES]>,
}

impl Predicate {
    pub fn from_lanes(lanes: &[bool]) -> Self {
        Self {
            lanes: SmallVec::from_slice(lanes),
        }
    }

    #[inline]
    pub fn from_fn(width: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        if width <= INLINE_LANES {
            let mut buf = [false; INLINE_LANES];
            for (i, slot) in buf[..width].iter_mut().enumerate() {
                *slot = f(i);
            }
            return Self {
                lanes: SmallVec::from_buf_and_len(buf, width),
            };
        }
        Self {
            lanes: (0..width).map(f).collect(),
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.lanes.len()
    }

    #[inline]
    pub fn lanes(&self) -> &[bool] {
        &self.lanes
    }

    #[inline]
    pub fn is_active(&self, i: usize) -> bool {
        self.lanes[i]
    }

    /// Block structure: `F` repeated `run` times, then `T` repeated `run` times, and so on.
    pub fn is_blocked(&self, run: usize) -> bool {
        run > 0 && self.lanes.iter().enumerate().all(|(i, &b)| b == ((i / run) % 2 == 1))
    }
}

impl fmt::Debug for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, b) in self.lanes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(if *b { "T" } else { "F" })?;
        }
        f.write_str("]")
    }
}
