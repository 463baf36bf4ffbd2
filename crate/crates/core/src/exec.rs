//! Execution policy for the data-parallel kernels.
//!
//! Work is always split into fixed-size chunks whose partial results are
//! combined in chunk order, so a reduction gives the same bits whether the
//! chunks ran on one thread or many. Without the `parallel` feature every
//! policy runs sequentially.

use std::ops::Range;

/// Number of items handled by one unit of work.
pub const CHUNK_LEN: usize = 1 << 12;

/// Below this many items the parallel policy still runs inline.
pub const PARALLEL_MIN_LEN: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    fn runs_parallel(self, len: usize) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel && len >= PARALLEL_MIN_LEN
    }
}

fn chunk_ranges(len: usize) -> impl Iterator<Item = Range<usize>> + Clone {
    (0..len.div_ceil(CHUNK_LEN)).map(move |c| c * CHUNK_LEN..((c + 1) * CHUNK_LEN).min(len))
}

/// Maps `f` over the chunk ranges of `0..len`, returning results in chunk order.
pub fn map_chunks<T, F>(exec: Exec, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    if exec.runs_parallel(len) {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            let n_chunks = len.div_ceil(CHUNK_LEN);
            return (0..n_chunks)
                .into_par_iter()
                .map(|c| f(c * CHUNK_LEN..((c + 1) * CHUNK_LEN).min(len)))
                .collect();
        }
    }
    chunk_ranges(len).map(f).collect()
}

/// Ordered sum of per-chunk partial sums.
pub fn sum_chunks<F>(exec: Exec, len: usize, f: F) -> f64
where
    F: Fn(Range<usize>) -> f64 + Sync + Send,
{
    map_chunks(exec, len, f).into_iter().sum()
}

/// Runs `f(offset, chunk)` over disjoint mutable chunks of `data`.
pub fn for_each_chunk_mut<F>(exec: Exec, data: &mut [f64], f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    if exec.runs_parallel(data.len()) {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            data.par_chunks_mut(CHUNK_LEN)
                .enumerate()
                .for_each(|(c, chunk)| f(c * CHUNK_LEN, chunk));
            return;
        }
    }
    for (c, chunk) in data.chunks_mut(CHUNK_LEN).enumerate() {
        f(c * CHUNK_LEN, chunk);
    }
}

/// Raw view of an amplitude buffer for kernels whose work units touch
/// strided, non-contiguous index sets.
#[derive(Clone, Copy)]
pub(crate) struct SharedMut {
    ptr: *mut f64,
    len: usize,
}

// SAFETY: callers only hand out index sets that are disjoint between work
// units, so no two threads touch the same element.
unsafe impl Send for SharedMut {}
unsafe impl Sync for SharedMut {}

impl SharedMut {
    pub(crate) fn new(data: &mut [f64]) -> Self {
        SharedMut {
            ptr: data.as_mut_ptr(),
            len: data.len(),
        }
    }

    /// # Safety
    /// `i < len` and no other work unit accesses index `i` concurrently.
    #[inline(always)]
    pub(crate) unsafe fn get(self, i: usize) -> f64 {
        debug_assert!(i < self.len);
        unsafe { *self.ptr.add(i) }
    }

    /// # Safety
    /// Same contract as [`SharedMut::get`].
    #[inline(always)]
    pub(crate) unsafe fn set(self, i: usize, v: f64) {
        debug_assert!(i < self.len);
        unsafe { *self.ptr.add(i) = v }
    }
}

/// Runs `f` over group-index chunks of `0..groups`, with mutable access to
/// `data` through a [`SharedMut`]. `f` must only touch indices owned by the
/// groups in its range.
pub(crate) fn for_each_group_chunk<F>(exec: Exec, data: &mut [f64], groups: usize, f: F)
where
    F: Fn(SharedMut, Range<usize>) + Sync + Send,
{
    let shared = SharedMut::new(data);
    map_chunks(exec, groups, |r| f(shared, r));
}
