//! Fold/reduce helpers over index ranges.
//!
//! With the `parallel` feature the work is split across the current rayon
//! pool; without it the same closures run in a single sequential pass. The
//! merge step must be associative and commutative so both builds agree.

use crate::error::Result;
use std::ops::Range;

/// Splits `0..total` into contiguous chunks of at most `chunk` indices.
pub fn chunks(total: u64, chunk: u64) -> impl Iterator<Item = Range<u64>> + Clone {
    let chunk = chunk.max(1);
    let count = total.div_ceil(chunk);
    (0..count).map(move |c| c * chunk..((c + 1) * chunk).min(total))
}

/// Folds every chunk of `0..total` into an accumulator and merges the partials.
pub fn try_fold_chunks<A, I, F, M>(total: u64, chunk: u64, init: I, fold: F, merge: M) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(A, Range<u64>) -> Result<A> + Sync + Send,
    M: Fn(A, A) -> Result<A> + Sync + Send,
{
    let chunk = chunk.max(1);
    let count = total.div_ceil(chunk);
    let range_of = move |c: u64| c * chunk..((c + 1) * chunk).min(total);

    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..count)
            .into_par_iter()
            .try_fold(&init, |acc, c| fold(acc, range_of(c)))
            .try_reduce(&init, &merge)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = &merge;
        (0..count).try_fold(init(), |acc, c| fold(acc, range_of(c)))
    }
}

/// Maps each index in `0..len` and collects the results in index order.
pub fn map_collect<T, F>(len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..len).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..len).map(f).collect()
    }
}

/// Number of workers the helpers will use.
pub fn workers() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

/// Runs `f` with at most `workers` threads (a no-op in sequential builds).
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        f()
    }
}
