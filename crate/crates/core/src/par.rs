//! Range-partitioned batch execution.
//!
//! Work over `0..total` is cut into contiguous ranges; with the `parallel`
//! feature and more than one worker the ranges run on a rayon pool, otherwise
//! they run in order on the calling thread. Results always come back in range
//! order, so merged output does not depend on the worker count.

use std::ops::Range;

/// Worker count used when the caller does not pick one.
pub fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

/// Whether this build can run batches on more than one thread.
pub const PARALLEL: bool = cfg!(feature = "parallel");

fn partition(total: u64, workers: usize) -> Vec<Range<u64>> {
    if total == 0 {
        return Vec::new();
    }
    // A few ranges per worker evens out uneven per-item cost.
    let pieces = (workers.max(1) as u64 * 8).min(total);
    let step = total.div_ceil(pieces);
    (0..total)
        .step_by(step as usize)
        .map(|start| start..(start + step).min(total))
        .collect()
}

/// Applies `f` to each contiguous range of `0..total` and returns the results in range order.
pub fn map_ranges<T, F>(total: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<u64>) -> T + Sync + Send,
{
    let ranges = partition(total, workers);
    #[cfg(feature = "parallel")]
    if workers > 1 {
        use rayon::prelude::*;
        match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
            Ok(pool) => return pool.install(|| ranges.into_par_iter().map(&f).collect()),
            Err(e) => log_pool_failure(&e),
        }
    }
    ranges.into_iter().map(f).collect()
}

#[cfg(feature = "parallel")]
fn log_pool_failure(e: &rayon::ThreadPoolBuildError) {
    eprintln!("warning: falling back to sequential execution: {e}");
}
