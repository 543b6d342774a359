//! Worker-count control and the fixed chunking used by every scan.
//!
//! Chunk boundaries depend only on the range, never on the number of
//! workers, and floating-point partials are merged in chunk order. Integer
//! counters are merged by summation. Either way the result does not depend
//! on how many threads ran.

use rayon::prelude::*;

/// Numbers per work unit in range scans.
pub const SCAN_CHUNK: u64 = 1 << 16;

/// Run `f` on a dedicated pool with `workers` threads (0 means rayon's default).
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool construction");
    pool.install(f)
}

/// Half-open chunks `[lo, hi)` covering `start..=end`.
pub fn chunks(start: u64, end: u64) -> impl IndexedParallelIterator<Item = (u64, u64)> {
    let len = if end >= start { end - start + 1 } else { 0 };
    let n = len.div_ceil(SCAN_CHUNK);
    (0..n as usize).into_par_iter().map(move |i| {
        let i = i as u64;
        let lo = start + i * SCAN_CHUNK;
        (lo, (lo + SCAN_CHUNK).min(end + 1))
    })
}
