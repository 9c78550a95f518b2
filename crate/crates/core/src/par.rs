//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) the maps below fan out over the
//! rayon global pool; without it they run sequentially. Either way the
//! output order is the input order, and reductions elsewhere in the crate
//! always fold fixed-size index chunks in order, so results are bitwise
//! identical across both modes and any thread count.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Cap the global thread pool from the `SPECTRAL_SAMPLER_THREADS`
/// environment variable. Call once at process start; later calls and
/// unparseable values are ignored.
pub fn init_thread_cap_from_env() {
    #[cfg(feature = "parallel")]
    {
        if let Ok(v) = std::env::var("SPECTRAL_SAMPLER_THREADS") {
            if let Ok(n) = v.trim().parse::<usize>() {
                if n >= 1 {
                    let _ = rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build_global();
                }
            }
        }
    }
}

/// Map `f` over `0..n`, collecting results in index order.
pub fn map_indices<U, F>(n: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(usize) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// Sequential twin of [`map_indices`], available in both modes (benchmarks
/// compare the two on the same build).
pub fn map_indices_seq<U, F>(n: usize, f: F) -> Vec<U>
where
    F: Fn(usize) -> U,
{
    (0..n).map(f).collect()
}

/// Map `f` over fixed index chunks of `0..n`, collecting per-chunk results
/// in chunk order. Chunk boundaries depend only on `n` and `chunk`, never
/// on the thread count, which keeps downstream folds deterministic.
pub fn map_chunks<U, F>(n: usize, chunk: usize, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(Range<usize>) -> U + Sync + Send,
{
    let ranges: Vec<Range<usize>> = chunk_ranges(n, chunk).collect();
    #[cfg(feature = "parallel")]
    {
        ranges.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        ranges.into_iter().map(f).collect()
    }
}

/// Sequential twin of [`map_chunks`].
pub fn map_chunks_seq<U, F>(n: usize, chunk: usize, f: F) -> Vec<U>
where
    F: Fn(Range<usize>) -> U,
{
    chunk_ranges(n, chunk).map(f).collect()
}

fn chunk_ranges(n: usize, chunk: usize) -> impl Iterator<Item = Range<usize>> {
    let chunk = chunk.max(1);
    (0..n.div_ceil(chunk)).map(move |c| {
        let start = c * chunk;
        start..(start + chunk).min(n)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordered_and_complete() {
        let out = map_indices(100, |i| i * 2);
        assert_eq!(out, (0..100).map(|i| i * 2).collect::<Vec<_>>());
        assert_eq!(map_indices(0, |i| i), Vec::<usize>::new());
    }

    #[test]
    fn chunks_cover_range_in_order() {
        let ranges = map_chunks(10, 3, |r| r);
        assert_eq!(ranges, vec![0..3, 3..6, 6..9, 9..10]);
        let sums = map_chunks(1000, 64, |r| r.sum::<usize>());
        assert_eq!(sums.iter().sum::<usize>(), (0..1000).sum::<usize>());
    }

    #[test]
    fn par_matches_seq_bitwise() {
        let a = map_chunks(997, 32, |r| r.map(|i| (i as f64).sin()).sum::<f64>());
        let b = map_chunks_seq(997, 32, |r| r.map(|i| (i as f64).sin()).sum::<f64>());
        assert_eq!(a, b);
    }
}
