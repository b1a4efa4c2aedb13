//! Order-preserving scans over candidate lists.
//!
//! Candidates are evaluated in fixed-size chunks; inside a chunk the work is
//! spread over a rayon pool when the `parallel` feature is on. The reported
//! witness is always the lowest-index accepted candidate, so results do not
//! depend on the worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const CHUNK: usize = 2048;

#[derive(Debug, Clone)]
pub struct Scan<V> {
    /// Lowest index whose value was accepted.
    pub first: Option<(usize, V)>,
    /// Smallest value seen (ties: lowest index) over the examined prefix.
    pub best: Option<(usize, V)>,
    /// Number of candidates up to and including the witness, or all of them.
    pub examined: usize,
}

fn scan_chunked<T, V, E, A, M>(items: &[T], eval: E, accept: A, map_chunk: M) -> Scan<V>
where
    V: Clone + Ord,
    E: Fn(&T) -> V,
    A: Fn(&V) -> bool,
    M: Fn(&[T], &E) -> Vec<V>,
{
    let mut best: Option<(usize, V)> = None;
    for (c, chunk) in items.chunks(CHUNK).enumerate() {
        let vals = map_chunk(chunk, &eval);
        for (j, v) in vals.into_iter().enumerate() {
            let idx = c * CHUNK + j;
            if best.as_ref().map_or(true, |(_, b)| v < *b) {
                best = Some((idx, v.clone()));
            }
            if accept(&v) {
                return Scan {
                    first: Some((idx, v)),
                    best,
                    examined: idx + 1,
                };
            }
        }
    }
    Scan {
        first: None,
        best,
        examined: items.len(),
    }
}

/// Scans `items` in order, returning the first candidate whose value is accepted.
pub fn scan_first<T, V, E, A>(items: &[T], workers: usize, eval: E, accept: A) -> Scan<V>
where
    T: Sync,
    V: Clone + Ord + Send,
    E: Fn(&T) -> V + Sync,
    A: Fn(&V) -> bool,
{
    #[cfg(feature = "parallel")]
    {
        if workers > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .expect("thread pool");
            return scan_chunked(items, eval, accept, |chunk, e| {
                pool.install(|| chunk.par_iter().map(|t| e(t)).collect())
            });
        }
    }
    let _ = workers;
    scan_chunked(items, eval, accept, |chunk, e| {
        chunk.iter().map(e).collect()
    })
}

/// Maps every item, preserving order.
pub fn map_all<T, V, E>(items: &[T], workers: usize, eval: E) -> Vec<V>
where
    T: Sync,
    V: Send,
    E: Fn(&T) -> V + Sync,
{
    #[cfg(feature = "parallel")]
    {
        if workers > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .expect("thread pool");
            return pool.install(|| items.par_iter().map(&eval).collect());
        }
    }
    let _ = workers;
    items.iter().map(eval).collect()
}
