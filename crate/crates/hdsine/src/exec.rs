//! Data-parallel trial execution with a sequential fallback.
//!
//! Results are collected in index order, so reductions over them are
//! identical whether the `parallel` feature is on or off and whatever the
//! rayon thread count is (`RAYON_NUM_THREADS` controls the pool size).

/// Map `f` over `0..n` using the rayon pool when the `parallel` feature is
/// enabled, preserving index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Sequential fallback used when the `parallel` feature is disabled.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_indexed_seq(n, f)
}

/// Always-sequential variant, kept public so benchmarks can compare the two
/// execution paths on identical workloads.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}
