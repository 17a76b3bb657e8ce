//! Deterministic replica driver: replica r always receives the seed
//! `replica_seed(seed, r)` and results come back in replica order, whatever
//! the worker count.

use crate::rng::replica_seed;
use rayon::prelude::*;

/// Worker count from `HCBURGER_WORKERS`, else the available parallelism.
pub fn default_workers() -> usize {
    std::env::var("HCBURGER_WORKERS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `f(r, seed_r)` for r in 0..n on `workers` threads.
pub fn run_replicas<T, F>(n: u64, seed: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64, u64) -> T + Sync + Send,
{
    let job = || (0..n).into_par_iter().map(|r| f(r, replica_seed(seed, r))).collect();
    if workers <= 1 {
        return (0..n).map(|r| f(r, replica_seed(seed, r))).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}
