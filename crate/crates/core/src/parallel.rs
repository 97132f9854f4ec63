use rayon::prelude::*;

/// Maps `f` over `items` on a dedicated pool of `threads` workers (0 = rayon's
/// default) and returns the results in input order.
pub(crate) fn ordered_map<I, T, F>(threads: usize, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    if threads == 1 {
        return items.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool");
    pool.install(|| items.par_iter().map(f).collect())
}
