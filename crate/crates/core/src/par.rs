//! Data-parallel map with a sequential fallback.
//!
//! With the `parallel` feature (default) [`map`] runs on the rayon pool;
//! without it every call degrades to a plain iterator. [`map_seq`] is always
//! sequential so the two paths can be compared side by side.

/// Maps `f` over `items`, preserving order.
#[cfg(feature = "parallel")]
pub fn map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    map_seq(items, f)
}

pub fn map_seq<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

/// Runs `job` on a pool of `threads` workers (0 means the rayon default).
/// Without the `parallel` feature the job simply runs on the caller.
#[cfg(feature = "parallel")]
pub fn with_threads<R: Send>(threads: usize, job: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        return job();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(job),
        Err(_) => job(),
    }
}

#[cfg(not(feature = "parallel"))]
pub fn with_threads<R: Send>(_threads: usize, job: impl FnOnce() -> R + Send) -> R {
    job()
}

#[cfg(test)]
mod tests {
    #[test]
    fn parallel_and_sequential_agree() {
        let items: Vec<u64> = (0..1000).collect();
        let a = super::map(items.clone(), |x| x * x + 1);
        let b = super::map_seq(items, |x| x * x + 1);
        assert_eq!(a, b);
        assert_eq!(super::with_threads(2, || 7), 7);
    }
}
