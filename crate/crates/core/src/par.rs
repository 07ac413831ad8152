//! Data-parallel helpers.
//!
//! With the `parallel` feature (the default) these run on rayon's thread
//! pool. Without it, or under [`Parallelism::Sequential`], they are plain
//! iterator loops. Results always come back in input order, so output is
//! identical either way.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parallelism {
    Sequential,
    #[default]
    Parallel,
}

impl Parallelism {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

/// `items.map(f)` in input order.
pub fn map<T, R, F>(mode: Parallelism, items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if mode.is_parallel() && items.len() > 1 {
            use rayon::prelude::*;
            return items.into_par_iter().map(f).collect();
        }
    }
    let _ = mode;
    items.into_iter().map(f).collect()
}

/// Runs `f` with at most `jobs` worker threads (`0` = library default).
pub fn with_jobs<R: Send>(jobs: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        if jobs > 0 {
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                return pool.install(f);
            }
        }
    }
    let _ = jobs;
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_preserved() {
        let xs: Vec<u64> = (0..100).collect();
        let a = map(Parallelism::Parallel, xs.clone(), |x| x * x);
        let b = map(Parallelism::Sequential, xs, |x| x * x);
        assert_eq!(a, b);
        assert_eq!(with_jobs(2, || a.len()), 100);
    }
}
