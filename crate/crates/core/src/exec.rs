//! Sequential / data-parallel dispatch for the exhaustive scans.
//!
//! With the `parallel` feature (on by default) the hot loops run on the rayon
//! pool; without it every helper degrades to a plain iterator. Either way the
//! output order matches the input order, so reductions stay deterministic.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a scan distributes its work.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[derive(Default)]
pub enum Execution {
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}


pub(crate) fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).collect(),
    }
}

/// Maximum of `f` over `items`; `None` on empty input.
pub(crate) fn max_of<T, F>(exec: Execution, items: &[T], f: F) -> Option<i64>
where
    T: Sync,
    F: Fn(&T) -> i64 + Sync + Send,
{
    match exec {
        Execution::Sequential => items.iter().map(f).max(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => items.par_iter().map(f).max(),
    }
}

/// Indices `i` (ascending) with `keep(&items[i])`.
pub(crate) fn positions<T, F>(exec: Execution, items: &[T], keep: F) -> Vec<usize>
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    match exec {
        Execution::Sequential => items
            .iter()
            .enumerate()
            .filter(|(_, t)| keep(t))
            .map(|(i, _)| i)
            .collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => items
            .par_iter()
            .enumerate()
            .filter(|(_, t)| keep(t))
            .map(|(i, _)| i)
            .collect(),
    }
}
