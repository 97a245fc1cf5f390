//! Index-range helpers that run on rayon when the `parallel` feature is on
//! and the runtime switch allows it, and sequentially otherwise. Results are
//! always in index order, so output never depends on scheduling.

use std::sync::atomic::{AtomicBool, Ordering};

static PARALLEL: AtomicBool = AtomicBool::new(true);

/// Runtime switch, used by the benchmark to time both paths in one binary.
pub fn set_parallel(on: bool) {
    PARALLEL.store(on, Ordering::Relaxed);
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel") && PARALLEL.load(Ordering::Relaxed)
}

/// `(f(0), …, f(n-1))`.
pub fn map_range<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// Lowest index `i` with `f(i) = Some(_)`.
pub fn find_first<T, F>(n: usize, f: F) -> Option<T>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if parallel_enabled() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().find_map_first(f);
    }
    (0..n).find_map(f)
}

/// Decodes a flat row-major index into a tuple with the given extents.
pub fn unflatten(mut flat: usize, extents: &[usize]) -> Vec<usize> {
    let mut ix = vec![0; extents.len()];
    for slot in (0..extents.len()).rev() {
        ix[slot] = flat % extents[slot];
        flat /= extents[slot];
    }
    ix
}

/// First index tuple (row-major) for which `f` reports a failure.
pub fn find_first_tuple<T, F>(extents: &[usize], f: F) -> Option<T>
where
    T: Send,
    F: Fn(&[usize]) -> Option<T> + Sync + Send,
{
    let total: usize = extents.iter().product();
    find_first(total, |flat| f(&unflatten(flat, extents)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unflatten_is_row_major() {
        assert_eq!(unflatten(0, &[2, 3]), vec![0, 0]);
        assert_eq!(unflatten(4, &[2, 3]), vec![1, 1]);
    }

    #[test]
    fn first_failure_is_deterministic() {
        let hit = find_first_tuple(&[5, 5, 5], |ix| (ix[1] == 2 && ix[2] >= 3).then(|| ix.to_vec()));
        assert_eq!(hit, Some(vec![0, 2, 3]));
        set_parallel(false);
        let seq = find_first_tuple(&[5, 5, 5], |ix| (ix[1] == 2 && ix[2] >= 3).then(|| ix.to_vec()));
        set_parallel(true);
        assert_eq!(seq, hit);
    }
}
