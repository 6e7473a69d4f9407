// Thin switch between rayon and plain iterators. Results are always returned
// in input order so both builds produce identical output.

use std::sync::atomic::{AtomicBool, Ordering};

static ENABLED: AtomicBool = AtomicBool::new(cfg!(feature = "parallel"));

/// Turns the data-parallel paths on or off at run time. Without the
/// `parallel` feature this is a no-op and everything runs sequentially.
pub fn set_parallel(enabled: bool) {
    ENABLED.store(enabled && cfg!(feature = "parallel"), Ordering::Relaxed);
}

pub fn parallel_enabled() -> bool {
    ENABLED.load(Ordering::Relaxed)
}

#[cfg(feature = "parallel")]
pub(crate) fn map_collect<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    if !parallel_enabled() {
        return items.into_iter().map(f).collect();
    }
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_collect<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    F: Fn(T) -> R,
{
    items.into_iter().map(f).collect()
}

/// First index in `0..len` (lowest index) whose result is `Some`.
#[cfg(feature = "parallel")]
pub(crate) fn find_first<R, F>(len: usize, f: F) -> Option<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    use rayon::prelude::*;
    if !parallel_enabled() {
        return (0..len).find_map(f);
    }
    (0..len).into_par_iter().find_map_first(f)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn find_first<R, F>(len: usize, f: F) -> Option<R>
where
    F: Fn(usize) -> Option<R>,
{
    (0..len).find_map(f)
}
