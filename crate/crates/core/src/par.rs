//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature the helpers dispatch to rayon when asked to and
//! the input is large enough to amortize the fork. Without it every call runs
//! sequentially and the `parallel` flag is ignored.

/// Below this many items the sequential path is always taken.
#[cfg(feature = "parallel")]
const MIN_PARALLEL_LEN: usize = 128;

pub fn map<T, R, F>(items: &[T], parallel: bool, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel && items.len() >= MIN_PARALLEL_LEN {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = parallel;
    items.iter().map(f).collect()
}

/// Whether this build can run anything in parallel at all.
pub const fn available() -> bool {
    cfg!(feature = "parallel")
}
