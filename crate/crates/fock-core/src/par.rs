//! Runtime choice between the rayon path and a plain sequential loop.
//!
//! With the `parallel` feature disabled both variants run sequentially, so
//! callers never need their own cfg switches.

use std::ops::Range;

const REDUCE_CHUNKS: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Exec {
    #[default]
    Parallel,
    Sequential,
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Order-preserving map.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    pub fn map_range<R, F>(self, range: Range<usize>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }

    /// Map then reduce with an associative `combine`. The range is cut into
    /// a fixed number of chunks that depends only on its length; each chunk
    /// is folded in order and the partials are folded in order, so both
    /// variants return bit-identical results for any thread count.
    pub fn map_reduce<R, F, C>(self, range: Range<usize>, identity: R, f: F, combine: C) -> R
    where
        R: Send + Sync + Clone,
        F: Fn(usize) -> R + Sync + Send,
        C: Fn(R, R) -> R + Sync + Send,
    {
        let chunk = range.len().div_ceil(REDUCE_CHUNKS).max(1);
        let starts: Vec<usize> = range.clone().step_by(chunk).collect();
        let end = range.end;
        let parts = self.map(&starts, |&s| (s..(s + chunk).min(end)).map(&f).fold(identity.clone(), &combine));
        parts.into_iter().fold(identity, combine)
    }
}

/// Configure the global pool once. Later calls are ignored by rayon;
/// we swallow that error because the first configuration wins anyway.
pub fn init_threads(threads: usize) {
    #[cfg(feature = "parallel")]
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
}
