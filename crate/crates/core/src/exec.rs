//! Execution strategy for the data-parallel loops (enumeration, grids, series
//! products). With the `parallel` feature off every strategy runs sequentially.
//! Both strategies produce identical results in identical order.

use std::ops::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// Whether this strategy actually fans out in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// `f` applied to each index in `range`, collected in index order.
    pub fn map_range<T, F>(self, range: Range<usize>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return range.into_par_iter().map(f).collect();
        }
        range.map(f).collect()
    }

    /// `f` applied to each item, collected in input order.
    pub fn map_slice<S, T, F>(self, items: &[S], f: F) -> Vec<T>
    where
        S: Sync,
        T: Send,
        F: Fn(&S) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Sum of `f` over `range`, split into chunks of `chunk` indices.
    pub fn sum_chunks<F>(self, range: Range<u64>, chunk: u64, f: F) -> u64
    where
        F: Fn(Range<u64>) -> u64 + Sync + Send,
    {
        let chunk = chunk.max(1);
        let starts: Vec<u64> = (range.start..range.end).step_by(chunk as usize).collect();
        let end = range.end;
        let parts = self.map_slice(&starts, |&s| f(s..(s + chunk).min(end)));
        parts.into_iter().sum()
    }
}
