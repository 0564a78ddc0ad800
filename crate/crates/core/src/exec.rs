//! Execution strategy for the embarrassingly parallel inner loops
//! (oracle grids, Monte Carlo trials, per-candidate filters).
//!
//! Everything funnels through `map_indices`, which returns results in
//! index order regardless of mode, so callers observe identical output
//! whether the work ran on one thread or many.

/// How to run a batch of independent work items.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ExecMode {
    /// One thread, plain iteration.
    Sequential,
    /// Work-stealing thread pool. Falls back to sequential when the
    /// crate is built without the `parallel` feature.
    #[default]
    Parallel,
}

impl ExecMode {
    pub fn label(self) -> &'static str {
        match self {
            ExecMode::Sequential => "sequential",
            ExecMode::Parallel => "parallel",
        }
    }
}

/// Applies `f` to every index in `0..count`, returning results in
/// index order.
pub fn map_indices<T, F>(mode: ExecMode, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        ExecMode::Sequential => (0..count).map(f).collect(),
        ExecMode::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                (0..count).into_par_iter().map(f).collect()
            }
            #[cfg(not(feature = "parallel"))]
            {
                (0..count).map(f).collect()
            }
        }
    }
}

/// Applies `f` to every element of a slice, returning results in input
/// order.
pub fn map_slice<'a, S, T, F>(mode: ExecMode, items: &'a [S], f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&'a S) -> T + Sync + Send,
{
    map_indices(mode, items.len(), |i| f(&items[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_preserve_index_order() {
        let seq = map_indices(ExecMode::Sequential, 100, |i| i * i);
        let par = map_indices(ExecMode::Parallel, 100, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[7], 49);
    }

    #[test]
    fn slice_map_matches_plain_map() {
        let items: Vec<u64> = (0..50).collect();
        let seq = map_slice(ExecMode::Sequential, &items, |&x| x + 1);
        let par = map_slice(ExecMode::Parallel, &items, |&x| x + 1);
        assert_eq!(seq, par);
    }
}
