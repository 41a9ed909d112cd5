//! Job fan-out. Replications share nothing mutable, so they can run on the
//! rayon pool; results always come back in job order.

/// Parallel is the default whenever the `parallel` feature is built.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Execution {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Evaluates `job(0..n)` and returns the results indexed by job.
pub fn map_jobs<T, F>(n: usize, mode: Execution, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        Execution::Sequential => (0..n).map(job).collect(),
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            (0..n).into_par_iter().map(job).collect()
        }
    }
}
