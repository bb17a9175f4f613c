//! Data-parallel execution with a sequential fallback.
//!
//! Every batch loop in the crate (eigenvalue brackets, ensembles, scans,
//! quadrature slabs) goes through [`Execution::map`]. With the `parallel`
//! feature disabled, [`Execution::Parallel`] silently runs sequentially.
//! Results are always returned in index order, so output does not depend
//! on the execution mode.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Whether this mode actually runs on the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Evaluate `f(0..n)` and collect in index order.
    pub fn map<T, F>(self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            use rayon::prelude::*;
            return (0..n).into_par_iter().map(f).collect();
        }
        (0..n).map(f).collect()
    }

    /// Sum of `f(0..n)`. The reduction is done in index order after the map,
    /// so the floating-point result is identical in both modes.
    pub fn sum<F>(self, n: usize, f: F) -> f64
    where
        F: Fn(usize) -> f64 + Sync + Send,
    {
        self.map(n, f).into_iter().sum()
    }
}
