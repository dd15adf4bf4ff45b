//! Search budgets and the worker pool handed down to enumeration routines.

use std::sync::Arc;

use rayon::prelude::*;
use rayon::ThreadPool;

/// Node budget and parallelism shared by every exhaustive search.
///
/// Results never depend on `jobs`: parallel work is always merged back in
/// input order.
#[derive(Clone)]
pub struct SearchOptions {
    pub budget: u64,
    jobs: usize,
    pool: Option<Arc<ThreadPool>>,
}

impl std::fmt::Debug for SearchOptions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SearchOptions")
            .field("budget", &self.budget)
            .field("jobs", &self.jobs)
            .finish()
    }
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self::new(DEFAULT_BUDGET, 1)
    }
}

pub const DEFAULT_BUDGET: u64 = 50_000_000;

impl SearchOptions {
    pub fn new(budget: u64, jobs: usize) -> Self {
        let jobs = jobs.max(1);
        let pool = (jobs > 1).then(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build()
                    .expect("failed to start worker pool"),
            )
        });
        Self { budget, jobs, pool }
    }

    pub fn sequential(budget: u64) -> Self {
        Self::new(budget, 1)
    }

    pub fn jobs(&self) -> usize {
        self.jobs
    }

    pub fn with_budget(&self, budget: u64) -> Self {
        Self {
            budget,
            ..self.clone()
        }
    }

    /// `items.map(f)` in input order, on the pool when there is one.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match &self.pool {
            Some(pool) => pool.install(|| items.par_iter().map(&f).collect()),
            None => items.iter().map(f).collect(),
        }
    }

    /// Index of the first item (in input order) satisfying `pred`.
    pub fn position<T, F>(&self, items: &[T], pred: F) -> Option<usize>
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        match &self.pool {
            Some(pool) => pool.install(|| items.par_iter().position_first(&pred)),
            None => items.iter().position(pred),
        }
    }
}
