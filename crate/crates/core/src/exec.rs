//! Worker pool used by every bulk-synchronous operator.

use rayon::{ThreadPool, ThreadPoolBuildError, ThreadPoolBuilder};

#[derive(Debug, thiserror::Error)]
pub enum ExecutorError {
    #[error("worker count must be at least 1")]
    ZeroWorkers,
    #[error("failed to start worker pool: {0}")]
    Pool(#[from] ThreadPoolBuildError),
}

/// A fixed-size pool of workers. Operators called through an executor run
/// inside its pool and return only once their whole output is materialized.
pub struct Executor {
    pool: ThreadPool,
    workers: usize,
}

impl Executor {
    pub fn new(workers: usize) -> Result<Self, ExecutorError> {
        if workers == 0 {
            return Err(ExecutorError::ZeroWorkers);
        }
        let pool = ThreadPoolBuilder::new()
            .num_threads(workers)
            .thread_name(|i| format!("trimatch-worker-{i}"))
            .build()?;
        Ok(Self { pool, workers })
    }

    /// Single worker; handy for tests and oracles.
    pub fn sequential() -> Self {
        Self::new(1).expect("single-worker pool")
    }

    pub fn workers(&self) -> usize {
        self.workers
    }

    pub fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        self.pool.install(op)
    }
}

impl std::fmt::Debug for Executor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Executor").field("workers", &self.workers).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_workers() {
        assert!(matches!(Executor::new(0), Err(ExecutorError::ZeroWorkers)));
    }

    #[test]
    fn runs_inside_pool() {
        let exec = Executor::new(3).unwrap();
        assert_eq!(exec.install(rayon::current_num_threads), 3);
    }
}
