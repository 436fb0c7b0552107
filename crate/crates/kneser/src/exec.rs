use kneser_core::exec::Executor;
use rayon::prelude::*;
use rayon::ThreadPool;

/// Runs maps on a dedicated rayon pool; results keep input order.
pub struct RayonExec {
    pool: ThreadPool,
}

impl RayonExec {
    pub fn new(jobs: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
        Ok(RayonExec { pool })
    }
}

impl Executor for RayonExec {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.pool.install(|| items.par_iter().map(f).collect())
    }
}
