use rayon::prelude::*;
use swarmlife_core::evolve::Executor;

/// Runs evaluation jobs on the rayon thread pool. Results keep job order,
/// so runs are identical to [`swarmlife_core::evolve::Serial`].
#[derive(Debug, Clone, Copy, Default)]
pub struct Rayon;

impl Executor for Rayon {
    fn map<R, F>(&self, n: usize, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(usize) -> R + Sync + Send,
    {
        (0..n).into_par_iter().map(f).collect()
    }
}
