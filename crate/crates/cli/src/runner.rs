//! Parallel execution of a simulation plan.
//!
//! Replications are computed on a rayon pool and collected in index order,
//! so the aggregated report does not depend on the number of workers.

use std::num::NonZeroUsize;

use lindley_core::simulation::SimPlan;
use lindley_core::{MseReport, SimConfig};
use rayon::prelude::*;

use crate::error::{CliError, Result};

pub const THREADS_VAR: &str = "LINDLEY_EST_THREADS";

/// Worker count from `LINDLEY_EST_THREADS`, defaulting to the available
/// parallelism.
pub fn thread_count(var: Option<&str>) -> Result<usize> {
    match var.map(str::trim) {
        None | Some("") => Ok(std::thread::available_parallelism().map_or(1, NonZeroUsize::get)),
        Some(s) => s
            .parse::<NonZeroUsize>()
            .map(NonZeroUsize::get)
            .map_err(|_| CliError::Invalid(format!("{THREADS_VAR} must be a positive integer, got {s:?}"))),
    }
}

pub fn run(cfg: SimConfig, threads: usize) -> Result<MseReport> {
    let plan = SimPlan::new(cfg).map_err(CliError::Schema)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Invalid(format!("cannot start {threads} worker threads: {e}")))?;
    let reps = plan.config().replications;
    let sizes = plan.config().sample_sizes.len();
    let by_size: Vec<Vec<_>> = pool.install(|| {
        (0..sizes)
            .map(|si| (0..reps).into_par_iter().map(|r| plan.replicate(si, r)).collect())
            .collect()
    });
    Ok(plan.aggregate(&by_size)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thread_var_parsing() {
        assert_eq!(thread_count(Some("3")).unwrap(), 3);
        assert!(thread_count(None).unwrap() >= 1);
        assert!(thread_count(Some("0")).is_err());
        assert!(thread_count(Some("many")).is_err());
    }

    #[test]
    fn worker_count_does_not_change_the_report() {
        let mut cfg = SimConfig::new(1.5, vec![6, 12], 5);
        cfg.replications = 64;
        let one = run(cfg.clone(), 1).unwrap();
        let four = run(cfg.clone(), 4).unwrap();
        assert_eq!(one, four);
        assert_eq!(one, lindley_core::simulation::run_simulation(&cfg).unwrap());
    }
}
