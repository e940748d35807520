//! Multi-threaded drivers whose output does not depend on the worker count.
//!
//! The exact engine splits each step's source configurations into contiguous
//! chunks and sums the partial maps exactly. The simulator hands each worker a
//! contiguous block of history indices; every history seeds itself from
//! `(master_seed, index)`, and blocks are concatenated in index order.

use std::ops::Range;
use std::thread;

use urn_core::exact::{StepKernel, WeightedStateVector};
use urn_core::simulate::{SimulationPlan, Trajectory};
use urn_core::{Result, UrnScheme};

/// Below this many configurations a step runs on the calling thread.
const PARALLEL_THRESHOLD: usize = 64;

pub fn default_workers() -> usize {
    thread::available_parallelism().map_or(1, |n| n.get())
}

/// `evolve` with each step spread over `workers` threads.
pub fn evolve_parallel(scheme: &UrnScheme, n: usize, workers: usize) -> Result<WeightedStateVector> {
    let kernel = StepKernel::new(scheme);
    let mut state = WeightedStateVector::initial(scheme);
    for _ in 0..n {
        if workers <= 1 || state.len() < PARALLEL_THRESHOLD {
            state = kernel.step(&state)?;
            continue;
        }
        let entries: Vec<_> = state.entries().collect();
        let chunk = entries.len().div_ceil(workers);
        let parts = thread::scope(|s| {
            let handles: Vec<_> = entries
                .chunks(chunk)
                .map(|c| {
                    let kernel = &kernel;
                    s.spawn(move || kernel.contributions(c.iter().copied()))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("worker panicked"))
                .collect::<Result<Vec<_>>>()
        })?;
        state = kernel.assemble(&state, parts);
    }
    Ok(state)
}

fn blocks(total: u64, workers: usize) -> Vec<Range<u64>> {
    let workers = (workers.max(1) as u64).min(total.max(1));
    let size = total.div_ceil(workers);
    (0..workers)
        .map(|w| (w * size).min(total)..((w + 1) * size).min(total))
        .filter(|r| !r.is_empty())
        .collect()
}

fn run_blocks<T: Send>(
    total: u64,
    workers: usize,
    job: impl Fn(Range<u64>) -> Result<Vec<T>> + Sync,
) -> Result<Vec<T>> {
    let ranges = blocks(total, workers);
    if ranges.len() <= 1 {
        return job(0..total);
    }
    let parts = thread::scope(|s| {
        let handles: Vec<_> = ranges
            .into_iter()
            .map(|r| {
                let job = &job;
                s.spawn(move || job(r))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect::<Vec<_>>()
    });
    let mut out = Vec::with_capacity(total as usize);
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

/// Terminal counts of `color` for every history of the plan, in index order.
pub fn terminal_counts(plan: &SimulationPlan, color: usize, workers: usize) -> Result<Vec<u64>> {
    plan.scheme.check_color(color)?;
    let sampler = plan.sampler()?;
    run_blocks(plan.histories, workers, |r| plan.terminal_counts(&sampler, r, color))
}

/// Full trajectories, in index order.
pub fn trajectories(plan: &SimulationPlan, workers: usize) -> Result<Vec<Trajectory>> {
    let sampler = plan.sampler()?;
    run_blocks(plan.histories, workers, |r| {
        r.map(|i| plan.history(&sampler, i)).collect()
    })
}
