//! Multi-worker exploration over a shared queue of frontier subtrees.
//!
//! The tree is split at a frontier genus; every frontier node becomes an
//! independent task. Workers pull task indices from an atomic cursor and send
//! their private reports back to the owning thread, which merges them and
//! periodically writes checkpoints. Merging is order-insensitive, so the
//! final report does not depend on the number of workers or the scheduling.

use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use crate::checkpoint::Checkpoint;
use crate::error::{Error, Result};
use crate::explore::{explore_seq, split_frontier, ExplorationReport};
use crate::kernel::SemigroupState;
use crate::trim::TrimPolicy;

/// Frontier genus used when none is given.
pub const DEFAULT_FRONTIER_GENUS: u32 = 22;

pub fn default_frontier_genus(depth: u32) -> u32 {
    depth.min(DEFAULT_FRONTIER_GENUS)
}

#[derive(Clone, Debug)]
pub struct CheckpointConfig {
    pub path: PathBuf,
    pub interval: Duration,
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub workers: usize,
    pub frontier_genus: u32,
    pub checkpoint: Option<CheckpointConfig>,
    /// Start at most this many tasks, then stop with a checkpoint.
    pub task_budget: Option<usize>,
}

impl RunOptions {
    pub fn new(workers: usize, frontier_genus: u32) -> Self {
        RunOptions {
            workers,
            frontier_genus,
            checkpoint: None,
            task_budget: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome {
    Complete(ExplorationReport),
    /// The task budget ran out; the checkpoint describes the remaining work.
    Interrupted(Checkpoint),
}

/// Same result as [`explore_seq`] from the root, computed by `workers`
/// threads over the subtrees rooted at genus `frontier_genus`.
pub fn explore_parallel(
    policy: &TrimPolicy,
    depth: u32,
    workers: usize,
    frontier_genus: u32,
) -> Result<ExplorationReport> {
    match run(policy, depth, &RunOptions::new(workers, frontier_genus))? {
        RunOutcome::Complete(report) => Ok(report),
        RunOutcome::Interrupted(_) => unreachable!("no task budget was set"),
    }
}

pub fn run(policy: &TrimPolicy, depth: u32, opts: &RunOptions) -> Result<RunOutcome> {
    policy.validate()?;
    let (tasks, prefix) = split_frontier(policy, depth, opts.frontier_genus)?;
    run_tasks(policy, depth, tasks, prefix, opts)
}

/// Continues the run described by `checkpoint`.
pub fn resume(
    checkpoint: &Checkpoint,
    policy: &TrimPolicy,
    depth: u32,
    opts: &RunOptions,
) -> Result<RunOutcome> {
    policy.validate()?;
    let path = opts
        .checkpoint
        .as_ref()
        .map(|c| c.path.clone())
        .unwrap_or_default();
    checkpoint.ensure_matches(policy, depth, &path)?;
    let bitmap_genus = depth.max(1);
    let tasks = checkpoint
        .pending
        .iter()
        .map(|g| SemigroupState::from_gaps(g, bitmap_genus))
        .collect::<Result<Vec<_>>>()?;
    run_tasks(policy, depth, tasks, checkpoint.partial.clone(), opts)
}

fn run_tasks(
    policy: &TrimPolicy,
    depth: u32,
    tasks: Vec<SemigroupState>,
    base: ExplorationReport,
    opts: &RunOptions,
) -> Result<RunOutcome> {
    if opts.workers == 0 {
        return Err(Error::Config("at least one worker is required".into()));
    }
    let mut total = base;
    let mut done = vec![false; tasks.len()];
    let mut completed = 0usize;
    let mut failure: Option<(usize, String)> = None;

    let cursor = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(usize, Result<ExplorationReport>)>();
    let workers = opts.workers.min(tasks.len().max(1));

    let mut next_save = opts
        .checkpoint
        .as_ref()
        .map(|c| Instant::now() + c.interval);

    let io_result = thread::scope(|scope| -> Result<()> {
        for _ in 0..workers {
            let tx = tx.clone();
            let tasks = &tasks;
            let cursor = &cursor;
            let stop = &stop;
            scope.spawn(move || loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= tasks.len() || opts.task_budget.is_some_and(|b| i >= b) {
                    break;
                }
                let result =
                    panic::catch_unwind(AssertUnwindSafe(|| explore_seq(&tasks[i], policy, depth)))
                        .unwrap_or_else(|payload| Err(Error::Contract(panic_message(&payload))));
                if tx.send((i, result)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        loop {
            let message = match next_save {
                Some(deadline) => {
                    match rx.recv_timeout(deadline.saturating_duration_since(Instant::now())) {
                        Ok(msg) => Some(msg),
                        Err(mpsc::RecvTimeoutError::Timeout) => None,
                        Err(mpsc::RecvTimeoutError::Disconnected) => break,
                    }
                }
                None => match rx.recv() {
                    Ok(msg) => Some(msg),
                    Err(_) => break,
                },
            };
            match message {
                Some((i, Ok(report))) => {
                    if let Err(e) = total.absorb(&report) {
                        failure.get_or_insert((i, e.to_string()));
                        stop.store(true, Ordering::Relaxed);
                    }
                    done[i] = true;
                    completed += 1;
                    if opts.task_budget.is_some_and(|b| completed >= b) {
                        stop.store(true, Ordering::Relaxed);
                    }
                }
                Some((i, Err(e))) => {
                    if failure.as_ref().is_none_or(|(j, _)| i < *j) {
                        failure = Some((i, e.to_string()));
                    }
                    stop.store(true, Ordering::Relaxed);
                }
                None => {
                    if let Some(cfg) = &opts.checkpoint {
                        if let Err(e) = snapshot(&tasks, &done, &total).save(&cfg.path) {
                            stop.store(true, Ordering::Relaxed);
                            return Err(e);
                        }
                        next_save = Some(Instant::now() + cfg.interval);
                    }
                }
            }
        }
        Ok(())
    });

    if let Some((i, reason)) = failure {
        return Err(Error::Worker {
            task: tasks[i].gaps(),
            reason,
        });
    }
    io_result?;

    total.violations.sort();
    let finished = completed == tasks.len();
    let checkpoint = snapshot(&tasks, &done, &total);
    if let Some(cfg) = &opts.checkpoint {
        checkpoint.save(&cfg.path)?;
    }
    if finished {
        Ok(RunOutcome::Complete(total))
    } else {
        Ok(RunOutcome::Interrupted(checkpoint))
    }
}

fn snapshot(tasks: &[SemigroupState], done: &[bool], total: &ExplorationReport) -> Checkpoint {
    Checkpoint {
        policy_descriptor: total.policy_descriptor.clone(),
        pending: tasks
            .iter()
            .zip(done)
            .filter(|(_, &d)| !d)
            .map(|(t, _)| t.gaps())
            .collect(),
        partial: total.clone(),
    }
}

fn panic_message(payload: &Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        format!("worker panicked: {s}")
    } else if let Some(s) = payload.downcast_ref::<String>() {
        format!("worker panicked: {s}")
    } else {
        "worker panicked".into()
    }
}
