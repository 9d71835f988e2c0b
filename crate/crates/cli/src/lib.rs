//! Command-line front end: runs explorations and turns count tables into
//! ratio series and Fibonacci-bound reports.

pub mod format;

use std::fs;
use std::io::{self, Read, Write};
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use sgforest_core::oracle::{
    assert_equivalence, structural_discrepancies, trim_soundness, Discrepancy,
};
use sgforest_core::parallel::{default_frontier_genus, resume, run};
use sgforest_core::{
    load_checkpoint, CheckpointConfig, Error, ExplorationReport, RunOptions, RunOutcome,
    TrimPolicy, MAX_GENUS,
};

pub use format::{emit_counts, emit_ratios, fibonacci_check, parse_counts, Format, TableError};

/// Exit status for a clean run.
pub const EXIT_OK: i32 = 0;
/// Exit status when a Wilf violation or an oracle discrepancy was found.
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "sgforest",
    version,
    about = "Explore the tree of numerical semigroups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count retained semigroups per genus.
    Count(RunArgs),
    /// Count, and check Wilf's conjecture on every retained node.
    Wilf(RunArgs),
    /// Append the ratio count[g] / count[g-1] to a count table.
    Ratios(TableArgs),
    /// List every g with count[g] < count[g-1] + count[g-2].
    Fibonacci(TableArgs),
    /// Cross-check the tree against slow reference implementations.
    OracleCheck(OracleArgs),
}

#[derive(Debug, Args)]
pub struct TrimArgs {
    /// Genus bound G used inside the cut rules [default: --max-genus].
    #[arg(long, value_name = "G")]
    pub bound_genus: Option<u32>,
    /// Denominator d of the primitive-count rules, or "none".
    #[arg(long, value_name = "none|D", default_value = "none", value_parser = parse_denominator)]
    pub trim_denominator: Denominator,
    /// Cut subtrees that contain no special semigroup.
    #[arg(long)]
    pub special_trim: bool,
    /// Cut nodes with 3|L| >= G.
    #[arg(long)]
    pub left_size_trim: bool,
    /// Apply the embedding-dimension rule to ordinary semigroups as well.
    #[arg(long, value_name = "BOOL", default_value_t = true, action = clap::ArgAction::Set)]
    pub trim_ordinary_embedding: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Exploration depth.
    #[arg(long, value_name = "N")]
    pub max_genus: u32,
    #[command(flatten)]
    pub trim: TrimArgs,
    /// Worker threads [default: available parallelism].
    #[arg(long, env = "SGFOREST_WORKERS")]
    pub workers: Option<usize>,
    /// Genus at which the tree is split into independent tasks
    /// [default: min(max-genus, 22)].
    #[arg(long)]
    pub frontier_genus: Option<u32>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write resumable progress to this file.
    #[arg(long, value_name = "PATH")]
    pub checkpoint: Option<PathBuf>,
    /// Seconds between checkpoint writes.
    #[arg(long, value_name = "SECS", default_value_t = 60)]
    pub checkpoint_interval: u64,
    /// Continue from a checkpoint; it keeps being updated unless
    /// --checkpoint names another file.
    #[arg(long, value_name = "PATH")]
    pub resume: Option<PathBuf>,
    /// Stop after this many frontier tasks and leave a checkpoint.
    #[arg(long, value_name = "N")]
    pub stop_after_tasks: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Count table in CSV form [default: stdin].
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Deepest genus checked against recomputation; the gap-set search stops
    /// at 12 and the structural checks at 16.
    #[arg(long, value_name = "N", default_value_t = 10)]
    pub max_genus: u32,
    /// When trim flags are given, also check the soundness of that policy.
    #[command(flatten)]
    pub trim: TrimArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Denominator {
    None,
    Value(u32),
}

fn parse_denominator(s: &str) -> Result<Denominator, String> {
    if s == "none" {
        return Ok(Denominator::None);
    }
    match s.parse::<u32>() {
        Ok(d) if d >= 3 => Ok(Denominator::Value(d)),
        Ok(d) => Err(format!("must be at least 3, got {d}")),
        Err(_) => Err(format!("expected \"none\" or an integer, got {s:?}")),
    }
}

/// A failure that ends the process with `code`.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<TableError> for Failure {
    fn from(e: TableError) -> Self {
        Failure::usage(e.to_string())
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: EXIT_IO,
        message: format!("{}: {e}", path.display()),
    }
}

impl TrimArgs {
    fn is_trimmed(&self) -> bool {
        self.trim_denominator != Denominator::None || self.special_trim || self.left_size_trim
    }

    pub fn policy(&self, depth: u32) -> Result<TrimPolicy, Failure> {
        let bound = self.bound_genus.unwrap_or(depth.max(1));
        if bound < depth {
            return Err(Failure::usage(format!(
                "--bound-genus {bound} is below --max-genus {depth}; the cut rules are only sound up to the bound"
            )));
        }
        let mut policy = match self.trim_denominator {
            Denominator::None => TrimPolicy::none(bound),
            Denominator::Value(d) => TrimPolicy::with_denominator(bound, d)?,
        };
        policy.special_rule = self.special_trim;
        policy.left_size_rule = self.left_size_trim;
        policy.embedding_on_ordinary = self.trim_ordinary_embedding;
        policy.validate()?;
        Ok(policy)
    }
}

/// Runs one command, writing results to `out` (unless redirected to a file)
/// and diagnostics to `err`. Returns the exit status.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::Count(args) => explore(args, false, out, err),
        Command::Wilf(args) => explore(args, true, out, err),
        Command::Ratios(args) => {
            let text = emit_ratios(&read_table(args.input.as_deref())?)?;
            write_output(args.out.as_deref(), &text, out)?;
            Ok(EXIT_OK)
        }
        Command::Fibonacci(args) => {
            let text = fibonacci_check(&read_table(args.input.as_deref())?)?;
            write_output(args.out.as_deref(), &text, out)?;
            Ok(EXIT_OK)
        }
        Command::OracleCheck(args) => oracle_check(args, out),
    }
}

fn check_depth(depth: u32) -> Result<(), Failure> {
    if depth > MAX_GENUS {
        return Err(Failure::usage(format!(
            "--max-genus must be at most {MAX_GENUS}, got {depth}"
        )));
    }
    Ok(())
}

fn explore(
    args: &RunArgs,
    summary: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let depth = args.max_genus;
    check_depth(depth)?;
    let policy = args.trim.policy(depth)?;
    let frontier = args
        .frontier_genus
        .unwrap_or_else(|| default_frontier_genus(depth));
    if frontier > depth {
        return Err(Failure::usage(format!(
            "--frontier-genus {frontier} exceeds --max-genus {depth}"
        )));
    }
    let workers = args.workers.unwrap_or_else(thread_count);
    if workers == 0 {
        return Err(Failure::usage("--workers must be at least 1"));
    }
    if args.stop_after_tasks.is_some() && args.checkpoint.is_none() && args.resume.is_none() {
        return Err(Failure::usage(
            "--stop-after-tasks needs --checkpoint or --resume",
        ));
    }

    let mut opts = RunOptions::new(workers, frontier);
    opts.task_budget = args.stop_after_tasks;
    if let Some(path) = args.checkpoint.as_ref().or(args.resume.as_ref()) {
        opts.checkpoint = Some(CheckpointConfig {
            path: path.clone(),
            interval: Duration::from_secs(args.checkpoint_interval),
        });
    }

    let outcome = match &args.resume {
        Some(path) => resume(&load_checkpoint(path)?, &policy, depth, &opts)?,
        None => run(&policy, depth, &opts)?,
    };
    let report = match outcome {
        RunOutcome::Complete(report) => report,
        RunOutcome::Interrupted(ck) => {
            let path = opts
                .checkpoint
                .as_ref()
                .map(|c| c.path.display().to_string())
                .unwrap_or_default();
            writeln!(
                err,
                "stopped with {} subtrees pending; continue with --resume {path}",
                ck.pending.len()
            )
            .map_err(|e| io_failure(Path::new("<stderr>"), e))?;
            return Ok(EXIT_OK);
        }
    };

    write_output(args.out.as_deref(), &emit_counts(&report, args.format), out)?;
    report_violations(&report, summary, err)
}

fn report_violations(
    report: &ExplorationReport,
    summary: bool,
    err: &mut dyn Write,
) -> Result<i32, Failure> {
    let stderr = |e| io_failure(Path::new("<stderr>"), e);
    for v in &report.violations {
        writeln!(err, "violation: {{{v}}}").map_err(stderr)?;
    }
    if summary && report.violations.is_empty() {
        writeln!(
            err,
            "no Wilf violations among {} retained semigroups of genus <= {}",
            report.nodes_visited, report.genus_bound
        )
        .map_err(stderr)?;
    }
    Ok(if report.violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

fn oracle_check(args: &OracleArgs, out: &mut dyn Write) -> Result<i32, Failure> {
    check_depth(args.max_genus)?;
    let mut found: Vec<(&str, Discrepancy)> = Vec::new();
    found.extend(
        assert_equivalence(args.max_genus)
            .into_iter()
            .map(|d| ("equivalence", d)),
    );
    found.extend(
        structural_discrepancies(args.max_genus.min(16))
            .into_iter()
            .map(|d| ("structure", d)),
    );
    if args.trim.is_trimmed() {
        let policy = args.trim.policy(args.max_genus)?;
        found.extend(
            trim_soundness(&policy, args.max_genus)
                .into_iter()
                .map(|d| ("trim", d)),
        );
    }
    let stdout = |e| io_failure(Path::new("<stdout>"), e);
    for (check, d) in &found {
        writeln!(out, "{check}: {d}").map_err(stdout)?;
    }
    if found.is_empty() {
        writeln!(out, "no discrepancies up to genus {}", args.max_genus).map_err(stdout)?;
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_VIOLATION)
    }
}

fn thread_count() -> usize {
    std::thread::available_parallelism().map_or(1, NonZeroUsize::get)
}

fn read_table(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| io_failure(p, e)),
        None => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| io_failure(Path::new("<stdin>"), e))?;
            Ok(text)
        }
    }
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io_failure(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}
