//! Enumeration of the tree of numerical semigroups by genus.
//!
//! The root ℕ has one child per right primitive element; removing it yields
//! a semigroup of genus one more, so every numerical semigroup of genus `g`
//! appears exactly once at depth `g`. This crate walks that tree up to a
//! genus bound, prunes subtrees that provably satisfy Wilf's conjecture
//! `e * |L| >= c` (or provably contain no special semigroup), and checks the
//! inequality on every node that remains.
//!
//! - [`kernel`]: semigroup states and the incremental child construction.
//! - [`trim`]: cut rules and [`TrimPolicy`].
//! - [`explore`], [`parallel`]: sequential and multi-worker traversal.
//! - [`checkpoint`]: resumable run state on disk.
//! - [`oracle`]: slow reference implementations for cross-checking.

mod bits;
pub mod checkpoint;
pub mod error;
pub mod explore;
pub mod kernel;
pub mod oracle;
pub mod parallel;
pub mod trim;

pub use bits::{Membership, CAPACITY};
pub use checkpoint::{load_checkpoint, save_checkpoint, Checkpoint};
pub use error::{Error, Result};
pub use explore::{explore_seq, merge, root_for_depth, split_frontier, ExplorationReport};
pub use kernel::{
    ordinary, primitives_by_sieve, EuclidSplit, GapSet, InvariantRecord, SemigroupState, MAX_GENUS,
};
pub use parallel::{explore_parallel, CheckpointConfig, RunOptions, RunOutcome};
pub use trim::TrimPolicy;
