//! Shared workloads for the criterion benches.

use sgforest_core::{explore_seq, root_for_depth, ExplorationReport, SemigroupState, TrimPolicy};

/// Every node of the full tree down to `depth`.
pub fn full_tree(depth: u32) -> ExplorationReport {
    explore_seq(&root_for_depth(depth).unwrap(), &TrimPolicy::none(depth), depth).unwrap()
}

/// The trimmed tree with denominator `d` and bound `bound`, explored to `depth`.
pub fn trimmed_tree(depth: u32, bound: u32, d: u32, special: bool) -> ExplorationReport {
    let mut policy = TrimPolicy::with_denominator(bound, d).unwrap();
    policy.special_rule = special;
    explore_seq(&root_for_depth(depth).unwrap(), &policy, depth).unwrap()
}

/// A node of genus 20 with many right primitives, for child-generation benches.
pub fn wide_node() -> SemigroupState {
    let gaps = (1..21).collect::<Vec<u32>>();
    SemigroupState::from_gaps(&sgforest_core::GapSet::new(gaps).unwrap(), 40).unwrap()
}
