//! Depth-first traversal of the trimmed, genus-bounded tree.

use crate::error::{Error, Result};
use crate::kernel::{GapSet, SemigroupState};
use crate::trim::TrimPolicy;

/// Per-genus node counts and Wilf violations of one traversal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplorationReport {
    /// Deepest genus explored; `counts` has `genus_bound + 1` entries.
    pub genus_bound: u32,
    pub policy_descriptor: String,
    pub counts: Vec<u64>,
    /// Retained nodes with a negative Wilf number, sorted.
    pub violations: Vec<GapSet>,
    pub nodes_visited: u64,
}

impl ExplorationReport {
    pub fn empty(genus_bound: u32, policy: &TrimPolicy) -> Self {
        Self::with_descriptor(genus_bound, policy.to_string())
    }

    pub(crate) fn with_descriptor(genus_bound: u32, policy_descriptor: String) -> Self {
        ExplorationReport {
            genus_bound,
            policy_descriptor,
            counts: vec![0; genus_bound as usize + 1],
            violations: Vec::new(),
            nodes_visited: 0,
        }
    }

    /// Counts one retained node and records it if it violates Wilf's
    /// conjecture.
    #[inline]
    pub fn record(&mut self, state: &SemigroupState) -> Result<()> {
        let g = state.genus();
        let slot = &mut self.counts[g as usize];
        *slot = slot.checked_add(1).ok_or(Error::Overflow { genus: g })?;
        self.nodes_visited = self
            .nodes_visited
            .checked_add(1)
            .ok_or(Error::Overflow { genus: g })?;
        if state.wilf() < 0 {
            self.violations.push(state.gaps());
        }
        Ok(())
    }

    /// Adds `other` into `self`.
    pub fn absorb(&mut self, other: &ExplorationReport) -> Result<()> {
        if self.genus_bound != other.genus_bound
            || self.policy_descriptor != other.policy_descriptor
        {
            return Err(Error::Contract(format!(
                "cannot merge reports for ({}, {}) and ({}, {})",
                self.genus_bound,
                self.policy_descriptor,
                other.genus_bound,
                other.policy_descriptor
            )));
        }
        for (g, (a, b)) in self.counts.iter_mut().zip(&other.counts).enumerate() {
            *a = a
                .checked_add(*b)
                .ok_or(Error::Overflow { genus: g as u32 })?;
        }
        self.nodes_visited =
            self.nodes_visited
                .checked_add(other.nodes_visited)
                .ok_or(Error::Overflow {
                    genus: self.genus_bound,
                })?;
        self.violations.extend(other.violations.iter().cloned());
        self.violations.sort();
        Ok(())
    }
}

/// Pointwise sum of two reports with identical bound and policy.
pub fn merge(mut r1: ExplorationReport, r2: &ExplorationReport) -> Result<ExplorationReport> {
    r1.absorb(r2)?;
    Ok(r1)
}

fn check_start(start: &SemigroupState, policy: &TrimPolicy, depth: u32) -> Result<()> {
    if start.genus() > depth {
        return Err(Error::OutOfBound {
            genus: start.genus(),
            bound: depth,
        });
    }
    if start.max_genus() < depth {
        return Err(Error::Config(format!(
            "state bitmap covers genus {} but depth {depth} was requested",
            start.max_genus()
        )));
    }
    if !policy.retain(start) {
        return Err(Error::Contract(format!(
            "start node {{{}}} is cut by the policy",
            start.gaps()
        )));
    }
    Ok(())
}

/// Generates the retained children of `node` in increasing order of the
/// removed element.
///
/// The left-primitive rule is monotone along the right primitives: removing
/// the `i`-th one gives a child with `e_l + i` left primitives and the same
/// multiplicity, so generation stops at the first child it would cut.
///
/// A special child dropped while special trimming is active is still checked
/// against Wilf's conjecture, since the special rule only guarantees that its
/// proper descendants are non-special.
#[inline]
fn expand(
    node: &SemigroupState,
    policy: &TrimPolicy,
    cut_violations: &mut Vec<GapSet>,
    mut keep: impl FnMut(SemigroupState),
) {
    if node.genus() >= node.max_genus() {
        return;
    }
    let m = node.multiplicity() as u64;
    let left = node.left_primitive_count() as u64;
    for (i, a) in node.right_primitive_iter().enumerate() {
        if let Some(d) = policy.denominator {
            if a as u64 != m && d as u64 * (left + i as u64) >= m {
                break;
            }
        }
        let child = node.child_unchecked(a);
        if policy.retain(&child) {
            keep(child);
        } else if policy.special_rule && child.is_special() && child.wilf() < 0 {
            cut_violations.push(child.gaps());
        }
    }
}

/// Explores the retained part of the subtree of `start` down to genus
/// `depth`.
pub fn explore_seq(
    start: &SemigroupState,
    policy: &TrimPolicy,
    depth: u32,
) -> Result<ExplorationReport> {
    check_start(start, policy, depth)?;
    let mut report = ExplorationReport::empty(depth, policy);
    let mut cut_violations = Vec::new();
    let mut stack = Vec::with_capacity(8 * depth as usize + 8);
    stack.push(*start);
    while let Some(node) = stack.pop() {
        report.record(&node)?;
        let g = node.genus();
        if g >= depth {
            continue;
        }
        if g + 1 == depth {
            // Children are leaves; count them in place.
            let mut status = Ok(());
            expand(&node, policy, &mut cut_violations, |child| {
                if status.is_ok() {
                    status = report.record(&child);
                }
            });
            status?;
        } else {
            let base = stack.len();
            expand(&node, policy, &mut cut_violations, |child| {
                stack.push(child)
            });
            stack[base..].reverse();
        }
    }
    report.violations.append(&mut cut_violations);
    report.violations.sort();
    Ok(report)
}

/// Root of the tree with a bitmap large enough for `depth`.
pub fn root_for_depth(depth: u32) -> Result<SemigroupState> {
    SemigroupState::root(depth.max(1))
}

/// All retained nodes of genus exactly `frontier_genus`, in canonical
/// depth-first order, together with the report for the shallower genera.
pub fn split_frontier(
    policy: &TrimPolicy,
    depth: u32,
    frontier_genus: u32,
) -> Result<(Vec<SemigroupState>, ExplorationReport)> {
    if frontier_genus > depth {
        return Err(Error::Config(format!(
            "frontier genus {frontier_genus} exceeds depth {depth}"
        )));
    }
    let root = root_for_depth(depth)?;
    check_start(&root, policy, depth)?;
    let mut report = ExplorationReport::empty(depth, policy);
    let mut frontier = Vec::new();
    let mut cut_violations = Vec::new();
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        if node.genus() == frontier_genus {
            frontier.push(node);
            continue;
        }
        report.record(&node)?;
        let base = stack.len();
        expand(&node, policy, &mut cut_violations, |child| {
            stack.push(child)
        });
        stack[base..].reverse();
    }
    report.violations.append(&mut cut_violations);
    report.violations.sort();
    Ok((frontier, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn full(depth: u32) -> ExplorationReport {
        explore_seq(
            &root_for_depth(depth).unwrap(),
            &TrimPolicy::none(depth),
            depth,
        )
        .unwrap()
    }

    #[test]
    fn first_genus_counts() {
        let r = full(6);
        assert_eq!(r.counts, vec![1, 1, 2, 4, 7, 12, 23]);
        assert_eq!(r.nodes_visited, 50);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn depth_zero_counts_only_root() {
        let r = full(0);
        assert_eq!(r.counts, vec![1]);
    }

    #[test]
    fn trimmed_prefixes() {
        let p = TrimPolicy::with_denominator(100, 3).unwrap();
        let r = explore_seq(&root_for_depth(6).unwrap(), &p, 6).unwrap();
        assert_eq!(r.counts, vec![1, 1, 1, 1, 2, 3, 4]);
        let p = TrimPolicy::with_denominator(120, 4).unwrap().special();
        let r = explore_seq(&root_for_depth(5).unwrap(), &p, 5).unwrap();
        assert_eq!(r.counts, vec![1, 1, 1, 1, 1, 2]);
        assert!(r.violations.is_empty());
    }

    #[test]
    fn frontier() {
        let (f, prefix) = split_frontier(&TrimPolicy::none(6), 6, 4).unwrap();
        assert_eq!(f.len(), 7);
        assert_eq!(prefix.counts, vec![1, 1, 2, 4, 0, 0, 0]);
        let (f, _) = split_frontier(&TrimPolicy::with_denominator(100, 3).unwrap(), 6, 4).unwrap();
        let gaps: Vec<String> = f.iter().map(|s| s.gaps().to_string()).collect();
        assert_eq!(gaps, vec!["1,2,3,4", "1,2,3,5"]);
        let (f, prefix) = split_frontier(&TrimPolicy::none(6), 6, 0).unwrap();
        assert_eq!(f, vec![root_for_depth(6).unwrap()]);
        assert_eq!(prefix.nodes_visited, 0);
        assert!(split_frontier(&TrimPolicy::none(6), 6, 7).is_err());
    }

    #[test]
    fn frontier_order_is_canonical() {
        let (f, _) = split_frontier(&TrimPolicy::none(8), 8, 5).unwrap();
        // Pre-order with children by increasing removed element: the first
        // path always removes the multiplicity, giving O_6.
        assert_eq!(f[0].gaps().to_string(), "1,2,3,4,5");
        let (again, _) = split_frontier(&TrimPolicy::none(8), 8, 5).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn frontier_subtrees_merge_to_full_run() {
        let policy = TrimPolicy::none(6);
        let (frontier, mut total) = split_frontier(&policy, 6, 4).unwrap();
        for s in &frontier {
            total.absorb(&explore_seq(s, &policy, 6).unwrap()).unwrap();
        }
        assert_eq!(total, full(6));
        assert_eq!(&total.counts[4..], &[7, 12, 23]);
    }

    #[test]
    fn merge_identity_and_commutativity() {
        let policy = TrimPolicy::none(8);
        let (frontier, _) = split_frontier(&policy, 8, 3).unwrap();
        let a = explore_seq(&frontier[0], &policy, 8).unwrap();
        let b = explore_seq(&frontier[1], &policy, 8).unwrap();
        let zero = ExplorationReport::empty(8, &policy);
        assert_eq!(merge(a.clone(), &zero).unwrap(), a);
        assert_eq!(merge(a.clone(), &b).unwrap(), merge(b.clone(), &a).unwrap());
        let other = ExplorationReport::empty(7, &policy);
        assert!(matches!(merge(a, &other), Err(Error::Contract(_))));
    }

    #[test]
    fn each_node_counted_once() {
        let depth = 12;
        let mut seen = HashSet::new();
        let mut stack = vec![root_for_depth(depth).unwrap()];
        while let Some(s) = stack.pop() {
            assert!(seen.insert(s.gaps()), "duplicate {:?}", s);
            stack.extend(s.children());
        }
        let r = full(depth);
        assert_eq!(seen.len() as u64, r.nodes_visited);
        assert_eq!(r.nodes_visited, r.counts.iter().sum::<u64>());
    }

    #[test]
    fn start_preconditions() {
        let policy = TrimPolicy::with_denominator(100, 3).unwrap();
        let cut = SemigroupState::from_gaps(&"1,2,4,5".parse().unwrap(), 10).unwrap();
        assert!(matches!(
            explore_seq(&cut, &policy, 10),
            Err(Error::Contract(_))
        ));
        let deep = SemigroupState::from_gaps(&"1,2,3,5".parse().unwrap(), 10).unwrap();
        assert!(matches!(
            explore_seq(&deep, &TrimPolicy::none(10), 3),
            Err(Error::OutOfBound { .. })
        ));
        assert!(matches!(
            explore_seq(&deep, &TrimPolicy::none(10), 11),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let policy = TrimPolicy::none(3);
        let mut r = ExplorationReport::empty(3, &policy);
        r.counts[2] = u64::MAX;
        let s = SemigroupState::from_gaps(&"1,2".parse().unwrap(), 3).unwrap();
        assert!(matches!(r.record(&s), Err(Error::Overflow { genus: 2 })));
    }
}
