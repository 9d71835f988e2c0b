//! Slow reference implementations.
//!
//! Nothing here goes through the incremental child update: gap sets are
//! enumerated directly as subsets of `{1, …, 2g}`, and states are rebuilt
//! from their membership with definitional double loops.

use std::collections::BTreeMap;
use std::fmt;

use crate::bits::{Membership, CAPACITY};
use crate::error::{Error, Result};
use crate::explore::explore_seq;
use crate::kernel::{bitmap_bound, GapSet, SemigroupState};
use crate::trim::{cut_embedding, cut_left_primitive, cut_left_size, cut_special, TrimPolicy};

/// Largest genus accepted by [`enumerate_gapsets`].
pub const GAPSET_GENUS_LIMIT: u32 = 12;

/// A semigroup described explicitly by its members, gaps and primitives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleSemigroup {
    /// Members below `c + m` (below `1 + m` for ℕ); everything from `c` on
    /// belongs to the set.
    pub members: Vec<u32>,
    pub gaps: GapSet,
    pub primitives: Vec<u32>,
}

impl OracleSemigroup {
    pub fn from_gaps(gaps: &GapSet) -> Result<Self> {
        let conductor = gaps.as_slice().last().map_or(0, |&f| f + 1);
        let is_member = |x: u32| !gaps.contains(x);
        let m = (1..).find(|&x| is_member(x)).unwrap();
        let limit = conductor.max(1) + m;
        let members: Vec<u32> = (0..limit).filter(|&x| is_member(x)).collect();
        for &x in &members[1..] {
            for &y in &members[1..] {
                if x <= y && !is_member(x + y) {
                    return Err(Error::NotClosed { x, y });
                }
            }
        }
        let primitives = members[1..]
            .iter()
            .copied()
            .filter(|&x| !members[1..].iter().any(|&y| y < x && is_member(x - y)))
            .collect();
        Ok(OracleSemigroup {
            members,
            gaps: gaps.clone(),
            primitives,
        })
    }
}

/// Every gap set of genus `g <= g_max`, found without the tree.
pub fn enumerate_gapsets(g_max: u32) -> Result<BTreeMap<u32, Vec<GapSet>>> {
    if g_max > GAPSET_GENUS_LIMIT {
        return Err(Error::Config(format!(
            "gap-set enumeration is limited to genus {GAPSET_GENUS_LIMIT}; \
             the subset search grows exponentially beyond it (asked for {g_max})"
        )));
    }
    let mut out = BTreeMap::new();
    for g in 0..=g_max {
        let mut found = Vec::new();
        let mut member = vec![false; 2 * g as usize + 1];
        member[0] = true;
        let mut gaps = Vec::new();
        search(1, g, &mut member, &mut gaps, &mut found);
        found.sort();
        out.insert(g, found);
    }
    Ok(out)
}

fn search(x: u32, g: u32, member: &mut [bool], gaps: &mut Vec<u32>, out: &mut Vec<GapSet>) {
    if gaps.len() as u32 == g {
        out.push(GapSet::new(gaps.clone()).expect("gaps are pushed in increasing order"));
        return;
    }
    if x > 2 * g || g - gaps.len() as u32 > 2 * g - x + 1 {
        return;
    }
    let xi = x as usize;
    let forced = (1..xi).any(|y| member[y] && member[xi - y]);
    if !forced {
        gaps.push(x);
        search(x + 1, g, member, gaps, out);
        gaps.pop();
    }
    if x != 1 {
        member[xi] = true;
        search(x + 1, g, member, gaps, out);
        member[xi] = false;
    }
}

/// Rebuilds a state from its membership without any incremental shortcut.
pub fn recompute_state(membership: &Membership, max_genus: u32) -> Result<SemigroupState> {
    let bound = bitmap_bound(max_genus);
    if bound >= CAPACITY {
        return Err(Error::Config(format!(
            "genus bound {max_genus} is too large"
        )));
    }
    let has = |x: usize| membership.contains(x);
    if !has(0) {
        return Err(Error::Invalid("0 is not a member".into()));
    }
    let mut frobenius: i32 = -1;
    let mut genus = 0;
    for x in 1..=bound {
        if !has(x) {
            frobenius = x as i32;
            genus += 1;
        }
    }
    let m = (1..=bound)
        .find(|&x| has(x))
        .ok_or_else(|| Error::Invalid("no nonzero member".into()))?;
    for x in 1..=bound {
        for y in x..=bound - x {
            if has(x) && has(y) && !has(x + y) {
                return Err(Error::NotClosed {
                    x: x as u32,
                    y: y as u32,
                });
            }
        }
    }
    let mut members = *membership;
    for x in bound + 1..CAPACITY {
        members.insert(x);
    }
    let mut right = Membership::empty();
    let mut left = 0;
    for x in 1..=bound {
        if !has(x) {
            continue;
        }
        let primitive = !(1..x).any(|y| has(y) && has(x - y));
        if primitive {
            if x as i32 > frobenius {
                right.insert(x);
            } else {
                left += 1;
            }
        }
    }
    Ok(SemigroupState::from_parts(
        members, right, m as u32, frobenius, genus, left, max_genus,
    ))
}

/// A mismatch between the fast code and a reference computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub genus: u32,
    pub detail: String,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "genus {}: {}", self.genus, self.detail)
    }
}

/// Compares one state with its from-scratch recomputation.
pub fn check_state(state: &SemigroupState) -> Option<Discrepancy> {
    let detail = match recompute_state(&state.membership(), state.max_genus()) {
        Ok(reference) if reference == *state => return None,
        Ok(reference) => format!("incremental {state:?} differs from recomputed {reference:?}"),
        Err(e) => format!("membership of {state:?} is invalid: {e}"),
    };
    Some(Discrepancy {
        genus: state.genus(),
        detail,
    })
}

/// Every node of the untrimmed tree down to genus `depth`, in depth-first
/// order.
pub fn tree_nodes(depth: u32) -> Result<Vec<SemigroupState>> {
    let mut out = Vec::new();
    let mut stack = vec![SemigroupState::root(depth.max(1))?];
    while let Some(s) = stack.pop() {
        if s.genus() < depth {
            stack.extend(s.children().into_iter().rev());
        }
        out.push(s);
    }
    Ok(out)
}

/// Cross-checks the tree against the gap-set enumeration (for genus up to
/// `min(g_max, 12)`) and every node against its recomputation (up to
/// `g_max`).
pub fn assert_equivalence(g_max: u32) -> Vec<Discrepancy> {
    let mut found = Vec::new();
    let fail = |genus, detail: String| Discrepancy { genus, detail };

    let gap_depth = g_max.min(GAPSET_GENUS_LIMIT);
    let nodes = match tree_nodes(g_max) {
        Ok(n) => n,
        Err(e) => return vec![fail(0, format!("cannot build the tree: {e}"))],
    };
    match enumerate_gapsets(gap_depth) {
        Ok(reference) => {
            let mut by_genus: BTreeMap<u32, Vec<GapSet>> = BTreeMap::new();
            for s in nodes.iter().filter(|s| s.genus() <= gap_depth) {
                by_genus.entry(s.genus()).or_default().push(s.gaps());
            }
            for (g, expected) in reference {
                let mut actual = by_genus.remove(&g).unwrap_or_default();
                actual.sort();
                if actual != expected {
                    let missing: Vec<_> = expected
                        .iter()
                        .filter(|x| actual.binary_search(x).is_err())
                        .take(3)
                        .collect();
                    let extra: Vec<_> = actual
                        .iter()
                        .filter(|x| expected.binary_search(x).is_err())
                        .take(3)
                        .collect();
                    found.push(fail(
                        g,
                        format!(
                            "tree has {} gap sets, enumeration has {}; missing {:?}, unexpected {:?}",
                            actual.len(),
                            expected.len(),
                            missing,
                            extra
                        ),
                    ));
                }
            }
        }
        Err(e) => found.push(fail(gap_depth, e.to_string())),
    }

    found.extend(nodes.iter().filter_map(check_state));
    found
}

/// Structural child relations: `|children| = e_r`, `F' = a`, `g' = g + 1`,
/// right primitives in `[c, c + m - 1]`, and for non-ordinary parents
/// `m' = m`, `e_l' >= e_l`, `e - 1 <= e' <= e` and `P' ∈ {P∖{a}, P∖{a} ⊔ {a+m}}`.
pub fn structural_discrepancies(depth: u32) -> Vec<Discrepancy> {
    let nodes = match tree_nodes(depth) {
        Ok(n) => n,
        Err(e) => {
            return vec![Discrepancy {
                genus: 0,
                detail: e.to_string(),
            }]
        }
    };
    let mut found = Vec::new();
    for s in &nodes {
        let mut fail = |detail: String| {
            found.push(Discrepancy {
                genus: s.genus(),
                detail: format!("{{{}}}: {detail}", s.gaps()),
            })
        };
        let c = s.conductor();
        let m = s.multiplicity();
        let top = c.max(1) + m - 1;
        if let Some(p) = s.right_primitive_iter().find(|&p| p < c || p > top) {
            fail(format!("right primitive {p} outside [{c}, {top}]"));
        }
        if s.genus() >= depth {
            continue;
        }
        let kids = s.children();
        if kids.len() as u32 != s.right_primitive_count() {
            fail(format!(
                "{} children but e_r = {}",
                kids.len(),
                s.right_primitive_count()
            ));
        }
        let parent_p = all_primitives(s);
        for (a, kid) in s.right_primitive_iter().zip(&kids) {
            if kid.frobenius() != a as i32 {
                fail(format!(
                    "child removing {a} has Frobenius number {}",
                    kid.frobenius()
                ));
            }
            if kid.genus() != s.genus() + 1 {
                fail(format!("child removing {a} has genus {}", kid.genus()));
            }
            if s.is_ordinary() {
                continue;
            }
            if kid.multiplicity() != m {
                fail(format!("child removing {a} changed the multiplicity"));
            }
            if kid.left_primitive_count() < s.left_primitive_count() {
                fail(format!("child removing {a} lost left primitives"));
            }
            let (e, e2) = (s.embedding_dimension(), kid.embedding_dimension());
            if e2 > e || e2 + 1 < e {
                fail(format!("child removing {a} has e = {e2}, parent e = {e}"));
            }
            let mut without: Vec<u32> = parent_p.iter().copied().filter(|&p| p != a).collect();
            let child_p = all_primitives(kid);
            if child_p != without {
                without.push(a + m);
                without.sort_unstable();
                if child_p != without {
                    fail(format!("child removing {a} has primitives {child_p:?}"));
                }
            }
        }
    }
    found
}

/// Exhaustive soundness check of `policy` on the untrimmed tree down to
/// genus `depth`.
///
/// Every node below a node cut by a primitive-count rule must satisfy
/// `d * e >= m` and Wilf's inequality; below a left-size cut, `4|L| >= c`
/// and Wilf's inequality; strictly below a special cut, no node may be
/// special. The explorer's counts must equal the number of nodes with no
/// cut on their path from the root.
pub fn trim_soundness(policy: &TrimPolicy, depth: u32) -> Vec<Discrepancy> {
    const PRIMITIVE: u8 = 1;
    const LEFT_SIZE: u8 = 2;
    const SPECIAL: u8 = 4;

    let mut found = Vec::new();
    let root = match SemigroupState::root(depth.max(1)) {
        Ok(r) => r,
        Err(e) => {
            return vec![Discrepancy {
                genus: 0,
                detail: e.to_string(),
            }]
        }
    };
    let mut expected = vec![0u64; depth as usize + 1];
    // (node, rules that fired on a strict ancestor, some ancestor was cut)
    let mut stack = vec![(root, 0u8, false)];
    while let Some((s, inherited, cut_above)) = stack.pop() {
        let mut fired = 0;
        if let Some(d) = policy.denominator {
            let embedding = (policy.embedding_on_ordinary || !s.is_ordinary())
                && cut_embedding(&s, d, policy.genus_bound);
            if cut_left_primitive(&s, d) || embedding {
                fired |= PRIMITIVE;
            }
        }
        if policy.left_size_rule && cut_left_size(&s, policy.genus_bound) {
            fired |= LEFT_SIZE;
        }
        if policy.special_rule && cut_special(&s) {
            fired |= SPECIAL;
        }
        let mut fail = |detail: String| {
            found.push(Discrepancy {
                genus: s.genus(),
                detail: format!("{{{}}}: {detail}", s.gaps()),
            })
        };
        let covered = inherited | (fired & (PRIMITIVE | LEFT_SIZE));
        let (m, e) = (s.multiplicity() as u64, s.embedding_dimension() as u64);
        if covered != 0 && s.wilf() < 0 {
            fail(format!("violates Wilf (W = {}) below a cut", s.wilf()));
        }
        if covered & PRIMITIVE != 0 {
            let d = policy.denominator.unwrap_or(0) as u64;
            if d * e < m {
                fail(format!(
                    "{d} * e = {} < m = {m} below a primitive-count cut",
                    d * e
                ));
            }
        }
        if covered & LEFT_SIZE != 0 && 4 * s.left_size() < s.conductor() {
            fail(format!(
                "4|L| = {} < c = {} below a left-size cut",
                4 * s.left_size(),
                s.conductor()
            ));
        }
        if inherited & SPECIAL != 0 && s.is_special() {
            fail("special node below a special cut".into());
        }
        let cut_here = cut_above || !policy.retain(&s);
        if !cut_here {
            expected[s.genus() as usize] += 1;
        }
        if s.genus() < depth {
            for child in s.children().into_iter().rev() {
                stack.push((child, inherited | fired, cut_here));
            }
        }
    }

    match explore_seq(&root, policy, depth) {
        Ok(report) => {
            if report.counts != expected {
                found.push(Discrepancy {
                    genus: depth,
                    detail: format!(
                        "explorer counts {:?}, expected {:?}",
                        report.counts, expected
                    ),
                });
            }
            for v in report.violations {
                found.push(Discrepancy {
                    genus: v.genus(),
                    detail: format!("{{{v}}}: reported as a Wilf violation"),
                });
            }
        }
        Err(e) => found.push(Discrepancy {
            genus: 0,
            detail: e.to_string(),
        }),
    }
    found
}

fn all_primitives(s: &SemigroupState) -> Vec<u32> {
    OracleSemigroup::from_gaps(&s.gaps())
        .map(|o| o.primitives)
        .unwrap_or_default()
}
