//! Cut rules for the bounded tree.
//!
//! Each predicate decides from a single node whether its whole subtree can be
//! dropped: either every descendant up to the genus bound is known to satisfy
//! Wilf's conjecture, or (special trimming) no descendant is special. All
//! inequalities are evaluated in exact integer form.

use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::SemigroupState;

/// Which cut rules are active, and with which parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TrimPolicy {
    /// The genus bound `G` used inside the inequalities.
    pub genus_bound: u32,
    /// `d >= 3`; `None` disables both primitive-count rules.
    pub denominator: Option<u32>,
    /// Cut when `3|L| >= G`.
    pub left_size_rule: bool,
    /// Cut nodes with no right primitive `≡ -1 (mod m)`.
    pub special_rule: bool,
    /// Apply the embedding-dimension rule to ordinary nodes too.
    pub embedding_on_ordinary: bool,
}

impl TrimPolicy {
    /// The full tree: nothing is ever cut.
    pub fn none(genus_bound: u32) -> Self {
        TrimPolicy {
            genus_bound,
            denominator: None,
            left_size_rule: false,
            special_rule: false,
            embedding_on_ordinary: true,
        }
    }

    pub fn with_denominator(genus_bound: u32, d: u32) -> Result<Self> {
        if d < 3 {
            return Err(Error::Config(format!(
                "trim denominator must be at least 3, got {d}"
            )));
        }
        Ok(TrimPolicy {
            denominator: Some(d),
            ..TrimPolicy::none(genus_bound)
        })
    }

    pub fn special(mut self) -> Self {
        self.special_rule = true;
        self
    }

    pub fn left_size(mut self) -> Self {
        self.left_size_rule = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.genus_bound == 0 {
            return Err(Error::Config("genus bound must be at least 1".into()));
        }
        match self.denominator {
            Some(d) if d < 3 => Err(Error::Config(format!(
                "trim denominator must be at least 3, got {d}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn is_full_tree(&self) -> bool {
        self.denominator.is_none() && !self.left_size_rule && !self.special_rule
    }

    /// Whether `state` survives every enabled rule.
    #[inline]
    pub fn retain(&self, state: &SemigroupState) -> bool {
        if let Some(d) = self.denominator {
            if cut_left_primitive(state, d) {
                return false;
            }
            if (self.embedding_on_ordinary || !state.is_ordinary())
                && cut_embedding(state, d, self.genus_bound)
            {
                return false;
            }
        }
        if self.left_size_rule && cut_left_size(state, self.genus_bound) {
            return false;
        }
        if self.special_rule && cut_special(state) {
            return false;
        }
        true
    }
}

/// Stable textual encoding, used to match checkpoints against a run.
impl fmt::Display for TrimPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bound={} denominator=", self.genus_bound)?;
        match self.denominator {
            Some(d) => write!(f, "{d}")?,
            None => f.write_str("none")?,
        }
        let flag = |b: bool| if b { "on" } else { "off" };
        write!(
            f,
            " left-size={} special={} ordinary-embedding={}",
            flag(self.left_size_rule),
            flag(self.special_rule),
            flag(self.embedding_on_ordinary)
        )
    }
}

/// `d * e_l >= m` for a non-ordinary node.
#[inline]
pub fn cut_left_primitive(state: &SemigroupState, d: u32) -> bool {
    !state.is_ordinary()
        && d as u64 * state.left_primitive_count() as u64 >= state.multiplicity() as u64
}

/// `d * e >= m + d * (G - g)`.
#[inline]
pub fn cut_embedding(state: &SemigroupState, d: u32, genus_bound: u32) -> bool {
    let d = d as i64;
    let slack = genus_bound as i64 - state.genus() as i64;
    d * state.embedding_dimension() as i64 >= state.multiplicity() as i64 + d * slack
}

/// `3 * |L| >= G`.
#[inline]
pub fn cut_left_size(state: &SemigroupState, genus_bound: u32) -> bool {
    3 * state.left_size() as u64 >= genus_bound as u64
}

/// No right primitive `b` with `m | b + 1`.
///
/// Every child of such a node has conductor `b + 1` not divisible by `m`
/// and keeps the property, so no proper descendant is special. The node
/// itself may be special; callers that drop it must check it separately
/// (see [`crate::explore`]).
#[inline]
pub fn cut_special(state: &SemigroupState) -> bool {
    let m = state.multiplicity();
    !state.right_primitive_iter().any(|b| (b + 1) % m == 0)
}
