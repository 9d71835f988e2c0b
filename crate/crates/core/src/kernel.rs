//! Numerical semigroups as nodes of the genus tree.
//!
//! A [`SemigroupState`] stores membership over `[0, 3G + 1]` for a genus bound
//! `G`, together with the multiplicity, Frobenius number, genus, the number of
//! left primitives and the set of right primitives. Children are obtained by
//! removing one right primitive and every field is updated incrementally.
//!
//! Every numerical semigroup other than ℕ satisfies `m <= g + 1` and
//! `c <= 2g`, so all primitives of a node with genus at most `G` lie below
//! `c + m <= 3G + 1`.

use std::fmt;
use std::str::FromStr;

use crate::bits::{Membership, CAPACITY};
use crate::error::{Error, Result};

/// Largest genus bound accepted by [`SemigroupState::root`].
///
/// The membership bitmap of a node spans `[0, 3G + 1]` and must fit in
/// [`CAPACITY`] bits.
pub const MAX_GENUS: u32 = ((CAPACITY - 2) / 3) as u32;

/// Sorted set of gaps; the canonical textual form of a semigroup.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GapSet(Vec<u32>);

impl GapSet {
    /// Builds a gap set, rejecting zero and unsorted or repeated entries.
    pub fn new(gaps: Vec<u32>) -> Result<Self> {
        if gaps.first() == Some(&0) {
            return Err(Error::GapSetSyntax {
                text: join(&gaps),
                reason: "0 cannot be a gap".into(),
            });
        }
        if gaps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::GapSetSyntax {
                text: join(&gaps),
                reason: "entries must be strictly increasing".into(),
            });
        }
        Ok(GapSet(gaps))
    }

    pub fn empty() -> Self {
        GapSet(Vec::new())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn genus(&self) -> u32 {
        self.0.len() as u32
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.0.binary_search(&x).is_ok()
    }
}

fn join(xs: &[u32]) -> String {
    let mut out = String::new();
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&x.to_string());
    }
    out
}

impl fmt::Display for GapSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.0))
    }
}

impl FromStr for GapSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Ok(GapSet::empty());
        }
        let gaps = s
            .split(',')
            .map(|t| {
                t.parse::<u32>().map_err(|e| Error::GapSetSyntax {
                    text: s.to_string(),
                    reason: format!("{t:?}: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        GapSet::new(gaps).map_err(|e| match e {
            Error::GapSetSyntax { reason, .. } => Error::GapSetSyntax {
                text: s.to_string(),
                reason,
            },
            other => other,
        })
    }
}

/// The full invariant tuple of a semigroup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvariantRecord {
    pub multiplicity: u32,
    pub embedding_dimension: u32,
    pub left_primitives: u32,
    pub right_primitives: u32,
    pub frobenius: i32,
    pub conductor: u32,
    pub genus: u32,
    /// Number of elements below the Frobenius number.
    pub left_size: u32,
    /// `e * |L| - c`; Wilf's conjecture asserts this is never negative.
    pub wilf: i64,
}

/// Euclidean division of the conductor by the multiplicity with nonpositive
/// remainder: `c = q * m - rho`, `0 <= rho < m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EuclidSplit {
    pub quotient: u32,
    pub rho: u32,
    /// `m` divides `c`.
    pub special: bool,
}

/// One node of the tree of numerical semigroups.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SemigroupState {
    members: Membership,
    right: Membership,
    multiplicity: u16,
    frobenius: i16,
    genus: u16,
    left_primitives: u16,
    max_genus: u16,
}

fn check_genus_bound(max_genus: u32) -> Result<()> {
    if max_genus == 0 {
        return Err(Error::Config("genus bound must be at least 1".into()));
    }
    if max_genus > MAX_GENUS {
        return Err(Error::Config(format!(
            "genus bound {max_genus} exceeds the supported maximum {MAX_GENUS}"
        )));
    }
    Ok(())
}

impl SemigroupState {
    /// The root ℕ of the tree bounded at genus `max_genus`.
    pub fn root(max_genus: u32) -> Result<Self> {
        check_genus_bound(max_genus)?;
        let mut right = Membership::empty();
        right.insert(1);
        Ok(SemigroupState {
            members: Membership::full(),
            right,
            multiplicity: 1,
            frobenius: -1,
            genus: 0,
            left_primitives: 0,
            max_genus: max_genus as u16,
        })
    }

    /// Builds the state of the semigroup with the given gaps, recomputing
    /// every field from scratch.
    pub fn from_gaps(gaps: &GapSet, max_genus: u32) -> Result<Self> {
        check_genus_bound(max_genus)?;
        if gaps.genus() > max_genus {
            return Err(Error::OutOfBound {
                genus: gaps.genus(),
                bound: max_genus,
            });
        }
        let mut members = Membership::full();
        for &x in gaps.as_slice() {
            if x as usize >= CAPACITY {
                return Err(Error::Invalid(format!("gap {x} is beyond the bitmap")));
            }
            members.remove(x as usize);
        }
        let bound = bitmap_bound(max_genus);
        let primitives = primitives_by_sieve(&members, bound)?;
        let frobenius = gaps.as_slice().last().map_or(-1, |&f| f as i32);
        let mut right = Membership::empty();
        let mut left = 0;
        for p in primitives {
            if p as i32 > frobenius {
                right.insert(p as usize);
            } else {
                left += 1;
            }
        }
        let multiplicity = (1..=bound).find(|&x| members.contains(x)).unwrap_or(1);
        Ok(SemigroupState {
            members,
            right,
            multiplicity: multiplicity as u16,
            frobenius: frobenius as i16,
            genus: gaps.genus() as u16,
            left_primitives: left,
            max_genus: max_genus as u16,
        })
    }

    pub(crate) fn from_parts(
        members: Membership,
        right: Membership,
        multiplicity: u32,
        frobenius: i32,
        genus: u32,
        left_primitives: u32,
        max_genus: u32,
    ) -> Self {
        SemigroupState {
            members,
            right,
            multiplicity: multiplicity as u16,
            frobenius: frobenius as i16,
            genus: genus as u16,
            left_primitives: left_primitives as u16,
            max_genus: max_genus as u16,
        }
    }

    #[inline]
    pub fn multiplicity(&self) -> u32 {
        self.multiplicity as u32
    }

    /// `-1` for ℕ.
    #[inline]
    pub fn frobenius(&self) -> i32 {
        self.frobenius as i32
    }

    #[inline]
    pub fn conductor(&self) -> u32 {
        (self.frobenius + 1) as u32
    }

    #[inline]
    pub fn genus(&self) -> u32 {
        self.genus as u32
    }

    #[inline]
    pub fn left_primitive_count(&self) -> u32 {
        self.left_primitives as u32
    }

    #[inline]
    pub fn right_primitive_count(&self) -> u32 {
        self.right.count()
    }

    #[inline]
    pub fn embedding_dimension(&self) -> u32 {
        self.left_primitive_count() + self.right_primitive_count()
    }

    /// `|L| = c - g`.
    #[inline]
    pub fn left_size(&self) -> u32 {
        self.conductor() - self.genus()
    }

    #[inline]
    pub fn wilf(&self) -> i64 {
        self.embedding_dimension() as i64 * self.left_size() as i64 - self.conductor() as i64
    }

    /// True for `O_m = {0} ∪ (m + ℕ)`, including ℕ itself as `O_1`.
    #[inline]
    pub fn is_ordinary(&self) -> bool {
        self.genus + 1 == self.multiplicity
    }

    #[inline]
    pub fn is_special(&self) -> bool {
        self.conductor().is_multiple_of(self.multiplicity())
    }

    pub fn max_genus(&self) -> u32 {
        self.max_genus as u32
    }

    /// Largest integer tracked by the membership bitmap.
    pub fn bound(&self) -> usize {
        bitmap_bound(self.max_genus())
    }

    pub fn membership(&self) -> Membership {
        self.members
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        (x as usize) >= CAPACITY || self.members.contains(x as usize)
    }

    /// Right primitives in increasing order.
    pub fn right_primitives(&self) -> Vec<u32> {
        self.right_primitive_iter().collect()
    }

    pub fn right_primitive_iter(&self) -> impl Iterator<Item = u32> {
        self.right.ones().map(|x| x as u32)
    }

    #[cfg(test)]
    pub(crate) fn right_set(&self) -> &Membership {
        &self.right
    }

    pub fn gaps(&self) -> GapSet {
        let c = self.conductor() as usize;
        GapSet(
            (1..c)
                .filter(|&x| !self.members.contains(x))
                .map(|x| x as u32)
                .collect(),
        )
    }

    pub fn invariants(&self) -> InvariantRecord {
        InvariantRecord {
            multiplicity: self.multiplicity(),
            embedding_dimension: self.embedding_dimension(),
            left_primitives: self.left_primitive_count(),
            right_primitives: self.right_primitive_count(),
            frobenius: self.frobenius(),
            conductor: self.conductor(),
            genus: self.genus(),
            left_size: self.left_size(),
            wilf: self.wilf(),
        }
    }

    pub fn euclid_split(&self) -> EuclidSplit {
        let c = self.conductor();
        let m = self.multiplicity();
        let quotient = c.div_ceil(m);
        let rho = quotient * m - c;
        EuclidSplit {
            quotient,
            rho,
            special: rho == 0,
        }
    }

    /// The child `S ∖ {a}`.
    pub fn child(&self, a: u32) -> Result<Self> {
        if (a as usize) >= CAPACITY || !self.right.contains(a as usize) {
            return Err(Error::Contract(format!(
                "{a} is not a right primitive of the semigroup with gaps {{{}}}",
                self.gaps()
            )));
        }
        if self.genus() >= self.max_genus() {
            return Err(Error::OutOfBound {
                genus: self.genus() + 1,
                bound: self.max_genus(),
            });
        }
        Ok(self.child_unchecked(a))
    }

    /// `a` must be a right primitive and the genus must be below the bound.
    #[inline]
    pub(crate) fn child_unchecked(&self, a: u32) -> Self {
        let a = a as usize;
        let m = self.multiplicity as usize;
        let mut next = *self;
        next.members.remove(a);
        next.frobenius = a as i16;
        next.genus += 1;
        if a == m {
            // O_m ∖ {m} = O_{m+1}, primitives m+1..=2m+1.
            next.multiplicity += 1;
            next.left_primitives = 0;
            next.right = Membership::empty();
            for p in m + 1..=2 * m + 1 {
                next.right.insert(p);
            }
        } else {
            next.left_primitives += self.right.count_below(a) as u16;
            next.right.clear_through(a);
            let candidate = a + m;
            if !next.has_decomposition(candidate) {
                next.right.insert(candidate);
            }
        }
        next
    }

    /// Whether `x = s1 + s2` for some nonzero members `s1, s2`.
    #[inline]
    fn has_decomposition(&self, x: usize) -> bool {
        let m = self.multiplicity as usize;
        (m..=x / 2).any(|s| self.members.contains(s) && self.members.contains(x - s))
    }

    /// Children in increasing order of the removed right primitive.
    ///
    /// Nodes at the genus bound are leaves of the bounded tree and yield no
    /// children.
    pub fn children(&self) -> Vec<Self> {
        let mut out = Vec::with_capacity(self.right_primitive_count() as usize);
        self.for_each_child(|c| out.push(c));
        out
    }

    #[inline]
    pub fn for_each_child(&self, mut f: impl FnMut(Self)) {
        if self.genus() >= self.max_genus() {
            return;
        }
        for a in self.right.ones() {
            f(self.child_unchecked(a as u32));
        }
    }

    /// Checks every structural invariant against a from-scratch computation.
    pub fn validate(&self) -> Result<()> {
        let bound = self.bound();
        let c = self.conductor() as usize;
        let m = self.multiplicity() as usize;
        let invalid =
            |msg: String| Err(Error::Invalid(format!("{msg} (gaps {{{}}})", self.gaps())));
        if !self.members.contains(0) {
            return invalid("0 is not a member".into());
        }
        if let Some(x) = (c..=bound).find(|&x| !self.members.contains(x)) {
            return invalid(format!("{x} at or above the conductor {c} is a gap"));
        }
        let frobenius = (0..=bound).rev().find(|&x| !self.members.contains(x));
        if frobenius.map_or(-1, |f| f as i32) != self.frobenius() {
            return invalid(format!(
                "stored Frobenius number {} is wrong",
                self.frobenius()
            ));
        }
        let genus = (1..=bound).filter(|&x| !self.members.contains(x)).count();
        if genus != self.genus as usize {
            return invalid(format!("stored genus {} but counted {genus}", self.genus));
        }
        if (1..=bound).find(|&x| self.members.contains(x)) != Some(m) {
            return invalid(format!("stored multiplicity {m} is wrong"));
        }
        let primitives = primitives_by_sieve(&self.members, bound)?;
        // ℕ is the one case where c + m - 1 < 1 = m; shift its window.
        if let Some(p) = self.right.ones().find(|&p| p < c || p >= c.max(1) + m) {
            return invalid(format!("right primitive {p} outside [c, c + m - 1]"));
        }
        let right: Vec<u32> = primitives
            .iter()
            .copied()
            .filter(|&p| p as usize >= c)
            .collect();
        let left = primitives.len() - right.len();
        if right != self.right_primitives() {
            return invalid(format!(
                "right primitives {:?} differ from sieve {:?}",
                self.right_primitives(),
                right
            ));
        }
        if left != self.left_primitives as usize {
            return invalid(format!(
                "left primitive count {} differs from sieve {left}",
                self.left_primitives
            ));
        }
        Ok(())
    }
}

impl fmt::Debug for SemigroupState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SemigroupState")
            .field("gaps", &format_args!("{{{}}}", self.gaps()))
            .field("m", &self.multiplicity)
            .field("frobenius", &self.frobenius)
            .field("genus", &self.genus)
            .field("left_primitives", &self.left_primitives)
            .field("right_primitives", &self.right_primitives())
            .field("max_genus", &self.max_genus)
            .finish()
    }
}

pub(crate) fn bitmap_bound(max_genus: u32) -> usize {
    3 * max_genus as usize + 1
}

/// All primitives of the semigroup encoded by `membership` over `[0, bound]`,
/// computed by sieving out sums of two nonzero members.
pub fn primitives_by_sieve(membership: &Membership, bound: usize) -> Result<Vec<u32>> {
    if bound >= CAPACITY {
        return Err(Error::Invalid(format!(
            "bound {bound} exceeds bitmap capacity"
        )));
    }
    if !membership.contains(0) {
        return Err(Error::Invalid("0 is not a member".into()));
    }
    let frobenius = (0..=bound).rev().find(|&x| !membership.contains(x));
    let conductor = frobenius.map_or(0, |f| f + 1);
    let Some(m) = (1..=bound).find(|&x| membership.contains(x)) else {
        return Err(Error::Invalid("no nonzero member within the bound".into()));
    };
    let limit = conductor.max(1) + m - 1;
    if limit > bound {
        return Err(Error::Invalid(format!(
            "bound {bound} is too small for conductor {conductor} and multiplicity {m}"
        )));
    }
    let mut is_sum = vec![false; bound + 1];
    for x in m..=bound {
        if !membership.contains(x) {
            continue;
        }
        for y in x..=bound - x {
            if !membership.contains(y) {
                continue;
            }
            if !membership.contains(x + y) {
                return Err(Error::NotClosed {
                    x: x as u32,
                    y: y as u32,
                });
            }
            is_sum[x + y] = true;
        }
    }
    Ok((m..=limit)
        .filter(|&x| membership.contains(x) && !is_sum[x])
        .map(|x| x as u32)
        .collect())
}

/// `O_m = ⟨m, m+1, …, 2m-1⟩`.
pub fn ordinary(m: u32, max_genus: u32) -> Result<SemigroupState> {
    if m == 0 {
        return Err(Error::Config("multiplicity must be positive".into()));
    }
    SemigroupState::from_gaps(&GapSet((1..m).collect()), max_genus)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaps(xs: &[u32]) -> GapSet {
        GapSet::new(xs.to_vec()).unwrap()
    }

    fn state(xs: &[u32]) -> SemigroupState {
        SemigroupState::from_gaps(&gaps(xs), 20).unwrap()
    }

    #[test]
    fn root_is_naturals() {
        let r = SemigroupState::root(100).unwrap();
        assert_eq!(r.multiplicity(), 1);
        assert_eq!(r.frobenius(), -1);
        assert_eq!(r.genus(), 0);
        assert_eq!(r.left_primitive_count(), 0);
        assert_eq!(r.right_primitives(), vec![1]);
        assert_eq!(SemigroupState::root(10).unwrap().invariants().wilf, 0);
        r.validate().unwrap();
    }

    #[test]
    fn root_rejects_bad_bounds() {
        assert!(matches!(SemigroupState::root(0), Err(Error::Config(_))));
        assert!(matches!(
            SemigroupState::root(MAX_GENUS + 1),
            Err(Error::Config(_))
        ));
        assert!(SemigroupState::root(MAX_GENUS).is_ok());
    }

    #[test]
    fn root_has_single_child_o2() {
        let r = SemigroupState::root(5).unwrap();
        let kids = r.children();
        assert_eq!(kids.len(), 1);
        assert_eq!(kids[0], ordinary(2, 5).unwrap());
        assert_eq!(kids[0].gaps(), gaps(&[1]));
        assert_eq!(kids[0].right_primitives(), vec![2, 3]);
    }

    #[test]
    fn child_of_o5_removing_6() {
        let o5 = ordinary(5, 20).unwrap();
        let c = o5.child(6).unwrap();
        assert_eq!(c.gaps(), gaps(&[1, 2, 3, 4, 6]));
        assert_eq!(c.multiplicity(), 5);
        assert_eq!(c.frobenius(), 6);
        assert_eq!(c.genus(), 5);
        assert_eq!(c.left_primitive_count(), 1);
        assert_eq!(c.right_primitives(), vec![7, 8, 9, 11]);
        c.validate().unwrap();
    }

    #[test]
    fn removing_multiplicity_of_ordinary_gives_next_ordinary() {
        let o5 = ordinary(5, 20).unwrap();
        let c = o5.child(5).unwrap();
        assert_eq!(c, ordinary(6, 20).unwrap());
        assert_eq!((c.multiplicity(), c.frobenius(), c.genus()), (6, 5, 5));
    }

    #[test]
    fn child_errors() {
        let o3 = ordinary(3, 20).unwrap();
        assert!(matches!(o3.child(6), Err(Error::Contract(_))));
        assert!(matches!(o3.child(1000), Err(Error::Contract(_))));
        let top = ordinary(3, 2).unwrap();
        assert!(matches!(
            top.child(3),
            Err(Error::OutOfBound { genus: 3, bound: 2 })
        ));
        assert!(top.children().is_empty());
    }

    #[test]
    fn children_of_o3() {
        let kids = ordinary(3, 20).unwrap().children();
        assert_eq!(kids.len(), 3);
        assert_eq!(kids[0], ordinary(4, 20).unwrap());
        // ⟨3,5,7⟩ and ⟨3,4⟩
        assert_eq!(kids[1].gaps(), gaps(&[1, 2, 4]));
        assert_eq!(kids[1].right_primitives(), vec![5, 7]);
        assert_eq!(kids[2].gaps(), gaps(&[1, 2, 5]));
        assert_eq!(kids[2].right_primitives(), Vec::<u32>::new());
        assert_eq!(kids[2].embedding_dimension(), 2);
    }

    #[test]
    fn leaf_has_no_children() {
        // ⟨5,7,9,11⟩
        let s = state(&[1, 2, 3, 4, 6, 8, 13]);
        assert_eq!(s.frobenius(), 13);
        assert_eq!(s.right_primitive_count(), 0);
        assert!(s.children().is_empty());
    }

    #[test]
    fn invariant_records() {
        let s = state(&[1, 2, 4]);
        assert_eq!(
            s.invariants(),
            InvariantRecord {
                multiplicity: 3,
                embedding_dimension: 3,
                left_primitives: 1,
                right_primitives: 2,
                frobenius: 4,
                conductor: 5,
                genus: 3,
                left_size: 2,
                wilf: 1,
            }
        );
        let s = state(&[1, 2, 3, 5]);
        let r = s.invariants();
        assert_eq!(
            (
                r.multiplicity,
                r.embedding_dimension,
                r.left_primitives,
                r.frobenius
            ),
            (4, 4, 1, 5)
        );
        assert_eq!((r.conductor, r.genus, r.left_size, r.wilf), (6, 4, 2, 2));
        for m in 1..=20 {
            assert_eq!(ordinary(m, 20).unwrap().wilf(), 0);
        }
    }

    #[test]
    fn euclid_split_examples() {
        let o5 = ordinary(5, 20).unwrap();
        assert_eq!(
            o5.euclid_split(),
            EuclidSplit {
                quotient: 1,
                rho: 0,
                special: true
            }
        );
        assert_eq!(
            state(&[1, 2, 4]).euclid_split(),
            EuclidSplit {
                quotient: 2,
                rho: 1,
                special: false
            }
        );
        assert_eq!(
            state(&[1, 2, 3, 4, 6]).euclid_split(),
            EuclidSplit {
                quotient: 2,
                rho: 3,
                special: false
            }
        );
    }

    #[test]
    fn sieve_examples() {
        let o5 = ordinary(5, 20).unwrap();
        assert_eq!(
            primitives_by_sieve(&o5.membership(), o5.bound()).unwrap(),
            vec![5, 6, 7, 8, 9]
        );
        let s = state(&[1, 2, 4]);
        assert_eq!(
            primitives_by_sieve(&s.membership(), s.bound()).unwrap(),
            vec![3, 5, 7]
        );
        let n = SemigroupState::root(4).unwrap();
        assert_eq!(
            primitives_by_sieve(&n.membership(), n.bound()).unwrap(),
            vec![1]
        );
    }

    #[test]
    fn sieve_rejects_non_closed() {
        let mut m = Membership::full();
        m.remove(1);
        m.remove(4);
        assert!(matches!(
            primitives_by_sieve(&m, 31),
            Err(Error::NotClosed { x: 2, y: 2 })
        ));
    }

    #[test]
    fn from_gaps_examples() {
        assert_eq!(
            SemigroupState::from_gaps(&GapSet::empty(), 10).unwrap(),
            SemigroupState::root(10).unwrap()
        );
        let s = SemigroupState::from_gaps(&gaps(&[1, 2, 4, 5]), 10).unwrap();
        assert_eq!(
            (
                s.multiplicity(),
                s.frobenius(),
                s.genus(),
                s.left_primitive_count()
            ),
            (3, 5, 4, 1)
        );
        assert_eq!(s.right_primitives(), vec![7, 8]);
        let err = SemigroupState::from_gaps(&gaps(&[1, 4]), 10).unwrap_err();
        assert!(matches!(err, Error::NotClosed { x: 2, y: 2 }), "{err}");
        assert!(matches!(
            SemigroupState::from_gaps(&gaps(&[1, 2, 3]), 2),
            Err(Error::OutOfBound { genus: 3, bound: 2 })
        ));
    }

    #[test]
    fn gapset_text() {
        assert_eq!("".parse::<GapSet>().unwrap(), GapSet::empty());
        assert_eq!("1,2,4,5".parse::<GapSet>().unwrap(), gaps(&[1, 2, 4, 5]));
        assert_eq!(gaps(&[1, 2, 4, 5]).to_string(), "1,2,4,5");
        assert!("1,,2".parse::<GapSet>().is_err());
        assert!("2,1".parse::<GapSet>().is_err());
        assert!("0,1".parse::<GapSet>().is_err());
        assert!("1, 2".parse::<GapSet>().is_err());
    }
}
