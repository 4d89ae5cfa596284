//! Sets of nonnegative integer indices stored as sorted, disjoint,
//! half-open ranges. The end `u64::MAX` stands for an unbounded tail.

use std::ops::Range;

use serde::{Deserialize, Serialize};

/// Sentinel end of an unbounded range.
pub const UNBOUNDED: u64 = u64::MAX;

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IndexSet {
    ranges: Vec<(u64, u64)>,
}

impl IndexSet {
    pub fn empty() -> Self {
        IndexSet { ranges: Vec::new() }
    }

    pub fn range(start: u64, end: u64) -> Self {
        let mut s = IndexSet::empty();
        s.insert(start..end);
        s
    }

    /// `[start, ∞)`.
    pub fn from(start: u64) -> Self {
        IndexSet::range(start, UNBOUNDED)
    }

    pub fn from_ranges<I: IntoIterator<Item = Range<u64>>>(iter: I) -> Self {
        let mut s = IndexSet::empty();
        for r in iter {
            s.insert(r);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        IndexSet::from_ranges(iter.into_iter().map(|i| i..i + 1))
    }

    pub fn insert(&mut self, r: Range<u64>) {
        if r.start >= r.end {
            return;
        }
        self.ranges.push((r.start, r.end));
        self.normalize();
    }

    fn normalize(&mut self) {
        self.ranges.sort_unstable();
        let mut merged: Vec<(u64, u64)> = Vec::with_capacity(self.ranges.len());
        for &(a, b) in &self.ranges {
            if a >= b {
                continue;
            }
            match merged.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        self.ranges = merged;
    }

    pub fn ranges(&self) -> impl Iterator<Item = Range<u64>> + '_ {
        self.ranges.iter().map(|&(a, b)| a..b)
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.ranges.last().is_none_or(|r| r.1 != UNBOUNDED)
    }

    /// Number of indices, `None` when unbounded.
    pub fn len(&self) -> Option<u64> {
        if !self.is_bounded() {
            return None;
        }
        Some(self.ranges.iter().map(|r| r.1 - r.0).sum())
    }

    pub fn min(&self) -> Option<u64> {
        self.ranges.first().map(|r| r.0)
    }

    /// Largest index, `None` when empty or unbounded.
    pub fn max(&self) -> Option<u64> {
        match self.ranges.last() {
            Some(&(_, b)) if b != UNBOUNDED => Some(b - 1),
            _ => None,
        }
    }

    pub fn contains(&self, i: u64) -> bool {
        let k = self.ranges.partition_point(|r| r.1 <= i);
        self.ranges.get(k).is_some_and(|r| r.0 <= i)
    }

    pub fn union(&self, other: &IndexSet) -> IndexSet {
        let mut s = IndexSet {
            ranges: self.ranges.iter().chain(&other.ranges).copied().collect(),
        };
        s.normalize();
        s
    }

    pub fn intersection(&self, other: &IndexSet) -> IndexSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.ranges.len() && j < other.ranges.len() {
            let (a0, a1) = self.ranges[i];
            let (b0, b1) = other.ranges[j];
            let (lo, hi) = (a0.max(b0), a1.min(b1));
            if lo < hi {
                out.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        IndexSet { ranges: out }
    }

    /// Complement within `universe`.
    pub fn complement_in(&self, universe: &IndexSet) -> IndexSet {
        let mut gaps = Vec::new();
        let mut cursor = 0u64;
        for &(a, b) in &self.ranges {
            if a > cursor {
                gaps.push((cursor, a));
            }
            cursor = b;
        }
        if cursor != UNBOUNDED {
            gaps.push((cursor, UNBOUNDED));
        }
        IndexSet { ranges: gaps }.intersection(universe)
    }

    pub fn difference(&self, other: &IndexSet) -> IndexSet {
        other.complement_in(self)
    }

    pub fn is_subset(&self, other: &IndexSet) -> bool {
        self.difference(other).is_empty()
    }

    /// Scale every index by `2^shift` (dyadic refinement of cell indices).
    pub fn refine(&self, shift: u32) -> IndexSet {
        IndexSet {
            ranges: self
                .ranges
                .iter()
                .map(|&(a, b)| (a << shift, if b == UNBOUNDED { b } else { b << shift }))
                .collect(),
        }
    }

    /// The first `count` indices in increasing order.
    pub fn take_first(&self, mut count: u64) -> IndexSet {
        let mut out = Vec::new();
        for &(a, b) in &self.ranges {
            if count == 0 {
                break;
            }
            let len = b - a;
            if len <= count {
                out.push((a, b));
                count -= len;
            } else {
                out.push((a, a + count));
                count = 0;
            }
        }
        IndexSet { ranges: out }
    }

    /// Shift all indices by `k` toward zero, dropping those below `floor`.
    pub fn shift_down(&self, k: u64, floor: u64) -> IndexSet {
        let mut out = Vec::new();
        for &(a, b) in &self.ranges {
            let lo = a.saturating_sub(k).max(floor);
            let hi = if b == UNBOUNDED { UNBOUNDED } else { b.saturating_sub(k) };
            if lo < hi {
                out.push((lo, hi));
            }
        }
        let mut s = IndexSet { ranges: out };
        s.normalize();
        s
    }

    /// Iterate indices; panics on an unbounded set.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        assert!(self.is_bounded(), "cannot enumerate an unbounded index set");
        self.ranges.iter().flat_map(|&(a, b)| a..b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn merge_and_len() {
        let s = IndexSet::from_ranges([0..3, 2..5, 7..8]);
        assert_eq!(s.ranges().collect::<Vec<_>>(), vec![0..5, 7..8]);
        assert_eq!(s.len(), Some(6));
        assert!(s.contains(4) && !s.contains(5) && s.contains(7));
        assert_eq!(IndexSet::from(3).len(), None);
        assert_eq!(IndexSet::from(3).min(), Some(3));
        assert_eq!(s.max(), Some(7));
    }

    #[test]
    fn complement_of_prefix_is_tail() {
        let universe = IndexSet::from(1);
        let prefix = IndexSet::range(1, 11);
        assert_eq!(prefix.complement_in(&universe), IndexSet::from(11));
        assert!(IndexSet::from(11).complement_in(&universe).is_bounded());
    }

    #[test]
    fn refine_and_take() {
        let s = IndexSet::from_ranges([1..2, 3..4]).refine(2);
        assert_eq!(s.ranges().collect::<Vec<_>>(), vec![4..8, 12..16]);
        assert_eq!(s.take_first(6).ranges().collect::<Vec<_>>(), vec![4..8, 12..14]);
    }

    #[test]
    fn shift_down_drops_below_floor() {
        let s = IndexSet::from_ranges([1..4, 10..UNBOUNDED]).shift_down(2, 1);
        assert_eq!(s.ranges().collect::<Vec<_>>(), vec![1..2, 8..UNBOUNDED]);
    }

    fn small_set() -> impl Strategy<Value = IndexSet> {
        prop::collection::vec((0u64..40, 0u64..8), 0..6)
            .prop_map(|v| IndexSet::from_ranges(v.into_iter().map(|(a, l)| a..a + l)))
    }

    proptest! {
        #[test]
        fn set_algebra_matches_membership(a in small_set(), b in small_set()) {
            let universe = IndexSet::range(0, 64);
            let u = a.union(&b);
            let i = a.intersection(&b);
            let c = a.complement_in(&universe);
            for x in 0..64 {
                prop_assert_eq!(u.contains(x), a.contains(x) || b.contains(x));
                prop_assert_eq!(i.contains(x), a.contains(x) && b.contains(x));
                prop_assert_eq!(c.contains(x), !a.contains(x));
            }
            prop_assert_eq!(u.len().unwrap() + i.len().unwrap(), a.len().unwrap() + b.len().unwrap());
        }
    }
}
