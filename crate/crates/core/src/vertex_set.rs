use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex index a [`VertexSet`] can hold.
pub const MAX_VERTICES: usize = 64;

/// A finite set of vertices drawn from `1..=64`, stored as a bitmask.
///
/// Iteration is ascending. The total order is the lexicographic order of the
/// ascending vertex lists, so `{1,2} < {1,2,3} < {1,3} < {2}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    /// `{1, ..., m}`.
    pub fn full(m: usize) -> Self {
        assert!(m <= MAX_VERTICES);
        if m == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << m) - 1)
        }
    }

    pub fn singleton(v: usize) -> Self {
        assert!((1..=MAX_VERTICES).contains(&v), "vertex {v} out of range");
        VertexSet(1u64 << (v - 1))
    }

    /// Builds a set from 1-indexed vertices, checking every entry against `m`.
    pub fn from_checked(vertices: &[usize], m: usize) -> Result<Self> {
        let mut bits = 0u64;
        for &v in vertices {
            if v == 0 || v > m || v > MAX_VERTICES {
                return Err(Error::OutOfRange { vertex: v, m });
            }
            bits |= 1u64 << (v - 1);
        }
        Ok(VertexSet(bits))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        (1..=MAX_VERTICES).contains(&v) && self.0 & (1u64 << (v - 1)) != 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn insert(&mut self, v: usize) {
        *self = self.union(VertexSet::singleton(v));
    }

    pub fn with(self, v: usize) -> VertexSet {
        self.union(VertexSet::singleton(v))
    }

    pub fn without(self, v: usize) -> VertexSet {
        self.difference(VertexSet::singleton(v))
    }

    /// Largest vertex, or 0 for the empty set.
    pub fn max_vertex(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn min_vertex(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    /// Number of elements of `self` strictly smaller than `v`.
    pub fn count_below(self, v: usize) -> usize {
        debug_assert!(v >= 1);
        (self.0 & ((1u64 << (v - 1)) - 1)).count_ones() as usize
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Re-indexes `self`, a subset of `within`, onto `1..=|within|` by rank.
    pub fn compress(self, within: VertexSet) -> VertexSet {
        debug_assert!(self.is_subset(within));
        let mut out = 0u64;
        for (rank, v) in within.iter().enumerate() {
            if self.contains(v) {
                out |= 1u64 << rank;
            }
        }
        VertexSet(out)
    }

    /// Inverse of [`VertexSet::compress`].
    pub fn expand(self, within: VertexSet) -> VertexSet {
        let mut out = 0u64;
        for (rank, v) in within.iter().enumerate() {
            if self.0 & (1u64 << rank) != 0 {
                out |= 1u64 << (v - 1);
            }
        }
        VertexSet(out)
    }

    /// Adds `offset` to every vertex.
    pub fn shifted(self, offset: usize) -> VertexSet {
        assert!(self.max_vertex() + offset <= MAX_VERTICES);
        VertexSet(self.0 << offset)
    }

    /// All subsets of `self` with exactly `k` elements, in lexicographic order.
    pub fn subsets_of_size(self, k: usize) -> Vec<VertexSet> {
        self.iter()
            .combinations(k)
            .map(|c| c.into_iter().collect())
            .collect()
    }

    /// All subsets of `self` (including the empty set), ordered by bitmask.
    pub fn all_subsets(self) -> impl Iterator<Item = VertexSet> {
        let mask = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == mask { None } else { Some(((cur | !mask).wrapping_add(1)) & mask) };
            Some(VertexSet(cur))
        })
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize + 1;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Iter;

    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        iter.into_iter().fold(VertexSet::EMPTY, VertexSet::with)
    }
}

impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        // First position where the ascending lists disagree.
        let p = diff.trailing_zeros();
        let self_holds = self.0 & (1u64 << p) != 0;
        let lacking = if self_holds { other.0 } else { self.0 };
        // The list holding p is smaller unless the other list ends right there.
        let holder_smaller = p < 63 && lacking >> (p + 1) != 0;
        if self_holds == holder_smaller {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        VertexSet::from_checked(&v, MAX_VERTICES).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn lexicographic_order_matches_vec_order() {
        let all: Vec<VertexSet> = VertexSet::full(5).all_subsets().collect();
        for &a in &all {
            for &b in &all {
                assert_eq!(a.cmp(&b), a.to_vec().cmp(&b.to_vec()), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn subsets_of_size_enumerates_binomial() {
        let s = set(&[2, 4, 5, 7, 9]);
        let threes = s.subsets_of_size(3);
        assert_eq!(threes.len(), 10);
        assert!(threes.windows(2).all(|w| w[0] < w[1]));
        assert!(threes.iter().all(|t| t.len() == 3 && t.is_subset(s)));
        assert_eq!(s.subsets_of_size(0), vec![VertexSet::EMPTY]);
        assert_eq!(s.subsets_of_size(5), vec![s]);
        assert!(s.subsets_of_size(6).is_empty());
    }

    #[test]
    fn all_subsets_counts() {
        assert_eq!(set(&[1, 3, 6]).all_subsets().count(), 8);
        assert_eq!(VertexSet::EMPTY.all_subsets().count(), 1);
    }

    #[test]
    fn compress_expand_roundtrip() {
        let within = set(&[2, 5, 7, 8]);
        let s = set(&[5, 8]);
        assert_eq!(s.compress(within), set(&[2, 4]));
        assert_eq!(s.compress(within).expand(within), s);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(VertexSet::from_checked(&[0], 3).is_err());
        assert!(VertexSet::from_checked(&[4], 3).is_err());
        assert_eq!(VertexSet::from_checked(&[3, 1], 3).unwrap().to_vec(), vec![1, 3]);
    }

    #[test]
    fn count_below_and_extremes() {
        let s = set(&[1, 4, 6]);
        assert_eq!(s.count_below(5), 2);
        assert_eq!(s.count_below(1), 0);
        assert_eq!(s.max_vertex(), 6);
        assert_eq!(s.min_vertex(), Some(1));
        assert_eq!(VertexSet::EMPTY.max_vertex(), 0);
    }
}
