//! Subsets of a configuration's point indices, stored as a 64-bit mask.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Largest number of points a configuration may hold.
pub const MAX_POINTS: usize = 64;

/// A set of point indices `< 64`.
///
/// The order is lexicographic on the sorted index lists, so `[0] < [0, 1] < [1]`
/// and the empty set comes first. Witness tie-breaking relies on it.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct PointSet(u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn from_bits(bits: u64) -> Self {
        PointSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_POINTS);
        if n == MAX_POINTS {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_POINTS);
        PointSet(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(PointSet::EMPTY, |s, i| s.with(i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_POINTS && self.0 & (1 << i) != 0
    }

    #[must_use]
    pub fn with(self, i: usize) -> Self {
        assert!(i < MAX_POINTS);
        PointSet(self.0 | (1 << i))
    }

    #[must_use]
    pub fn without(self, i: usize) -> Self {
        PointSet(self.0 & !(1u64 << i))
    }

    pub fn union(self, o: Self) -> Self {
        PointSet(self.0 | o.0)
    }

    pub fn intersection(self, o: Self) -> Self {
        PointSet(self.0 & o.0)
    }

    pub fn difference(self, o: Self) -> Self {
        PointSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    pub fn is_disjoint(self, o: Self) -> bool {
        self.0 & o.0 == 0
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets, in increasing bitmask order.
    pub fn subsets(self) -> Subsets {
        Subsets { mask: self.0, next: Some(0) }
    }

    /// Maps index `i` to `map[i]`.
    pub fn relabel(self, map: &[usize]) -> Self {
        PointSet::from_indices(self.iter().map(|i| map[i]))
    }
}

impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let i = diff.trailing_zeros();
        let above = |x: u64| if i == 63 { 0 } else { x >> (i + 1) };
        // the lists agree below i; exactly one of them continues with i
        if self.0 & (1 << i) != 0 {
            if above(other.0) == 0 {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        } else if above(self.0) == 0 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("}")
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

pub struct Subsets {
    mask: u64,
    next: Option<u64>,
}

impl Iterator for Subsets {
    type Item = PointSet;
    fn next(&mut self) -> Option<PointSet> {
        let cur = self.next?;
        self.next = if cur == self.mask { None } else { Some((cur.wrapping_sub(self.mask)) & self.mask) };
        Some(PointSet(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn lexicographic_order() {
        let a = PointSet::from_indices([0]);
        let b = PointSet::from_indices([0, 1]);
        let c = PointSet::from_indices([1]);
        let d = PointSet::from_indices([0, 2]);
        assert!(PointSet::EMPTY < a);
        assert!(a < b && b < c);
        assert!(b < d && d < c);
    }

    #[test]
    fn subsets_enumerates_all() {
        let s = PointSet::from_indices([1, 3, 4]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|x| x.is_subset(s)));
        assert_eq!(PointSet::EMPTY.subsets().count(), 1);
    }

    proptest! {
        #[test]
        fn order_matches_sorted_lists(a in any::<u64>(), b in any::<u64>()) {
            let (x, y) = (PointSet(a), PointSet(b));
            let (lx, ly) = (x.to_vec(), y.to_vec());
            prop_assert_eq!(x.cmp(&y), lx.cmp(&ly));
        }
    }

    #[test]
    fn relabel() {
        let s = PointSet::from_indices([0, 2]);
        assert_eq!(s.relabel(&[2, 1, 0]).to_vec(), vec![0, 2]);
    }
}
