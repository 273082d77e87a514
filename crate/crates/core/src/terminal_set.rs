use std::fmt;

/// A set of terminals stored as a 64-bit mask over terminal indices.
///
/// Inside the solver the terminals are ordered so that the source terminals
/// occupy bits `0..k-1` and the root occupies bit `k-1`; a label set never has
/// the root bit, while bound arguments (complements) always do.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TerminalSet(pub u64);

impl TerminalSet {
    pub const EMPTY: TerminalSet = TerminalSet(0);

    /// Maximum number of terminals representable.
    pub const CAPACITY: usize = 64;

    #[inline]
    pub fn singleton(i: usize) -> Self {
        debug_assert!(i < Self::CAPACITY);
        TerminalSet(1u64 << i)
    }

    /// The set `{0, .., n-1}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= Self::CAPACITY);
        if n == 64 {
            TerminalSet(u64::MAX)
        } else {
            TerminalSet((1u64 << n) - 1)
        }
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < Self::CAPACITY && self.0 >> i & 1 == 1
    }

    #[inline]
    pub fn with(self, i: usize) -> Self {
        TerminalSet(self.0 | 1u64 << i)
    }

    #[inline]
    pub fn without(self, i: usize) -> Self {
        TerminalSet(self.0 & !(1u64 << i))
    }

    #[inline]
    pub fn union(self, other: Self) -> Self {
        TerminalSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        TerminalSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        TerminalSet(self.0 & !other.0)
    }

    #[inline]
    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    /// Smallest member, if any.
    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Member indices in increasing order.
    pub fn iter(self) -> Members {
        Members(self.0)
    }

    /// All nonempty subsets (including `self`), in decreasing mask order.
    pub fn subsets(self) -> Subsets {
        Subsets {
            mask: self.0,
            next: self.0,
            done: self.0 == 0,
        }
    }

    /// All nonempty proper subsets.
    pub fn proper_subsets(self) -> impl Iterator<Item = TerminalSet> {
        let me = self;
        self.subsets().filter(move |s| *s != me)
    }
}

impl fmt::Debug for TerminalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for TerminalSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(TerminalSet::EMPTY, TerminalSet::with)
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

/// Standard `(s - 1) & mask` walk over the nonempty subsets of a mask.
pub struct Subsets {
    mask: u64,
    next: u64,
    done: bool,
}

impl Iterator for Subsets {
    type Item = TerminalSet;

    #[inline]
    fn next(&mut self) -> Option<TerminalSet> {
        if self.done {
            return None;
        }
        let current = self.next;
        self.next = current.wrapping_sub(1) & self.mask;
        if self.next == 0 {
            self.done = true;
        }
        Some(TerminalSet(current))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn basic_ops() {
        let a: TerminalSet = [0, 2, 5].into_iter().collect();
        let b = TerminalSet::singleton(2);
        assert_eq!(a.len(), 3);
        assert!(b.is_subset_of(a));
        assert!(!a.is_subset_of(b));
        assert!(a.difference(b).is_disjoint(b));
        assert_eq!(a.first(), Some(0));
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![0, 2, 5]);
        assert_eq!(TerminalSet::full(3).bits(), 0b111);
        assert_eq!(TerminalSet::full(64).bits(), u64::MAX);
        assert!(TerminalSet::full(64).contains(63));
        assert!(!a.contains(64));
    }

    #[test]
    fn empty_set_has_no_subsets() {
        assert_eq!(TerminalSet::EMPTY.subsets().count(), 0);
        assert_eq!(TerminalSet::EMPTY.first(), None);
    }

    proptest! {
        #[test]
        fn subset_walk_visits_every_nonempty_subset_once(mask in 0u64..(1 << 12)) {
            let s = TerminalSet(mask);
            let subs: Vec<u64> = s.subsets().map(|t| t.bits()).collect();
            let p = s.len();
            prop_assert_eq!(subs.len(), (1usize << p) - 1);
            let mut sorted = subs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), subs.len());
            for t in subs {
                prop_assert!(t != 0 && t & !mask == 0);
            }
            prop_assert_eq!(s.proper_subsets().count(), ((1usize << p) - 1).saturating_sub(1));
        }
    }
}
