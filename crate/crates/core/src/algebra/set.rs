//! Index sets as 64-bit masks.
//!
//! Every set that appears in the framework — orders σ of a multideviation,
//! blocks of an observer partition, comeasurable observable sets ρ — is a
//! subset of a universe of at most 64 indexed elements, so constant-time
//! bitmask operations cover all of them. Iteration order is always ascending
//! index.

use std::fmt;

pub const MAX_ELEMENTS: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ElementSet(u64);

impl ElementSet {
    pub const EMPTY: ElementSet = ElementSet(0);

    pub fn from_mask(mask: u64) -> Self {
        ElementSet(mask)
    }

    /// The full universe {0, .., n-1}.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_ELEMENTS);
        if n == 64 {
            ElementSet(u64::MAX)
        } else {
            ElementSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_ELEMENTS);
        ElementSet(1 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut mask = 0u64;
        for i in iter {
            assert!(i < MAX_ELEMENTS);
            mask |= 1 << i;
        }
        ElementSet(mask)
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_ELEMENTS && self.0 & (1 << i) != 0
    }

    pub fn insert(self, i: usize) -> Self {
        assert!(i < MAX_ELEMENTS);
        ElementSet(self.0 | (1 << i))
    }

    pub fn remove(self, i: usize) -> Self {
        ElementSet(self.0 & !(1u64 << i))
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersect(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn minus(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    /// Symmetric difference (⊖).
    pub fn symm_diff(self, other: Self) -> Self {
        ElementSet(self.0 ^ other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Ascending element indices.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut mask = self.0;
        std::iter::from_fn(move || {
            if mask == 0 {
                None
            } else {
                let i = mask.trailing_zeros() as usize;
                mask &= mask - 1;
                Some(i)
            }
        })
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self` in ascending mask order (carry-rippler walk).
    pub fn subsets(self) -> impl Iterator<Item = ElementSet> {
        let set = self.0;
        let mut subset = 0u64;
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let out = subset;
            subset = subset.wrapping_sub(set) & set;
            done = subset == 0;
            Some(ElementSet(out))
        })
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}
