//! Subsets `J ⊆ {0, …, n-1}` as bitmasks.

use std::fmt;

/// A subset of slot positions (0-based). Displayed 1-based, as `{1,3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Subset(u32);

pub const MAX_SLOTS: usize = 32;

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_bits(bits: u32) -> Self {
        Subset(bits)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// `{0, …, n-1}`.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_SLOTS, "at most {MAX_SLOTS} slots");
        if n == MAX_SLOTS {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn from_positions(positions: &[usize]) -> Self {
        Subset(positions.iter().fold(0, |acc, &p| acc | 1 << p))
    }

    pub fn singleton(p: usize) -> Self {
        Subset(1 << p)
    }

    pub fn contains(self, p: usize) -> bool {
        p < MAX_SLOTS && self.0 >> p & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn insert(self, p: usize) -> Self {
        Subset(self.0 | 1 << p)
    }

    pub fn remove(self, p: usize) -> Self {
        Subset(self.0 & !(1 << p))
    }

    pub fn complement(self, n: usize) -> Self {
        Subset(!self.0 & Subset::full(n).0)
    }

    pub fn union(self, other: Self) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn positions(self) -> impl Iterator<Item = usize> {
        (0..MAX_SLOTS).filter(move |&p| self.contains(p))
    }

    /// Removes position `p` and shifts higher positions down by one.
    pub fn drop_position(self, p: usize) -> Self {
        let low = self.0 & ((1u32 << p) - 1);
        let high = if p + 1 >= MAX_SLOTS { 0 } else { (self.0 >> (p + 1)) << p };
        Subset(low | high)
    }

    /// All subsets of `{0..n-1}` in increasing bitmask order.
    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        (0..=Subset::full(n).0).map(Subset)
    }

    /// All subsets of `{0..n-1}` of size `k`.
    pub fn of_size(n: usize, k: usize) -> impl Iterator<Item = Subset> {
        Subset::all(n).filter(move |s| s.len() == k)
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.positions().map(|p| (p + 1).to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}
