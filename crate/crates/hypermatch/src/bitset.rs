//! Fixed-width vertex sets.
//!
//! All hot loops (factor backtracking, subset enumeration, link queries) work
//! on `VSet`, a two-word bitset. This caps hosts at [`MAX_VERTICES`]
//! vertices, which comfortably covers the exact-oracle scale this crate
//! targets while keeping sets `Copy` and allocation-free.

use std::fmt;

pub const MAX_VERTICES: usize = 128;
const WORDS: usize = 2;

/// A set of vertex ids in `[0, MAX_VERTICES)`.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VSet([u64; WORDS]);

impl VSet {
    pub const EMPTY: VSet = VSet([0; WORDS]);

    #[inline]
    pub fn empty() -> VSet {
        Self::EMPTY
    }

    /// The full set `{0, …, n−1}`. Panics if `n > MAX_VERTICES`.
    pub fn full(n: usize) -> VSet {
        assert!(n <= MAX_VERTICES);
        let mut s = VSet::empty();
        for v in 0..n {
            s.insert(v as u32);
        }
        s
    }

    #[inline]
    pub fn singleton(v: u32) -> VSet {
        let mut s = VSet::empty();
        s.insert(v);
        s
    }

    pub fn from_slice(vs: &[u32]) -> VSet {
        let mut s = VSet::empty();
        for &v in vs {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, v: u32) {
        debug_assert!((v as usize) < MAX_VERTICES);
        self.0[(v / 64) as usize] |= 1u64 << (v % 64);
    }

    #[inline]
    pub fn remove(&mut self, v: u32) {
        self.0[(v / 64) as usize] &= !(1u64 << (v % 64));
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        (self.0[(v / 64) as usize] >> (v % 64)) & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0 == [0; WORDS]
    }

    #[inline]
    pub fn union(&self, other: &VSet) -> VSet {
        VSet([self.0[0] | other.0[0], self.0[1] | other.0[1]])
    }

    #[inline]
    pub fn intersection(&self, other: &VSet) -> VSet {
        VSet([self.0[0] & other.0[0], self.0[1] & other.0[1]])
    }

    #[inline]
    pub fn minus(&self, other: &VSet) -> VSet {
        VSet([self.0[0] & !other.0[0], self.0[1] & !other.0[1]])
    }

    #[inline]
    pub fn is_disjoint(&self, other: &VSet) -> bool {
        (self.0[0] & other.0[0]) == 0 && (self.0[1] & other.0[1]) == 0
    }

    #[inline]
    pub fn is_subset_of(&self, other: &VSet) -> bool {
        (self.0[0] & !other.0[0]) == 0 && (self.0[1] & !other.0[1]) == 0
    }

    #[inline]
    pub fn with(&self, v: u32) -> VSet {
        let mut s = *self;
        s.insert(v);
        s
    }

    #[inline]
    pub fn without(&self, v: u32) -> VSet {
        let mut s = *self;
        s.remove(v);
        s
    }

    /// Smallest element, if any.
    pub fn first(&self) -> Option<u32> {
        self.iter().next()
    }

    /// Ascending iterator over members.
    pub fn iter(&self) -> Iter {
        Iter {
            words: self.0,
            word_ix: 0,
        }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }
}

pub struct Iter {
    words: [u64; WORDS],
    word_ix: usize,
}

impl Iterator for Iter {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        while self.word_ix < WORDS {
            let w = self.words[self.word_ix];
            if w != 0 {
                let bit = w.trailing_zeros();
                self.words[self.word_ix] &= w - 1;
                return Some(self.word_ix as u32 * 64 + bit);
            }
            self.word_ix += 1;
        }
        None
    }
}

impl FromIterator<u32> for VSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> VSet {
        let mut s = VSet::empty();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl serde::Serialize for VSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut s = VSet::empty();
        assert!(s.is_empty());
        s.insert(0);
        s.insert(127);
        s.insert(64);
        assert_eq!(s.len(), 3);
        assert!(s.contains(127) && s.contains(0) && s.contains(64));
        assert!(!s.contains(63));
        assert_eq!(s.to_vec(), vec![0, 64, 127]);
        s.remove(64);
        assert_eq!(s.to_vec(), vec![0, 127]);
    }

    #[test]
    fn set_algebra() {
        let a = VSet::from_slice(&[1, 2, 3]);
        let b = VSet::from_slice(&[3, 4]);
        assert_eq!(a.union(&b).to_vec(), vec![1, 2, 3, 4]);
        assert_eq!(a.intersection(&b).to_vec(), vec![3]);
        assert_eq!(a.minus(&b).to_vec(), vec![1, 2]);
        assert!(!a.is_disjoint(&b));
        assert!(a.minus(&b).is_disjoint(&b));
        assert!(VSet::from_slice(&[1, 3]).is_subset_of(&a));
        assert!(!b.is_subset_of(&a));
    }

    #[test]
    fn full_and_first() {
        let f = VSet::full(70);
        assert_eq!(f.len(), 70);
        assert_eq!(f.first(), Some(0));
        assert_eq!(f.minus(&VSet::full(69)).to_vec(), vec![69]);
        assert_eq!(VSet::empty().first(), None);
    }
}
