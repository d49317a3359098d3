use std::fmt;

use smallvec::{smallvec, SmallVec};

const WORD: usize = 64;

/// A subset of a frame's states, stored as a bitset over state indices.
///
/// Every set remembers the size of the universe it lives in, so sets taken
/// from frames of different sizes never compare equal and complements are
/// well defined.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateSet {
    universe: usize,
    words: SmallVec<[u64; 2]>,
}

fn word_count(universe: usize) -> usize {
    universe.div_ceil(WORD)
}

impl StateSet {
    pub fn empty(universe: usize) -> Self {
        StateSet {
            universe,
            words: smallvec![0; word_count(universe)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = StateSet::empty(universe);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.trim();
        s
    }

    pub fn singleton(universe: usize, x: usize) -> Self {
        let mut s = StateSet::empty(universe);
        s.insert(x);
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, items: I) -> Self {
        let mut s = StateSet::empty(universe);
        for x in items {
            s.insert(x);
        }
        s
    }

    /// The set whose members are the set bits of `mask` (universe at most 64).
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        debug_assert!(universe <= WORD);
        let mut s = StateSet::empty(universe);
        if let Some(w) = s.words.first_mut() {
            *w = mask;
        }
        s.trim();
        s
    }

    /// Lowest 64 members as a bitmask.
    pub fn mask(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, x: usize) {
        assert!(x < self.universe, "state {x} out of range {}", self.universe);
        self.words[x / WORD] |= 1 << (x % WORD);
    }

    pub fn remove(&mut self, x: usize) {
        if x < self.universe {
            self.words[x / WORD] &= !(1 << (x % WORD));
        }
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.universe && self.words[x / WORD] & (1 << (x % WORD)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn is_subset(&self, other: &StateSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &StateSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    pub fn union(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &StateSet) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn intersect_with(&mut self, other: &StateSet) {
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
    }

    pub fn difference(&self, other: &StateSet) -> StateSet {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a &= !b;
        }
        out
    }

    pub fn complement(&self) -> StateSet {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.trim();
        out
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let tz = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    /// All subsets of a universe of the given size, in increasing bitmask order.
    pub fn all_subsets(universe: usize) -> impl Iterator<Item = StateSet> {
        assert!(universe < WORD, "subset scan over {universe} states");
        (0..(1u64 << universe)).map(move |m| StateSet::from_mask(universe, m))
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let a = StateSet::from_indices(70, [0, 3, 65]);
        let b = StateSet::from_indices(70, [3, 69]);
        assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), vec![0, 3, 65, 69]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![3]);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), vec![0, 65]);
        assert_eq!(a.complement().len(), 67);
        assert_eq!(StateSet::full(70).len(), 70);
        assert!(StateSet::from_indices(70, [3]).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert!(a.intersects(&b));
    }

    #[test]
    fn subset_scan() {
        assert_eq!(StateSet::all_subsets(3).count(), 8);
        assert_eq!(StateSet::from_mask(3, 0b101).iter().collect::<Vec<_>>(), vec![0, 2]);
        assert!(StateSet::from_mask(3, u64::MAX).is_full());
    }
}
