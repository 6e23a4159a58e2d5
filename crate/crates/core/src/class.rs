//! Sets of morphisms of a finite category, stored as bitsets over dense indices.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

use crate::fincat::{FinCat, Mor};

/// A class of morphisms. The universe size is the morphism count of the
/// category the class lives in; the category itself is not stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MorClass {
    bits: FixedBitSet,
}

impl MorClass {
    pub fn empty(universe: usize) -> Self {
        MorClass { bits: FixedBitSet::with_capacity(universe) }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        MorClass { bits }
    }

    pub fn from_members(universe: usize, members: impl IntoIterator<Item = Mor>) -> Self {
        let mut c = Self::empty(universe);
        for m in members {
            c.insert(m);
        }
        c
    }

    pub fn from_predicate(universe: usize, mut pred: impl FnMut(Mor) -> bool) -> Self {
        Self::from_members(universe, (0..universe).filter(|&m| pred(m)))
    }

    /// Identities of `cat`.
    pub fn identities(cat: &FinCat) -> Self {
        Self::from_members(cat.num_morphisms(), (0..cat.num_objects()).map(|o| cat.identity(o)))
    }

    /// Isomorphisms of `cat`.
    pub fn isos(cat: &FinCat) -> Self {
        Self::from_predicate(cat.num_morphisms(), |m| cat.is_iso(m))
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, m: Mor) -> bool {
        self.bits.contains(m)
    }

    pub fn insert(&mut self, m: Mor) {
        self.bits.insert(m);
    }

    pub fn remove(&mut self, m: Mor) {
        self.bits.set(m, false);
    }

    pub fn iter(&self) -> impl Iterator<Item = Mor> + '_ {
        self.bits.ones()
    }

    pub fn members(&self) -> Vec<Mor> {
        self.iter().collect()
    }

    pub fn union(&self, other: &Self) -> Self {
        self.check(other);
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        MorClass { bits }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.check(other);
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        MorClass { bits }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.check(other);
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.check(other);
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        MorClass { bits }
    }

    pub fn complement(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        MorClass { bits }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check(other);
        self.bits.is_subset(&other.bits)
    }

    /// First member of `self` not in `other`.
    pub fn first_outside(&self, other: &Self) -> Option<Mor> {
        self.check(other);
        self.bits.difference(&other.bits).next()
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.universe(), other.universe(), "classes over different universes");
    }
}

impl Ord for MorClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.universe()
            .cmp(&other.universe())
            .then_with(|| self.bits.as_slice().cmp(other.bits.as_slice()))
    }
}

impl PartialOrd for MorClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for MorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for MorClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_algebra() {
        let a = MorClass::from_members(10, [1, 3, 5]);
        let b = MorClass::from_members(10, [3, 4]);
        assert_eq!(a.union(&b).members(), vec![1, 3, 4, 5]);
        assert_eq!(a.intersection(&b).members(), vec![3]);
        assert_eq!(a.difference(&b).members(), vec![1, 5]);
        assert_eq!(a.complement().count(), 7);
        assert!(MorClass::from_members(10, [3]).is_subset(&b));
        assert_eq!(a.first_outside(&b), Some(1));
        assert_eq!(MorClass::full(10).count(), 10);
    }

    #[test]
    fn ordering_is_total_and_consistent() {
        let a = MorClass::from_members(4, [0]);
        let b = MorClass::from_members(4, [1]);
        assert_ne!(a.cmp(&b), Ordering::Equal);
        assert_eq!(a.cmp(&a.clone()), Ordering::Equal);
    }
}
