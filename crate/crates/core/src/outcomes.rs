use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an outcome inside one instance's universe `[0, p)`.
///
/// Indices are dense and stable for the lifetime of the instance; input
/// labels are mapped to indices at parse time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OutcomeId(pub usize);

impl fmt::Display for OutcomeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A subset of the outcome universe with O(1) membership tests.
///
/// Iteration order is always ascending raw index (the canonical order);
/// deterministic tie-breaks elsewhere in the engine rely on it.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "OutcomeSetRepr", into = "OutcomeSetRepr")]
pub struct OutcomeSet {
    universe: usize,
    blocks: Vec<u64>,
}

#[derive(Serialize, Deserialize, Clone)]
struct OutcomeSetRepr {
    universe: usize,
    members: Vec<usize>,
}

impl From<OutcomeSet> for OutcomeSetRepr {
    fn from(set: OutcomeSet) -> Self {
        OutcomeSetRepr {
            universe: set.universe,
            members: set.iter().collect(),
        }
    }
}

impl TryFrom<OutcomeSetRepr> for OutcomeSet {
    type Error = String;

    fn try_from(repr: OutcomeSetRepr) -> std::result::Result<Self, String> {
        let mut set = OutcomeSet::empty(repr.universe);
        for &i in &repr.members {
            if i >= repr.universe {
                return Err(format!("member {} outside universe {}", i, repr.universe));
            }
            set.insert(i);
        }
        Ok(set)
    }
}

impl OutcomeSet {
    pub fn empty(universe: usize) -> Self {
        OutcomeSet {
            universe,
            blocks: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = OutcomeSet::empty(universe);
        for i in 0..universe {
            set.insert(i);
        }
        set
    }

    pub fn from_indices(universe: usize, indices: &[usize]) -> Self {
        let mut set = OutcomeSet::empty(universe);
        for &i in indices {
            set.insert(i);
        }
        set
    }

    /// Builds a set from the low `universe` bits of `mask`.
    /// Only valid for universes of at most 64 outcomes.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        debug_assert!(universe <= 64);
        let mut set = OutcomeSet::empty(universe);
        for i in 0..universe {
            if mask >> i & 1 == 1 {
                set.insert(i);
            }
        }
        set
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, index: usize) {
        assert!(index < self.universe, "outcome index out of range");
        self.blocks[index / 64] |= 1 << (index % 64);
    }

    pub fn remove(&mut self, index: usize) {
        assert!(index < self.universe, "outcome index out of range");
        self.blocks[index / 64] &= !(1 << (index % 64));
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.universe && self.blocks[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn is_subset(&self, other: &OutcomeSet) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_proper_subset(&self, other: &OutcomeSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn complement(&self) -> OutcomeSet {
        let mut out = OutcomeSet::empty(self.universe);
        for i in 0..self.universe {
            if !self.contains(i) {
                out.insert(i);
            }
        }
        out
    }

    pub fn union(&self, other: &OutcomeSet) -> OutcomeSet {
        let mut out = self.clone();
        for (a, b) in out.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
        out
    }

    pub fn intersection(&self, other: &OutcomeSet) -> OutcomeSet {
        let mut out = self.clone();
        for (a, b) in out.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
        out
    }

    pub fn difference(&self, other: &OutcomeSet) -> OutcomeSet {
        let mut out = self.clone();
        for (a, b) in out.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
        out
    }

    pub fn intersects(&self, other: &OutcomeSet) -> bool {
        self.blocks.iter().zip(&other.blocks).any(|(a, b)| a & b != 0)
    }

    /// Members in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&i| self.contains(i))
    }

    /// Smallest member in the canonical (raw index) order.
    pub fn min_index(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl fmt::Debug for OutcomeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}/{}", self.universe)
    }
}

/// A ±1 game: the universe split into Alice's and Bob's preferred outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pm1Partition {
    alice: OutcomeSet,
    bob: OutcomeSet,
}

impl Pm1Partition {
    pub fn new(alice: OutcomeSet, bob: OutcomeSet) -> Result<Self> {
        if alice.universe_size() != bob.universe_size() {
            return Err(Error::UniverseMismatch {
                left: alice.universe_size(),
                right: bob.universe_size(),
            });
        }
        if alice.intersects(&bob) || alice.union(&bob) != OutcomeSet::full(alice.universe_size()) {
            return Err(Error::InvalidInstance(
                "omega_a and omega_b must partition the universe".into(),
            ));
        }
        Ok(Pm1Partition { alice, bob })
    }

    /// Partition with the given set for Alice and its complement for Bob.
    pub fn from_alice(alice: OutcomeSet) -> Self {
        let bob = alice.complement();
        Pm1Partition { alice, bob }
    }

    pub fn alice(&self) -> &OutcomeSet {
        &self.alice
    }

    pub fn bob(&self) -> &OutcomeSet {
        &self.bob
    }

    pub fn universe_size(&self) -> usize {
        self.alice.universe_size()
    }

    /// The same game with the players' roles exchanged.
    pub fn swapped(&self) -> Pm1Partition {
        Pm1Partition {
            alice: self.bob.clone(),
            bob: self.alice.clone(),
        }
    }
}
