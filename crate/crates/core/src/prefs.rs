use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::outcomes::{OutcomeId, OutcomeSet};

/// A strict total order over the outcome universe of one player.
///
/// Position 0 of the order is the worst outcome, position `p - 1` the best.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Preference {
    order: Vec<usize>,
    rank: Vec<usize>,
}

impl Preference {
    /// Builds a preference from the worst-to-best listing of outcome indices.
    /// Rejects repeats, gaps and out-of-range indices.
    pub fn new(order: Vec<usize>, universe: usize) -> Result<Self> {
        if order.len() != universe {
            return Err(Error::InvalidPreference(format!(
                "expected {} outcomes, got {}",
                universe,
                order.len()
            )));
        }
        let mut rank = vec![usize::MAX; universe];
        for (pos, &i) in order.iter().enumerate() {
            if i >= universe {
                return Err(Error::InvalidPreference(format!(
                    "outcome index {i} outside universe of size {universe}"
                )));
            }
            if rank[i] != usize::MAX {
                return Err(Error::InvalidPreference(format!(
                    "outcome index {i} listed twice"
                )));
            }
            rank[i] = pos;
        }
        Ok(Preference { order, rank })
    }

    /// The identity order: outcome 0 worst, outcome `p - 1` best.
    pub fn ascending(universe: usize) -> Self {
        Preference::new((0..universe).collect(), universe).unwrap()
    }

    pub fn universe_size(&self) -> usize {
        self.order.len()
    }

    /// Position of an outcome in the order; higher means better.
    pub fn rank(&self, outcome: usize) -> usize {
        self.rank[outcome]
    }

    /// Outcome indices from worst to best.
    pub fn worst_to_best(&self) -> &[usize] {
        &self.order
    }

    /// True when `a` is strictly preferred to `b`.
    pub fn prefers(&self, a: usize, b: usize) -> bool {
        self.rank[a] > self.rank[b]
    }
}

/// Compares two outcome sets in the lexicographic order induced by `pref`.
///
/// The comparison locates the preference-minimal element of the symmetric
/// difference: whichever set holds it loses. Equivalently, with weights
/// `-2^(p-i)` assigned from worst to best, the result is the sign of the
/// weight difference; the symmetric-difference rule avoids the overflow the
/// weights hit beyond 62 outcomes.
///
/// `Greater` means `s` is lexicographically safer than `t`. Dropping any
/// element improves a set, so the empty set is the unique maximum.
pub fn lex_compare(s: &OutcomeSet, t: &OutcomeSet, pref: &Preference) -> Result<Ordering> {
    let p = pref.universe_size();
    if s.universe_size() != p {
        return Err(Error::UniverseMismatch {
            left: s.universe_size(),
            right: p,
        });
    }
    if t.universe_size() != p {
        return Err(Error::UniverseMismatch {
            left: t.universe_size(),
            right: p,
        });
    }
    for &omega in pref.worst_to_best() {
        match (s.contains(omega), t.contains(omega)) {
            (true, false) => return Ok(Ordering::Less),
            (false, true) => return Ok(Ordering::Greater),
            _ => {}
        }
    }
    Ok(Ordering::Equal)
}

/// The preference-maximal element of a nonempty set.
pub fn pref_max(s: &OutcomeSet, pref: &Preference) -> Result<OutcomeId> {
    if s.universe_size() != pref.universe_size() {
        return Err(Error::UniverseMismatch {
            left: s.universe_size(),
            right: pref.universe_size(),
        });
    }
    pref.worst_to_best()
        .iter()
        .rev()
        .copied()
        .find(|&omega| s.contains(omega))
        .map(OutcomeId)
        .ok_or(Error::EmptySet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(p: usize, indices: &[usize]) -> OutcomeSet {
        OutcomeSet::from_indices(p, indices)
    }

    #[test]
    fn strict_subset_is_greater() {
        let pref = Preference::ascending(4);
        let s = set(4, &[1, 2]);
        let t = set(4, &[0, 1, 2]);
        assert_eq!(lex_compare(&s, &t, &pref).unwrap(), Ordering::Greater);
        assert_eq!(lex_compare(&t, &s, &pref).unwrap(), Ordering::Less);
    }

    #[test]
    fn equal_sets_compare_equal() {
        let pref = Preference::new(vec![2, 0, 1], 3).unwrap();
        let s = set(3, &[0, 2]);
        assert_eq!(lex_compare(&s, &s.clone(), &pref).unwrap(), Ordering::Equal);
    }

    #[test]
    fn ascending_order_example() {
        // order w1 < w2 < w3 (indices 0 < 1 < 2): {w1} loses to {w2,w3}
        let pref = Preference::ascending(3);
        let s = set(3, &[0]);
        let t = set(3, &[1, 2]);
        assert_eq!(lex_compare(&s, &t, &pref).unwrap(), Ordering::Less);
    }

    #[test]
    fn reordered_example() {
        // order w3 < w1 < w2: the minimum of the symmetric difference is w3,
        // held by {w2,w3}, so {w1} wins.
        let pref = Preference::new(vec![2, 0, 1], 3).unwrap();
        let s = set(3, &[0]);
        let t = set(3, &[1, 2]);
        assert_eq!(lex_compare(&s, &t, &pref).unwrap(), Ordering::Greater);
    }

    #[test]
    fn pref_max_basics() {
        let pref = Preference::new(vec![2, 0, 1], 3).unwrap();
        assert_eq!(pref_max(&set(3, &[0]), &pref).unwrap(), OutcomeId(0));
        assert_eq!(pref_max(&set(3, &[0, 1]), &pref).unwrap(), OutcomeId(1));
        assert_eq!(pref_max(&OutcomeSet::full(3), &pref).unwrap(), OutcomeId(1));
        assert!(matches!(
            pref_max(&OutcomeSet::empty(3), &pref),
            Err(Error::EmptySet)
        ));
        let asc = Preference::ascending(2);
        assert_eq!(pref_max(&set(2, &[0, 1]), &asc).unwrap(), OutcomeId(1));
    }

    #[test]
    fn preference_validation() {
        assert!(Preference::new(vec![2, 0, 1], 3).is_ok());
        assert!(matches!(
            Preference::new(vec![0, 0, 1], 3),
            Err(Error::InvalidPreference(_))
        ));
        assert!(matches!(
            Preference::new(vec![0, 1], 3),
            Err(Error::InvalidPreference(_))
        ));
        assert!(matches!(
            Preference::new(vec![0, 1, 3], 3),
            Err(Error::InvalidPreference(_))
        ));
    }

    #[test]
    fn empty_set_is_unique_maximum() {
        // every nonempty subset of a small universe loses to the empty set
        let p = 5;
        let pref = Preference::new(vec![3, 1, 4, 0, 2], p).unwrap();
        let empty = OutcomeSet::empty(p);
        for mask in 1u64..(1 << p) {
            let s = OutcomeSet::from_mask(p, mask);
            assert_eq!(lex_compare(&empty, &s, &pref).unwrap(), Ordering::Greater);
        }
    }

    /// Reference order via the explicit weight formula, usable for p <= 20.
    fn weight(s: &OutcomeSet, pref: &Preference) -> i64 {
        let p = pref.universe_size();
        s.iter().map(|i| -(1i64 << (p - 1 - pref.rank(i)))).sum()
    }

    fn arb_universe_and_pref(max_p: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
        (1..=max_p).prop_flat_map(|p| (Just(p), Just((0..p).collect::<Vec<_>>()).prop_shuffle()))
    }

    proptest! {
        #[test]
        fn agrees_with_weight_formula(
            (p, order) in arb_universe_and_pref(20),
            mask_a in any::<u64>(),
            mask_b in any::<u64>(),
        ) {
            let pref = Preference::new(order, p).unwrap();
            let a = OutcomeSet::from_mask(p, mask_a & ((1u64 << p) - 1));
            let b = OutcomeSet::from_mask(p, mask_b & ((1u64 << p) - 1));
            let by_weight = weight(&a, &pref).cmp(&weight(&b, &pref));
            prop_assert_eq!(lex_compare(&a, &b, &pref).unwrap(), by_weight);
        }

        #[test]
        fn total_order_up_to_equality(
            (p, order) in arb_universe_and_pref(12),
            ma in any::<u64>(),
            mb in any::<u64>(),
            mc in any::<u64>(),
        ) {
            let pref = Preference::new(order, p).unwrap();
            let m = (1u64 << p) - 1;
            let a = OutcomeSet::from_mask(p, ma & m);
            let b = OutcomeSet::from_mask(p, mb & m);
            let c = OutcomeSet::from_mask(p, mc & m);
            // antisymmetry
            let ab = lex_compare(&a, &b, &pref).unwrap();
            let ba = lex_compare(&b, &a, &pref).unwrap();
            prop_assert_eq!(ab, ba.reverse());
            prop_assert_eq!(ab == Ordering::Equal, a == b);
            // transitivity of (non-strict) order
            let bc = lex_compare(&b, &c, &pref).unwrap();
            let ac = lex_compare(&a, &c, &pref).unwrap();
            if ab != Ordering::Less && bc != Ordering::Less {
                prop_assert_ne!(ac, Ordering::Less);
            }
        }

        #[test]
        fn singleton_beats_pair(
            (p, order) in arb_universe_and_pref(12),
            i in any::<prop::sample::Index>(),
            j in any::<prop::sample::Index>(),
        ) {
            let pref = Preference::new(order, p).unwrap();
            let x = i.index(p);
            let y = j.index(p);
            prop_assume!(x != y);
            let single = OutcomeSet::from_indices(p, &[x]);
            let pair = OutcomeSet::from_indices(p, &[x, y]);
            prop_assert_eq!(
                lex_compare(&single, &pair, &pref).unwrap(),
                Ordering::Greater
            );
        }
    }
}
