use crate::error::{Error, Result};
use crate::oracle::{BackendKind, Player, Pm1Result, StrategyHandle, StrategyPayload};
use crate::outcomes::{OutcomeSet, Pm1Partition};

/// A monotone non-decreasing property given by its generators: the
/// inclusion-minimal subsets satisfying it. A set satisfies the property
/// iff it contains a generator.
///
/// Alice's strategies are the generators; Bob's are the minimal transversals
/// of the generator family. Game forms selected from this correspondence are
/// always tight.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotonePropertyForm {
    universe: usize,
    generators: Vec<OutcomeSet>,
}

impl MonotonePropertyForm {
    pub fn new(universe: usize, generators: Vec<OutcomeSet>) -> Result<Self> {
        if universe == 0 {
            return Err(Error::InvalidInstance("universe must be nonempty".into()));
        }
        if generators.is_empty() {
            return Err(Error::InvalidInstance(
                "at least one generator is required".into(),
            ));
        }
        for (i, g) in generators.iter().enumerate() {
            if g.universe_size() != universe {
                return Err(Error::UniverseMismatch {
                    left: g.universe_size(),
                    right: universe,
                });
            }
            if g.is_empty() {
                return Err(Error::InvalidInstance(format!("generator {i} is empty")));
            }
            for (j, h) in generators.iter().enumerate() {
                if i != j && g.is_subset(h) && (g != h || i < j) {
                    return Err(Error::InvalidInstance(format!(
                        "generator {j} contains generator {i}; generators must be inclusion-minimal"
                    )));
                }
            }
        }
        Ok(MonotonePropertyForm {
            universe,
            generators,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn generators(&self) -> &[OutcomeSet] {
        &self.generators
    }
}

/// Alice wins iff some generator fits inside her set (witness: the first
/// such generator). Otherwise Bob's set meets every generator; his witness
/// is that set minimized to an inclusion-minimal transversal by deleting
/// elements in ascending canonical order.
pub fn solve_pm1_monotone(form: &MonotonePropertyForm, part: &Pm1Partition) -> Result<Pm1Result> {
    if part.universe_size() != form.universe {
        return Err(Error::UniverseMismatch {
            left: part.universe_size(),
            right: form.universe,
        });
    }
    for g in &form.generators {
        if g.is_subset(part.alice()) {
            return Ok(Pm1Result {
                winner: Player::Alice,
                strategy: StrategyHandle {
                    backend: BackendKind::MonotoneProperty,
                    payload: StrategyPayload::OutcomeSubset(g.clone()),
                },
                queries_used: 1,
            });
        }
    }
    // no generator inside Alice's set, so Bob's set is a transversal
    let mut witness = part.bob().clone();
    for omega in 0..form.universe {
        if !witness.contains(omega) {
            continue;
        }
        let mut candidate = witness.clone();
        candidate.remove(omega);
        if form.generators.iter().all(|g| g.intersects(&candidate)) {
            witness = candidate;
        }
    }
    Ok(Pm1Result {
        winner: Player::Bob,
        strategy: StrategyHandle {
            backend: BackendKind::MonotoneProperty,
            payload: StrategyPayload::OutcomeSubset(witness),
        },
        queries_used: 1,
    })
}

/// All inclusion-minimal transversals of the generator family, in ascending
/// bitmask order. Brute force; test and cross-validation use only.
pub fn minimal_transversals(form: &MonotonePropertyForm) -> Vec<OutcomeSet> {
    let p = form.universe_size();
    assert!(p <= 20, "transversal enumeration is exponential");
    let mut out = Vec::new();
    for mask in 0u64..(1 << p) {
        let set = OutcomeSet::from_mask(p, mask);
        if !form.generators().iter().all(|g| g.intersects(&set)) {
            continue;
        }
        let minimal = set.iter().all(|omega| {
            let mut smaller = set.clone();
            smaller.remove(omega);
            !form.generators().iter().all(|g| g.intersects(&smaller))
        });
        if minimal {
            out.push(set);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(p: usize, indices: &[usize]) -> OutcomeSet {
        OutcomeSet::from_indices(p, indices)
    }

    #[test]
    fn direct_containment_wins_for_alice() {
        let form = MonotonePropertyForm::new(1, vec![set(1, &[0])]).unwrap();
        let part = Pm1Partition::from_alice(set(1, &[0]));
        let res = solve_pm1_monotone(&form, &part).unwrap();
        assert_eq!(res.winner, Player::Alice);
        assert_eq!(
            res.strategy.payload,
            StrategyPayload::OutcomeSubset(set(1, &[0]))
        );
    }

    #[test]
    fn bob_witness_is_a_minimal_transversal() {
        let form =
            MonotonePropertyForm::new(3, vec![set(3, &[0, 1]), set(3, &[0, 2])]).unwrap();
        let part = Pm1Partition::from_alice(set(3, &[1, 2]));
        let res = solve_pm1_monotone(&form, &part).unwrap();
        assert_eq!(res.winner, Player::Bob);
        // {w1} alone hits both generators
        assert_eq!(
            res.strategy.payload,
            StrategyPayload::OutcomeSubset(set(3, &[0]))
        );
        assert!(minimal_transversals(&form).contains(&set(3, &[0])));
    }

    #[test]
    fn full_generator_with_full_set() {
        let form = MonotonePropertyForm::new(4, vec![OutcomeSet::full(4)]).unwrap();
        let part = Pm1Partition::from_alice(OutcomeSet::full(4));
        assert_eq!(
            solve_pm1_monotone(&form, &part).unwrap().winner,
            Player::Alice
        );
    }

    #[test]
    fn construction_rejects_bad_generators() {
        assert!(MonotonePropertyForm::new(3, vec![]).is_err());
        assert!(MonotonePropertyForm::new(3, vec![OutcomeSet::empty(3)]).is_err());
        assert!(
            MonotonePropertyForm::new(3, vec![set(3, &[0]), set(3, &[0, 1])]).is_err(),
            "nested generators must be rejected"
        );
        assert!(MonotonePropertyForm::new(3, vec![set(3, &[0]), set(3, &[0])]).is_err());
    }
}
