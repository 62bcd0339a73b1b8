//! Uniform expansion of any backend to its explicit normal form, plus
//! witness-to-expansion index mapping for cross-validation.

use crate::bargaining::{expand_explicit_mb, MonotoneMap, DEFAULT_MB_EXPANSION_LIMIT};
use crate::error::{Error, Result};
use crate::explicit::ExplicitGameForm;
use crate::jordan::{expand_explicit_jordan, Side, DEFAULT_JORDAN_EXPANSION_LIMIT};
use crate::monotone::minimal_transversals;
use crate::oracle::{Backend, OracleInstance, Player, StrategyHandle, StrategyPayload};
use crate::positional::DEFAULT_POSITIONAL_EXPANSION_LIMIT;
use crate::veto::{expand_explicit_veto, DEFAULT_VETO_EXPANSION_LIMIT};

/// Expands the oracle to an explicit form over the same outcome universe.
///
/// `limit` overrides the backend's default expansion limit: a per-player
/// strategy count for positional, bargaining and veto backends, an area or
/// outcome count for Jordan and monotone-property backends. The explicit
/// backend is returned as is.
pub fn expand_to_explicit(oracle: &OracleInstance, limit: Option<u64>) -> Result<ExplicitGameForm> {
    match oracle.backend() {
        Backend::Explicit(form) => Ok(form.clone()),
        Backend::MonotoneProperty(form) => {
            let p = form.universe_size() as u64;
            let cap = limit.unwrap_or(20);
            if p > cap || p > 20 {
                return Err(Error::SizeLimitExceeded {
                    required: p as u128,
                    limit: cap as u128,
                });
            }
            // rows are the generators, columns the minimal transversals,
            // each cell selects the canonical-minimum common outcome
            let rows = form.generators();
            let cols = minimal_transversals(form);
            let mut cells = Vec::with_capacity(rows.len() * cols.len());
            for x in rows {
                for y in &cols {
                    let meet = x.intersection(y);
                    cells.push(meet.min_index().ok_or_else(|| {
                        Error::Internal("generator and transversal are disjoint".into())
                    })?);
                }
            }
            ExplicitGameForm::with_universe(rows.len(), cols.len(), cells, form.universe_size())
        }
        Backend::Positional(s) => {
            s.expand_explicit(limit.unwrap_or(DEFAULT_POSITIONAL_EXPANSION_LIMIT))
        }
        Backend::Jordan(m) => expand_explicit_jordan(m, limit.unwrap_or(DEFAULT_JORDAN_EXPANSION_LIMIT)),
        Backend::Bargaining(s) => expand_explicit_mb(s, limit.unwrap_or(DEFAULT_MB_EXPANSION_LIMIT)),
        Backend::Veto(s) => expand_explicit_veto(s, limit.unwrap_or(DEFAULT_VETO_EXPANSION_LIMIT)),
    }
}

/// Index of an Alice witness among the expansion's rows.
pub fn expansion_row_index(oracle: &OracleInstance, handle: &StrategyHandle) -> Result<usize> {
    strategy_index(oracle, handle, Player::Alice)
}

/// Index of a Bob witness among the expansion's columns.
pub fn expansion_col_index(oracle: &OracleInstance, handle: &StrategyHandle) -> Result<usize> {
    strategy_index(oracle, handle, Player::Bob)
}

fn missing() -> Error {
    Error::InvalidInstance("witness does not appear in the expansion's strategy list".into())
}

fn strategy_index(
    oracle: &OracleInstance,
    handle: &StrategyHandle,
    player: Player,
) -> Result<usize> {
    match (oracle.backend(), &handle.payload) {
        (Backend::Explicit(_), StrategyPayload::Row(r)) if player == Player::Alice => Ok(*r),
        (Backend::Explicit(_), StrategyPayload::Col(c)) if player == Player::Bob => Ok(*c),
        (Backend::MonotoneProperty(form), StrategyPayload::OutcomeSubset(set)) => {
            let list = match player {
                Player::Alice => form.generators().to_vec(),
                Player::Bob => minimal_transversals(form),
            };
            list.iter().position(|s| s == set).ok_or_else(missing)
        }
        (Backend::Positional(s), StrategyPayload::Moves(moves)) => {
            let strategy = s.strategy_from_moves(player, moves)?;
            s.enumerate_strategies(player)
                .iter()
                .position(|x| *x == strategy)
                .ok_or_else(missing)
        }
        (Backend::Jordan(m), StrategyPayload::OutcomeSubset(set)) => {
            let pair = match player {
                Player::Alice => (Side::West, Side::East),
                Player::Bob => (Side::North, Side::South),
            };
            m.minimal_connectors(pair, DEFAULT_JORDAN_EXPANSION_LIMIT)?
                .iter()
                .position(|s| s == set)
                .ok_or_else(missing)
        }
        (Backend::Bargaining(s), StrategyPayload::Image(image)) => {
            let map = MonotoneMap {
                owner: player,
                image: image.clone(),
            };
            s.enumerate_maps(player)
                .iter()
                .position(|m| *m == map)
                .ok_or_else(missing)
        }
        (Backend::Veto(s), StrategyPayload::Cards(cards)) => s
            .enumerate_distributions(player)
            .iter()
            .position(|d| d == cards)
            .ok_or_else(missing),
        _ => Err(Error::InvalidInstance(
            "strategy payload does not belong to this backend".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explicit::{is_nash, solve_pm1_explicit};
    use crate::lex::lexsafe_ne;
    use crate::outcomes::{OutcomeSet, Pm1Partition};
    use crate::prefs::Preference;
    use crate::veto::VetoScheme;

    #[test]
    fn witnesses_resolve_to_expansion_indices() {
        let oracle = OracleInstance::veto(VetoScheme::new(1, 1, vec![1, 1, 1]).unwrap());
        let form = expand_to_explicit(&oracle, None).unwrap();
        let part = Pm1Partition::from_alice(OutcomeSet::from_indices(3, &[0, 1]));
        let res = oracle.solve_pm1(&part).unwrap();
        let row = expansion_row_index(&oracle, &res.strategy).unwrap();
        assert!(form.row_support(row).is_subset(part.alice()));
        // the explicit scan agrees
        assert_eq!(
            solve_pm1_explicit(&form, &part).unwrap().winner,
            res.winner
        );
    }

    #[test]
    fn lexsafe_ne_is_nash_in_the_expansion() {
        let oracle = OracleInstance::veto(VetoScheme::new(2, 1, vec![2, 1, 1]).unwrap());
        let form = expand_to_explicit(&oracle, None).unwrap();
        let pref_a = Preference::new(vec![2, 1, 0], 3).unwrap();
        let pref_b = Preference::ascending(3);
        let ne = lexsafe_ne(&oracle, &pref_a, &pref_b, Player::Alice, false).unwrap();
        let row = expansion_row_index(&oracle, &ne.x_strategy).unwrap();
        let col = expansion_col_index(&oracle, &ne.y_strategy).unwrap();
        assert!(is_nash(&form, &pref_a, &pref_b, row, col));
        assert_eq!(form.cell(row, col), ne.ne_outcome.0);
    }
}
