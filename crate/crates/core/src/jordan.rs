use crate::error::{Error, Result};
use crate::explicit::ExplicitGameForm;
use crate::oracle::{BackendKind, Player, Pm1Result, StrategyHandle, StrategyPayload};
use crate::outcomes::{OutcomeSet, Pm1Partition};

/// Default cap on the number of areas for connector enumeration.
pub const DEFAULT_JORDAN_EXPANSION_LIMIT: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    North,
    East,
    South,
    West,
}

/// A partition of the square into areas: Alice's strategies are sets of
/// areas connecting the West and East sides, Bob's connect North and South.
///
/// Only the combinatorial data is ingested (adjacency and side contacts);
/// the geometric degree-3 border condition cannot be checked from it, so
/// the solver additionally enforces the exactly-one-winner consequence at
/// runtime and reports `InvalidMap` on violation.
#[derive(Debug, Clone)]
pub struct JordanMap {
    universe: usize,
    neighbors: Vec<OutcomeSet>,
    side_contacts: [OutcomeSet; 4],
}

impl JordanMap {
    pub fn new(
        universe: usize,
        adjacency: &[(usize, usize)],
        side_contacts: [OutcomeSet; 4],
    ) -> Result<Self> {
        if universe == 0 {
            return Err(Error::InvalidInstance("map has no areas".into()));
        }
        let mut neighbors = vec![OutcomeSet::empty(universe); universe];
        for &(a, b) in adjacency {
            if a >= universe || b >= universe {
                return Err(Error::InvalidInstance(format!(
                    "adjacency ({a},{b}) references a missing area"
                )));
            }
            if a == b {
                return Err(Error::InvalidInstance(
                    "adjacency must be irreflexive".into(),
                ));
            }
            neighbors[a].insert(b);
            neighbors[b].insert(a);
        }
        for (i, side) in side_contacts.iter().enumerate() {
            if side.universe_size() != universe {
                return Err(Error::UniverseMismatch {
                    left: side.universe_size(),
                    right: universe,
                });
            }
            if side.is_empty() {
                return Err(Error::InvalidInstance(format!(
                    "side {i} has no contact areas"
                )));
            }
        }
        Ok(JordanMap {
            universe,
            neighbors,
            side_contacts,
        })
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn contacts(&self, side: Side) -> &OutcomeSet {
        &self.side_contacts[side as usize]
    }

    pub fn neighbors(&self, area: usize) -> &OutcomeSet {
        &self.neighbors[area]
    }

    /// Whether `areas` connects the two sides of the pair: breadth-first
    /// search from the first side's contacts, all inside `areas`.
    pub fn connects(&self, areas: &OutcomeSet, pair: (Side, Side)) -> bool {
        !self.reach(areas, pair.0).intersection(self.contacts(pair.1)).is_empty()
    }

    fn reach(&self, areas: &OutcomeSet, from: Side) -> OutcomeSet {
        let mut seen = OutcomeSet::empty(self.universe);
        let mut queue: Vec<usize> = Vec::new();
        for a in self.contacts(from).intersection(areas).iter() {
            seen.insert(a);
            queue.push(a);
        }
        while let Some(a) = queue.pop() {
            for b in self.neighbors[a].intersection(areas).iter() {
                if !seen.contains(b) {
                    seen.insert(b);
                    queue.push(b);
                }
            }
        }
        seen
    }

    /// All inclusion-minimal connectors of a side pair, in ascending bitmask
    /// order. Exponential enumeration, guarded by the expansion limit.
    pub fn minimal_connectors(&self, pair: (Side, Side), limit: u64) -> Result<Vec<OutcomeSet>> {
        if self.universe as u128 > limit as u128 || self.universe >= 64 {
            return Err(Error::SizeLimitExceeded {
                required: self.universe as u128,
                limit: limit as u128,
            });
        }
        let mut out = Vec::new();
        for mask in 1u64..(1 << self.universe) {
            let set = OutcomeSet::from_mask(self.universe, mask);
            if !self.connects(&set, pair) {
                continue;
            }
            let minimal = set.iter().all(|a| {
                let mut smaller = set.clone();
                smaller.remove(a);
                !self.connects(&smaller, pair)
            });
            if minimal {
                out.push(set);
            }
        }
        Ok(out)
    }
}

/// Shrinks a connecting set to an inclusion-minimal connector by deleting
/// areas in ascending canonical order whenever connectivity survives.
pub fn minimize_connector(
    map: &JordanMap,
    areas: &OutcomeSet,
    pair: (Side, Side),
) -> OutcomeSet {
    debug_assert!(map.connects(areas, pair));
    let mut current = areas.clone();
    for a in 0..map.universe_size() {
        if !current.contains(a) {
            continue;
        }
        let mut candidate = current.clone();
        candidate.remove(a);
        if map.connects(&candidate, pair) {
            current = candidate;
        }
    }
    current
}

/// Solves a ±1 game on a Jordan map: search North-to-South inside Bob's
/// areas first, then West-to-East inside Alice's. On a valid map exactly one
/// search succeeds; any other combination reports the map invalid.
pub fn solve_pm1_jordan(map: &JordanMap, part: &Pm1Partition) -> Result<Pm1Result> {
    if part.universe_size() != map.universe_size() {
        return Err(Error::UniverseMismatch {
            left: part.universe_size(),
            right: map.universe_size(),
        });
    }
    let bob_reach = map.reach(part.bob(), Side::North);
    let bob_wins = !bob_reach.intersection(map.contacts(Side::South)).is_empty();
    let alice_reach = map.reach(part.alice(), Side::West);
    let alice_wins = !alice_reach.intersection(map.contacts(Side::East)).is_empty();
    match (bob_wins, alice_wins) {
        (true, false) => Ok(Pm1Result {
            winner: Player::Bob,
            strategy: StrategyHandle {
                backend: BackendKind::Jordan,
                payload: StrategyPayload::OutcomeSubset(minimize_connector(
                    map,
                    &bob_reach,
                    (Side::North, Side::South),
                )),
            },
            queries_used: 1,
        }),
        (false, true) => Ok(Pm1Result {
            winner: Player::Alice,
            strategy: StrategyHandle {
                backend: BackendKind::Jordan,
                payload: StrategyPayload::OutcomeSubset(minimize_connector(
                    map,
                    &alice_reach,
                    (Side::West, Side::East),
                )),
            },
            queries_used: 1,
        }),
        (false, false) => Err(Error::InvalidMap(
            "neither side connects: the adjacency data cannot come from a \
             degree-3 planar partition of the square"
                .into(),
        )),
        (true, true) => Err(Error::InvalidMap(
            "both sides connect simultaneously: the adjacency data cannot \
             come from a degree-3 planar partition of the square"
                .into(),
        )),
    }
}

/// Expands the map to an explicit form: rows are the minimal West-East
/// connectors, columns the minimal North-South connectors, and each cell
/// selects the canonical-minimum area of the row/column intersection (any
/// selection from a tight correspondence is tight; a fixed rule keeps the
/// expansion reproducible).
pub fn expand_explicit_jordan(map: &JordanMap, limit: u64) -> Result<ExplicitGameForm> {
    let correspondence = expand_correspondence(map, limit)?;
    let rows = correspondence.cells.len();
    let cols = if rows > 0 {
        correspondence.cells[0].len()
    } else {
        0
    };
    let mut cells = Vec::with_capacity(rows * cols);
    for row in &correspondence.cells {
        for cell in row {
            cells.push(cell.min_index().expect("connectors always intersect"));
        }
    }
    ExplicitGameForm::with_universe(rows, cols, cells, map.universe_size())
}

/// The full game correspondence of a map: every cell is the set of areas
/// shared by the row and column connectors.
#[derive(Debug, Clone)]
pub struct JordanCorrespondence {
    pub row_connectors: Vec<OutcomeSet>,
    pub col_connectors: Vec<OutcomeSet>,
    pub cells: Vec<Vec<OutcomeSet>>,
}

pub fn expand_correspondence(map: &JordanMap, limit: u64) -> Result<JordanCorrespondence> {
    let row_connectors = map.minimal_connectors((Side::West, Side::East), limit)?;
    let col_connectors = map.minimal_connectors((Side::North, Side::South), limit)?;
    let mut cells = Vec::with_capacity(row_connectors.len());
    for x in &row_connectors {
        let mut row = Vec::with_capacity(col_connectors.len());
        for y in &col_connectors {
            let meet = x.intersection(y);
            if meet.is_empty() {
                return Err(Error::InvalidMap(
                    "two minimal connectors are disjoint; the map is not a \
                     degree-3 planar partition"
                        .into(),
                ));
            }
            row.push(meet);
        }
        cells.push(row);
    }
    Ok(JordanCorrespondence {
        row_connectors,
        col_connectors,
        cells,
    })
}

/// The five-area map of the worked figure: four quadrants around a central
/// diamond.
pub mod corpus {
    use super::*;

    pub fn figure3() -> JordanMap {
        // w1 NW, w2 NE, w3 SW, w4 SE, w5 center
        JordanMap::new(
            5,
            &[(0, 1), (0, 2), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)],
            [
                OutcomeSet::from_indices(5, &[0, 1]), // N
                OutcomeSet::from_indices(5, &[1, 3]), // E
                OutcomeSet::from_indices(5, &[2, 3]), // S
                OutcomeSet::from_indices(5, &[0, 2]), // W
            ],
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explicit::{is_tight, solve_pm1_explicit, DEFAULT_TIGHT_LIMIT};

    fn set(p: usize, ids: &[usize]) -> OutcomeSet {
        OutcomeSet::from_indices(p, ids)
    }

    #[test]
    fn figure3_bob_loses_center_only() {
        let map = corpus::figure3();
        let part = Pm1Partition::from_alice(set(5, &[0, 1, 2, 3]));
        let res = solve_pm1_jordan(&map, &part).unwrap();
        assert_eq!(res.winner, Player::Alice);
        // ascending deletion from the reached quadrants leaves the southern
        // pair {w3,w4}, one of the map's four minimal West-East connectors
        assert_eq!(
            res.strategy.payload,
            StrategyPayload::OutcomeSubset(set(5, &[2, 3]))
        );
    }

    #[test]
    fn figure3_bob_wins_through_center() {
        let map = corpus::figure3();
        let part = Pm1Partition::from_alice(set(5, &[1, 3]));
        let res = solve_pm1_jordan(&map, &part).unwrap();
        assert_eq!(res.winner, Player::Bob);
        // the reach {w1,w3,w5} minimizes further: w1 and w3 share the left
        // border, so the center drops out
        assert_eq!(
            res.strategy.payload,
            StrategyPayload::OutcomeSubset(set(5, &[0, 2]))
        );
        assert!(map.connects(&set(5, &[0, 2]), (Side::North, Side::South)));
    }

    #[test]
    fn broken_degree_four_map_is_detected() {
        // four quadrants meeting in a central degree-4 crossing
        let map = JordanMap::new(
            4,
            &[(0, 1), (2, 3), (0, 2), (1, 3)],
            [
                set(4, &[0, 1]), // N
                set(4, &[1, 3]), // E
                set(4, &[2, 3]), // S
                set(4, &[0, 2]), // W
            ],
        )
        .unwrap();
        let part = Pm1Partition::from_alice(set(4, &[1, 2]));
        assert!(matches!(
            solve_pm1_jordan(&map, &part),
            Err(Error::InvalidMap(_))
        ));
    }

    #[test]
    fn minimize_connector_examples() {
        let map = corpus::figure3();
        let path = set(5, &[0, 1]);
        assert_eq!(
            minimize_connector(&map, &path, (Side::West, Side::East)),
            path
        );
        let with_center = set(5, &[0, 1, 4]);
        assert_eq!(
            minimize_connector(&map, &with_center, (Side::West, Side::East)),
            set(5, &[0, 1])
        );
        let full = OutcomeSet::full(5);
        let minimized = minimize_connector(&map, &full, (Side::West, Side::East));
        assert!(map.connects(&minimized, (Side::West, Side::East)));
        assert!(minimized.iter().all(|a| {
            let mut s = minimized.clone();
            s.remove(a);
            !map.connects(&s, (Side::West, Side::East))
        }));
    }

    #[test]
    fn figure3_correspondence_matches_printed_table() {
        let map = corpus::figure3();
        let corr = expand_correspondence(&map, DEFAULT_JORDAN_EXPANSION_LIMIT).unwrap();
        // printed rows/columns of the figure, as sets
        let rows = [
            set(5, &[0, 1]),
            set(5, &[2, 3]),
            set(5, &[0, 3, 4]),
            set(5, &[1, 2, 4]),
        ];
        let cols = [
            set(5, &[0, 2]),
            set(5, &[1, 3]),
            set(5, &[0, 3, 4]),
            set(5, &[1, 2, 4]),
        ];
        assert_eq!(corr.row_connectors.len(), 4);
        assert_eq!(corr.col_connectors.len(), 4);
        for r in &rows {
            assert!(corr.row_connectors.contains(r), "missing row {r:?}");
        }
        for c in &cols {
            assert!(corr.col_connectors.contains(c), "missing column {c:?}");
        }
        // the table's cells are exactly the pairwise intersections; check
        // the two printed multi-valued cells
        let r3 = corr.row_connectors.iter().position(|s| *s == rows[2]).unwrap();
        let c3 = corr.col_connectors.iter().position(|s| *s == cols[2]).unwrap();
        assert_eq!(corr.cells[r3][c3], set(5, &[0, 3, 4]));
        let r4 = corr.row_connectors.iter().position(|s| *s == rows[3]).unwrap();
        let c4 = corr.col_connectors.iter().position(|s| *s == cols[3]).unwrap();
        assert_eq!(corr.cells[r4][c4], set(5, &[1, 2, 4]));
        assert_eq!(corr.cells[r3][c4], set(5, &[4]));
        assert_eq!(corr.cells[r4][c3], set(5, &[4]));
    }

    #[test]
    fn every_selection_of_figure3_is_tight() {
        let map = corpus::figure3();
        let corr = expand_correspondence(&map, DEFAULT_JORDAN_EXPANSION_LIMIT).unwrap();
        let rows = corr.cells.len();
        let cols = corr.cells[0].len();
        let options: Vec<Vec<usize>> = corr
            .cells
            .iter()
            .flat_map(|row| row.iter().map(|cell| cell.iter().collect::<Vec<_>>()))
            .collect();
        let mut selector = vec![0usize; options.len()];
        loop {
            let cells: Vec<usize> = options
                .iter()
                .zip(&selector)
                .map(|(opts, &i)| opts[i])
                .collect();
            let form =
                ExplicitGameForm::with_universe(rows, cols, cells, map.universe_size()).unwrap();
            assert!(is_tight(&form, DEFAULT_TIGHT_LIMIT).unwrap());
            let mut k = options.len();
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                selector[k] += 1;
                if selector[k] < options[k].len() {
                    break;
                }
                selector[k] = 0;
            }
        }
    }

    #[test]
    fn connectors_pairwise_intersect_and_exactly_one_winner() {
        let map = corpus::figure3();
        let corr = expand_correspondence(&map, DEFAULT_JORDAN_EXPANSION_LIMIT).unwrap();
        for x in &corr.row_connectors {
            for y in &corr.col_connectors {
                assert!(x.intersects(y));
            }
        }
        let p = map.universe_size();
        let form = expand_explicit_jordan(&map, DEFAULT_JORDAN_EXPANSION_LIMIT).unwrap();
        for mask in 0..(1u64 << p) {
            let part = Pm1Partition::from_alice(OutcomeSet::from_mask(p, mask));
            let res = solve_pm1_jordan(&map, &part).unwrap();
            let exp = solve_pm1_explicit(&form, &part).unwrap();
            assert_eq!(res.winner, exp.winner, "mask {mask}");
            // witness soundness: the winner's connector avoids the loser's areas
            let StrategyPayload::OutcomeSubset(conn) = &res.strategy.payload else {
                panic!("jordan witness expected")
            };
            match res.winner {
                Player::Alice => assert!(conn.is_subset(part.alice())),
                Player::Bob => assert!(conn.is_subset(part.bob())),
            }
        }
    }

    #[test]
    fn degenerate_maps() {
        // one area touching all four sides
        let unit = JordanMap::new(
            1,
            &[],
            [
                set(1, &[0]),
                set(1, &[0]),
                set(1, &[0]),
                set(1, &[0]),
            ],
        )
        .unwrap();
        let form = expand_explicit_jordan(&unit, DEFAULT_JORDAN_EXPANSION_LIMIT).unwrap();
        assert_eq!((form.rows(), form.cols()), (1, 1));

        // vertical strip of two areas: both touch W and E, top touches N,
        // bottom touches S
        let strip = JordanMap::new(
            2,
            &[(0, 1)],
            [
                set(2, &[0]),    // N
                set(2, &[0, 1]), // E
                set(2, &[1]),    // S
                set(2, &[0, 1]), // W
            ],
        )
        .unwrap();
        let corr = expand_correspondence(&strip, DEFAULT_JORDAN_EXPANSION_LIMIT).unwrap();
        assert_eq!(corr.row_connectors, vec![set(2, &[0]), set(2, &[1])]);
        assert_eq!(corr.col_connectors, vec![set(2, &[0, 1])]);
    }
}
