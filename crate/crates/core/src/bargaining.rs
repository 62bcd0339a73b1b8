use crate::error::{Error, Result};
use crate::explicit::ExplicitGameForm;
use crate::oracle::{BackendKind, Player, Pm1Result, StrategyHandle, StrategyPayload};
use crate::outcomes::{OutcomeId, Pm1Partition};

/// Default cap on the per-player strategy count for expansion,
/// C(14, 7) = 3432 rounded down to the binomial below it.
pub const DEFAULT_MB_EXPANSION_LIMIT: u64 = 3003;

/// A monotone bargaining scheme: Alice owns `m` ordered items, Bob owns `n`.
/// Outcomes are the `m * n` exchange deals `(a_i, b_j)`, indexed row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MbScheme {
    m: usize,
    n: usize,
}

/// A strategy: a monotone non-decreasing map from the owner's items to the
/// opponent's. Images are stored 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneMap {
    pub owner: Player,
    pub image: Vec<usize>,
}

impl MbScheme {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidInstance(
                "both item counts must be positive".into(),
            ));
        }
        Ok(MbScheme { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn outcome_count(&self) -> usize {
        self.m * self.n
    }

    /// Index of the deal `(a_i, b_j)`, both 1-based.
    pub fn deal_index(&self, i: usize, j: usize) -> usize {
        debug_assert!(1 <= i && i <= self.m && 1 <= j && j <= self.n);
        (i - 1) * self.n + (j - 1)
    }

    pub fn deal_pair(&self, outcome: usize) -> (usize, usize) {
        (outcome / self.n + 1, outcome % self.n + 1)
    }

    pub fn outcome_labels(&self) -> Vec<String> {
        (1..=self.m)
            .flat_map(|i| (1..=self.n).map(move |j| format!("a{i}b{j}")))
            .collect()
    }

    pub fn validate_map(&self, map: &MonotoneMap) -> Result<()> {
        let (len, bound) = match map.owner {
            Player::Alice => (self.m, self.n),
            Player::Bob => (self.n, self.m),
        };
        if map.image.len() != len {
            return Err(Error::InvalidInstance(format!(
                "map must assign all {len} items"
            )));
        }
        for w in map.image.windows(2) {
            if w[1] < w[0] {
                return Err(Error::InvalidInstance(
                    "map must be monotone non-decreasing".into(),
                ));
            }
        }
        if map.image.iter().any(|&v| v < 1 || v > bound) {
            return Err(Error::InvalidInstance("map image out of range".into()));
        }
        Ok(())
    }

    /// All monotone maps of a player in lexicographic image order.
    pub fn enumerate_maps(&self, owner: Player) -> Vec<MonotoneMap> {
        let (len, bound) = match owner {
            Player::Alice => (self.m, self.n),
            Player::Bob => (self.n, self.m),
        };
        let mut image = vec![1usize; len];
        let mut all = Vec::new();
        loop {
            all.push(MonotoneMap {
                owner,
                image: image.clone(),
            });
            let mut k = len;
            loop {
                if k == 0 {
                    return all;
                }
                k -= 1;
                if image[k] < bound {
                    let v = image[k] + 1;
                    for slot in image.iter_mut().skip(k) {
                        *slot = v;
                    }
                    break;
                }
            }
        }
    }
}

fn binomial(n: u64, k: u64) -> Result<u64> {
    let k = k.min(n - k.min(n));
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > (1u128 << 63) {
            return Err(Error::SizeLimitExceeded {
                required: acc,
                limit: 1u128 << 63,
            });
        }
    }
    Ok(acc as u64)
}

/// Strategy and outcome counts: `|X| = C(m+n-1, m)`, `|Y| = C(m+n-1, n)`,
/// `|Ω| = m n`. Errors out instead of overflowing past 2^63.
pub fn count_strategies(scheme: &MbScheme) -> Result<(u64, u64, u64)> {
    let m = scheme.m as u64;
    let n = scheme.n as u64;
    Ok((
        binomial(m + n - 1, m)?,
        binomial(m + n - 1, n)?,
        m.checked_mul(n).ok_or(Error::SizeLimitExceeded {
            required: u128::MAX,
            limit: 1u128 << 63,
        })?,
    ))
}

/// The deal reached by walking the bipartite digraph of the two maps from
/// Alice's first item: the walk closes into a dicycle, which monotonicity
/// forces to have length two. A longer cycle means a map slipped past
/// validation.
pub fn deal(scheme: &MbScheme, x: &MonotoneMap, y: &MonotoneMap) -> Result<OutcomeId> {
    scheme.validate_map(x)?;
    scheme.validate_map(y)?;
    // nodes: a_i -> i-1, b_j -> m + j - 1
    let m = scheme.m;
    let total = m + scheme.n;
    let mut first_seen = vec![usize::MAX; total];
    let mut trail = Vec::new();
    let mut node = 0usize;
    loop {
        if first_seen[node] != usize::MAX {
            let cycle_len = trail.len() - first_seen[node];
            if cycle_len != 2 {
                return Err(Error::Internal(format!(
                    "walk closed a {cycle_len}-cycle; monotone maps only \
                     produce 2-cycles"
                )));
            }
            let a_node = if node < m { node } else { trail[trail.len() - 1] };
            let b_node = if node < m { trail[trail.len() - 1] } else { node };
            return Ok(OutcomeId(
                scheme.deal_index(a_node + 1, b_node - m + 1),
            ));
        }
        first_seen[node] = trail.len();
        trail.push(node);
        node = if node < m {
            m + x.image[node] - 1
        } else {
            y.image[node - m] - 1
        };
    }
}

/// Solves a ±1 bargaining game by the one-pointer greedy sweep.
///
/// Scan Alice's items in order keeping a pointer into Bob's items; for each
/// item pick the smallest partner at or past the pointer giving a deal on
/// Alice's side. A completed sweep is her winning map. A stall at item `i`
/// proves every pair at or past the pointer is Bob's; his winning map sends
/// the items of each pointer interval back to the item that moved the
/// pointer there, and everything at or past the stall pointer to `a_i`.
pub fn solve_pm1_mb(scheme: &MbScheme, part: &Pm1Partition) -> Result<Pm1Result> {
    if part.universe_size() != scheme.outcome_count() {
        return Err(Error::UniverseMismatch {
            left: part.universe_size(),
            right: scheme.outcome_count(),
        });
    }
    let m = scheme.m;
    let n = scheme.n;
    let mut image: Vec<usize> = Vec::with_capacity(m);
    let mut pointer = 1usize;
    for i in 1..=m {
        match (pointer..=n).find(|&j| part.alice().contains(scheme.deal_index(i, j))) {
            Some(j) => {
                image.push(j);
                pointer = j;
            }
            None => {
                // stall at item i: build Bob's winning map
                let mut bob = Vec::with_capacity(n);
                for j in 1..=n {
                    let owner = (0..image.len())
                        .find(|&k| image[k] > j)
                        .map(|k| k + 1)
                        .unwrap_or(i);
                    bob.push(owner);
                }
                return Ok(Pm1Result {
                    winner: Player::Bob,
                    strategy: StrategyHandle {
                        backend: BackendKind::Bargaining,
                        payload: StrategyPayload::Image(bob),
                    },
                    queries_used: 1,
                });
            }
        }
    }
    Ok(Pm1Result {
        winner: Player::Alice,
        strategy: StrategyHandle {
            backend: BackendKind::Bargaining,
            payload: StrategyPayload::Image(image),
        },
        queries_used: 1,
    })
}

/// The paper's first greedy variant, alternating between the two item
/// scales with strictly advancing pointers. Kept as an independent route:
/// it must agree with the primary sweep on the winner (witnesses may
/// differ).
pub fn solve_pm1_mb_alternating(scheme: &MbScheme, part: &Pm1Partition) -> Result<Pm1Result> {
    if part.universe_size() != scheme.outcome_count() {
        return Err(Error::UniverseMismatch {
            left: part.universe_size(),
            right: scheme.outcome_count(),
        });
    }
    let m = scheme.m;
    let n = scheme.n;
    let in_a = |i: usize, j: usize| part.alice().contains(scheme.deal_index(i, j));
    // a_marks[k] = a^(k+1), b_marks[k] = b^(k+1)
    let mut a_marks: Vec<usize> = vec![1];
    let mut b_marks: Vec<usize> = Vec::new();
    loop {
        let a_cur = *a_marks.last().unwrap();
        let b_prev = b_marks.last().copied().unwrap_or(0);
        // Bob check: all deals of a_cur past b_prev on his side?
        match (b_prev + 1..=n).find(|&j| in_a(a_cur, j)) {
            None => {
                let mut image = Vec::with_capacity(n);
                for j in 1..=n {
                    let k = (0..b_marks.len()).find(|&k| b_marks[k] > j);
                    let owner = match k {
                        Some(k) => a_marks[k],
                        None => a_cur,
                    };
                    image.push(owner);
                }
                return Ok(Pm1Result {
                    winner: Player::Bob,
                    strategy: StrategyHandle {
                        backend: BackendKind::Bargaining,
                        payload: StrategyPayload::Image(image),
                    },
                    queries_used: 1,
                });
            }
            Some(b_cur) => {
                b_marks.push(b_cur);
                // Alice check: all items past a_cur accept b_cur?
                match (a_cur + 1..=m).find(|&i| !in_a(i, b_cur)) {
                    None => {
                        let mut image = Vec::with_capacity(m);
                        for i in 1..=m {
                            let k = (0..a_marks.len()).rfind(|&k| a_marks[k] <= i).unwrap();
                            image.push(b_marks[k]);
                        }
                        return Ok(Pm1Result {
                            winner: Player::Alice,
                            strategy: StrategyHandle {
                                backend: BackendKind::Bargaining,
                                payload: StrategyPayload::Image(image),
                            },
                            queries_used: 1,
                        });
                    }
                    Some(a_next) => a_marks.push(a_next),
                }
            }
        }
    }
}

/// Rows and columns enumerate the two players' monotone maps in
/// lexicographic image order; each cell is the deal reached by the walk.
pub fn expand_explicit_mb(scheme: &MbScheme, limit: u64) -> Result<ExplicitGameForm> {
    let (x_count, y_count, _) = count_strategies(scheme)?;
    if x_count > limit || y_count > limit {
        return Err(Error::SizeLimitExceeded {
            required: x_count.max(y_count) as u128,
            limit: limit as u128,
        });
    }
    let xs = scheme.enumerate_maps(Player::Alice);
    let ys = scheme.enumerate_maps(Player::Bob);
    let mut cells = Vec::with_capacity(xs.len() * ys.len());
    for x in &xs {
        for y in &ys {
            cells.push(deal(scheme, x, y)?.0);
        }
    }
    ExplicitGameForm::with_universe(xs.len(), ys.len(), cells, scheme.outcome_count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explicit::{is_tight, solve_pm1_explicit, DEFAULT_TIGHT_LIMIT};
    use crate::outcomes::OutcomeSet;

    fn amap(image: &[usize]) -> MonotoneMap {
        MonotoneMap {
            owner: Player::Alice,
            image: image.to_vec(),
        }
    }

    fn bmap(image: &[usize]) -> MonotoneMap {
        MonotoneMap {
            owner: Player::Bob,
            image: image.to_vec(),
        }
    }

    #[test]
    fn strategy_counts() {
        let one = MbScheme::new(1, 1).unwrap();
        assert_eq!(count_strategies(&one).unwrap(), (1, 1, 1));
        let two = MbScheme::new(2, 2).unwrap();
        assert_eq!(count_strategies(&two).unwrap(), (3, 3, 4));
        let three = MbScheme::new(3, 3).unwrap();
        assert_eq!(count_strategies(&three).unwrap(), (10, 10, 9));
    }

    #[test]
    fn counts_match_enumeration_up_to_ten_items() {
        for m in 1..=9 {
            for n in 1..=(10 - m) {
                let scheme = MbScheme::new(m, n).unwrap();
                let (x, y, o) = count_strategies(&scheme).unwrap();
                assert_eq!(x as usize, scheme.enumerate_maps(Player::Alice).len());
                assert_eq!(y as usize, scheme.enumerate_maps(Player::Bob).len());
                assert_eq!(o as usize, m * n);
            }
        }
    }

    #[test]
    fn deal_examples() {
        let unit = MbScheme::new(1, 1).unwrap();
        assert_eq!(
            deal(&unit, &amap(&[1]), &bmap(&[1])).unwrap(),
            OutcomeId(0)
        );
        let two = MbScheme::new(2, 2).unwrap();
        // identity maps close immediately at (a1, b1)
        assert_eq!(
            deal(&two, &amap(&[1, 2]), &bmap(&[1, 2])).unwrap(),
            OutcomeId(two.deal_index(1, 1))
        );
        // walk a1 -> b2 -> a2 -> b2 closes at (a2, b2)
        assert_eq!(
            deal(&two, &amap(&[2, 2]), &bmap(&[1, 2])).unwrap(),
            OutcomeId(two.deal_index(2, 2))
        );
    }

    #[test]
    fn deal_rejects_non_monotone_maps() {
        let two = MbScheme::new(2, 2).unwrap();
        assert!(deal(&two, &amap(&[2, 1]), &bmap(&[1, 2])).is_err());
    }

    #[test]
    fn sweep_examples() {
        let two = MbScheme::new(2, 2).unwrap();
        // diagonal deals for Alice
        let part = Pm1Partition::from_alice(OutcomeSet::from_indices(
            4,
            &[two.deal_index(1, 1), two.deal_index(2, 2)],
        ));
        let res = solve_pm1_mb(&two, &part).unwrap();
        assert_eq!(res.winner, Player::Alice);
        assert_eq!(res.strategy.payload, StrategyPayload::Image(vec![1, 2]));

        // nothing for Alice: Bob sends everything to a1
        let part = Pm1Partition::from_alice(OutcomeSet::empty(4));
        let res = solve_pm1_mb(&two, &part).unwrap();
        assert_eq!(res.winner, Player::Bob);
        assert_eq!(res.strategy.payload, StrategyPayload::Image(vec![1, 1]));

        // everything for Alice: constant map to b1
        let part = Pm1Partition::from_alice(OutcomeSet::full(4));
        let res = solve_pm1_mb(&two, &part).unwrap();
        assert_eq!(res.winner, Player::Alice);
        assert_eq!(res.strategy.payload, StrategyPayload::Image(vec![1, 1]));
    }

    #[test]
    fn expansion_shapes() {
        let two = MbScheme::new(2, 2).unwrap();
        let form = expand_explicit_mb(&two, DEFAULT_MB_EXPANSION_LIMIT).unwrap();
        assert_eq!((form.rows(), form.cols()), (3, 3));
        assert_eq!(form.universe_size(), 4);

        // m = 1: Alice has exactly n constant maps
        let thin = MbScheme::new(1, 4).unwrap();
        let form = expand_explicit_mb(&thin, DEFAULT_MB_EXPANSION_LIMIT).unwrap();
        assert_eq!(form.rows(), 4);
    }

    #[test]
    fn expansions_are_tight() {
        for (m, n) in [(1, 1), (1, 3), (2, 2), (2, 3), (3, 3), (2, 4)] {
            let scheme = MbScheme::new(m, n).unwrap();
            let form = expand_explicit_mb(&scheme, DEFAULT_MB_EXPANSION_LIMIT).unwrap();
            assert!(
                is_tight(&form, DEFAULT_TIGHT_LIMIT).unwrap(),
                "({m},{n}) expansion must be tight"
            );
        }
    }

    #[test]
    fn sweep_agrees_with_expansion_and_witnesses_are_sound() {
        for (m, n) in [(1, 1), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3)] {
            let scheme = MbScheme::new(m, n).unwrap();
            let form = expand_explicit_mb(&scheme, DEFAULT_MB_EXPANSION_LIMIT).unwrap();
            let xs = scheme.enumerate_maps(Player::Alice);
            let ys = scheme.enumerate_maps(Player::Bob);
            let p = scheme.outcome_count();
            for mask in 0..(1u64 << p) {
                let part = Pm1Partition::from_alice(OutcomeSet::from_mask(p, mask));
                let greedy = solve_pm1_mb(&scheme, &part).unwrap();
                let explicit = solve_pm1_explicit(&form, &part).unwrap();
                assert_eq!(greedy.winner, explicit.winner, "({m},{n}) mask {mask}");
                let alt = solve_pm1_mb_alternating(&scheme, &part).unwrap();
                assert_eq!(alt.winner, greedy.winner, "variants disagree");
                for res in [greedy, alt] {
                    let StrategyPayload::Image(image) = &res.strategy.payload else {
                        panic!("bargaining witness expected")
                    };
                    match res.winner {
                        Player::Alice => {
                            let x = amap(image);
                            for y in &ys {
                                let o = deal(&scheme, &x, y).unwrap().0;
                                assert!(part.alice().contains(o), "({m},{n}) mask {mask}");
                            }
                        }
                        Player::Bob => {
                            let y = bmap(image);
                            for x in &xs {
                                let o = deal(&scheme, x, &y).unwrap().0;
                                assert!(part.bob().contains(o), "({m},{n}) mask {mask}");
                            }
                        }
                    }
                }
            }
        }
    }
}
