use crate::error::{Error, Result};
use crate::explicit::ExplicitGameForm;
use crate::oracle::{BackendKind, Player, Pm1Result, StrategyHandle, StrategyPayload};
use crate::outcomes::Pm1Partition;

/// Default cap on the number of card distributions per player for expansion.
pub const DEFAULT_VETO_EXPANSION_LIMIT: u64 = 5000;

const VALUE_BOUND: u64 = (1 << 31) - 1;

/// A veto voting scheme: card budgets for the two voters and a positive
/// veto resistance per candidate, tied by the budget identity
/// `mu_a + mu_b + 1 = sum of resistances`. A candidate receiving at least
/// its resistance in combined cards is vetoed; the identity guarantees a
/// survivor in every situation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VetoScheme {
    mu_a: u64,
    mu_b: u64,
    lambda: Vec<u64>,
}

impl VetoScheme {
    pub fn new(mu_a: u64, mu_b: u64, lambda: Vec<u64>) -> Result<Self> {
        let scheme = VetoScheme { mu_a, mu_b, lambda };
        scheme.validate()?;
        Ok(scheme)
    }

    /// Checks positivity, the value bounds, and the budget identity,
    /// reporting all three sums on failure.
    pub fn validate(&self) -> Result<()> {
        if self.mu_a == 0 || self.mu_b == 0 {
            return Err(Error::InvalidInstance(
                "both card budgets must be positive".into(),
            ));
        }
        if self.lambda.is_empty() || self.lambda.iter().any(|&l| l == 0) {
            return Err(Error::InvalidInstance(
                "every candidate needs a positive veto resistance".into(),
            ));
        }
        if self.mu_a > VALUE_BOUND
            || self.mu_b > VALUE_BOUND
            || self.lambda.iter().any(|&l| l > VALUE_BOUND)
        {
            return Err(Error::InvalidInstance(format!(
                "budgets and resistances are bounded by {VALUE_BOUND}"
            )));
        }
        let total: u64 = self.lambda.iter().sum();
        if self.mu_a + self.mu_b + 1 != total {
            return Err(Error::InvalidInstance(format!(
                "budget identity violated: mu_a = {}, mu_b = {}, \
                 mu_a + mu_b + 1 = {} but resistances sum to {}",
                self.mu_a,
                self.mu_b,
                self.mu_a + self.mu_b + 1,
                total
            )));
        }
        Ok(())
    }

    pub fn mu(&self, player: Player) -> u64 {
        match player {
            Player::Alice => self.mu_a,
            Player::Bob => self.mu_b,
        }
    }

    pub fn resistances(&self) -> &[u64] {
        &self.lambda
    }

    pub fn universe_size(&self) -> usize {
        self.lambda.len()
    }

    /// Number of card distributions of one player: compositions of the
    /// budget into one non-negative part per candidate.
    pub fn distribution_count(&self, player: Player) -> u128 {
        let p = self.universe_size() as u64;
        let budget = self.mu(player);
        // C(budget + p - 1, p - 1)
        let n = (budget + p - 1) as u128;
        let k = (p - 1) as u128;
        let mut acc: u128 = 1;
        for i in 0..k {
            acc = acc.saturating_mul(n - i) / (i + 1);
        }
        acc
    }

    /// All card distributions of one player in lexicographic order.
    pub fn enumerate_distributions(&self, player: Player) -> Vec<Vec<u64>> {
        let p = self.universe_size();
        let budget = self.mu(player);
        let mut out = Vec::new();
        let mut current = vec![0u64; p];
        fn rec(slot: usize, left: u64, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
            if slot + 1 == current.len() {
                current[slot] = left;
                out.push(current.clone());
                return;
            }
            for used in 0..=left {
                current[slot] = used;
                rec(slot + 1, left - used, current, out);
            }
        }
        rec(0, budget, &mut current, &mut out);
        out
    }
}

/// Solves a ±1 veto game by the budget comparison: Alice wins exactly when
/// she can veto all of Bob's candidates, i.e. their resistances sum to at
/// most her budget; by the identity exactly one player can. The witness
/// stacks the full resistance on each opposing candidate; leftover cards go
/// on the canonical-minimum opposing candidate (or the overall minimum when
/// the opponent's set is empty), which cannot unseat the win since the
/// combined budgets leave at least one survivor.
///
/// Runs on sums and comparisons only; no loop ranges over card counts.
pub fn solve_pm1_veto(scheme: &VetoScheme, part: &Pm1Partition) -> Result<Pm1Result> {
    let p = scheme.universe_size();
    if part.universe_size() != p {
        return Err(Error::UniverseMismatch {
            left: part.universe_size(),
            right: p,
        });
    }
    let cost_bob: u64 = part.bob().iter().map(|o| scheme.lambda[o]).sum();
    let (winner, to_veto, budget) = if cost_bob <= scheme.mu_a {
        (Player::Alice, part.bob(), scheme.mu_a)
    } else {
        (Player::Bob, part.alice(), scheme.mu_b)
    };
    let cost: u64 = to_veto.iter().map(|o| scheme.lambda[o]).sum();
    debug_assert!(cost <= budget, "the budget identity forces one winner");
    let mut cards = vec![0u64; p];
    for o in to_veto.iter() {
        cards[o] = scheme.lambda[o];
    }
    let leftover = budget - cost;
    if leftover > 0 {
        let sink = to_veto.min_index().unwrap_or(0);
        cards[sink] += leftover;
    }
    Ok(Pm1Result {
        winner,
        strategy: StrategyHandle {
            backend: BackendKind::Veto,
            payload: StrategyPayload::Cards(cards),
        },
        queries_used: 1,
    })
}

/// Outcome of one situation: the candidates whose combined cards stay below
/// their resistance. Nonempty by the budget identity.
pub fn survivors(scheme: &VetoScheme, x: &[u64], y: &[u64]) -> Vec<usize> {
    (0..scheme.universe_size())
        .filter(|&o| x[o] + y[o] < scheme.lambda[o])
        .collect()
}

/// Expands the scheme: rows and columns enumerate both players' card
/// distributions lexicographically, each cell elects the canonical-minimum
/// survivor.
pub fn expand_explicit_veto(scheme: &VetoScheme, limit: u64) -> Result<ExplicitGameForm> {
    for player in [Player::Alice, Player::Bob] {
        let count = scheme.distribution_count(player);
        if count > limit as u128 {
            return Err(Error::SizeLimitExceeded {
                required: count,
                limit: limit as u128,
            });
        }
    }
    let xs = scheme.enumerate_distributions(Player::Alice);
    let ys = scheme.enumerate_distributions(Player::Bob);
    let mut cells = Vec::with_capacity(xs.len() * ys.len());
    for x in &xs {
        for y in &ys {
            let elected = *survivors(scheme, x, y)
                .first()
                .ok_or_else(|| Error::Internal("no survivor despite the identity".into()))?;
            cells.push(elected);
        }
    }
    ExplicitGameForm::with_universe(xs.len(), ys.len(), cells, scheme.universe_size())
}
