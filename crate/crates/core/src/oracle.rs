use serde::{Deserialize, Serialize};

use crate::bargaining::{solve_pm1_mb, MbScheme};
use crate::error::{Error, Result};
use crate::explicit::{solve_pm1_explicit, ExplicitGameForm};
use crate::jordan::{solve_pm1_jordan, JordanMap};
use crate::monotone::{solve_pm1_monotone, MonotonePropertyForm};
use crate::outcomes::{OutcomeSet, Pm1Partition};
use crate::positional::{solve_pm1_positional, PositionalStructure};
use crate::veto::{solve_pm1_veto, VetoScheme};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Player {
    Alice,
    Bob,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Alice => Player::Bob,
            Player::Bob => Player::Alice,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    Explicit,
    MonotoneProperty,
    Positional,
    Jordan,
    Bargaining,
    Veto,
}

/// One move of a positional strategy, in vertex names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveChoice {
    pub from: String,
    pub to: String,
}

/// Backend-native encoding of a strategy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyPayload {
    /// Row index of an explicit form.
    Row(usize),
    /// Column index of an explicit form.
    Col(usize),
    /// A set of outcomes: a generator or transversal of a monotone-property
    /// form, or a connector of a Jordan map.
    OutcomeSubset(OutcomeSet),
    /// Move per controlled vertex of a positional structure.
    Moves(Vec<MoveChoice>),
    /// Image of a monotone bargaining map, 1-based.
    Image(Vec<usize>),
    /// Veto cards per candidate in canonical order.
    Cards(Vec<u64>),
}

/// A winner's strategy as reported by a backend.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyHandle {
    pub backend: BackendKind,
    pub payload: StrategyPayload,
}

/// Outcome of one ±1-game solve: the winner and a witness strategy whose
/// support lies inside the winner's outcome set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pm1Result {
    pub winner: Player,
    pub strategy: StrategyHandle,
    pub queries_used: u64,
}

/// Backend data for one oracle instance.
#[derive(Debug, Clone)]
pub enum Backend {
    Explicit(ExplicitGameForm),
    MonotoneProperty(MonotonePropertyForm),
    Positional(PositionalStructure),
    Jordan(JordanMap),
    Bargaining(MbScheme),
    Veto(VetoScheme),
}

/// A ±1-game oracle: backend data plus the explicit outcome list.
///
/// Instances are immutable; solving is a pure function of the instance and
/// the partition, so queries may be issued concurrently.
#[derive(Debug, Clone)]
pub struct OracleInstance {
    backend: Backend,
    labels: Vec<String>,
}

fn default_labels(p: usize) -> Vec<String> {
    (1..=p).map(|i| format!("w{i}")).collect()
}

impl OracleInstance {
    pub fn new(backend: Backend, labels: Option<Vec<String>>) -> Result<Self> {
        let p = match &backend {
            Backend::Explicit(f) => f.universe_size(),
            Backend::MonotoneProperty(f) => f.universe_size(),
            Backend::Positional(s) => s.outcome_count(),
            Backend::Jordan(m) => m.universe_size(),
            Backend::Bargaining(s) => s.outcome_count(),
            Backend::Veto(s) => s.universe_size(),
        };
        let labels = match (&backend, labels) {
            // positional and bargaining backends derive their outcome labels
            (Backend::Positional(s), None) => s.outcome_labels(),
            (Backend::Bargaining(s), None) => s.outcome_labels(),
            (_, None) => default_labels(p),
            (_, Some(given)) => given,
        };
        if labels.len() != p {
            return Err(Error::InvalidInstance(format!(
                "expected {p} outcome labels, got {}",
                labels.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidInstance(format!(
                    "duplicate outcome label {l:?}"
                )));
            }
        }
        Ok(OracleInstance { backend, labels })
    }

    pub fn explicit(form: ExplicitGameForm) -> Self {
        Self::new(Backend::Explicit(form), None).unwrap()
    }

    pub fn monotone(form: MonotonePropertyForm) -> Self {
        Self::new(Backend::MonotoneProperty(form), None).unwrap()
    }

    pub fn positional(structure: PositionalStructure) -> Self {
        Self::new(Backend::Positional(structure), None).unwrap()
    }

    pub fn jordan(map: JordanMap) -> Self {
        Self::new(Backend::Jordan(map), None).unwrap()
    }

    pub fn bargaining(scheme: MbScheme) -> Self {
        Self::new(Backend::Bargaining(scheme), None).unwrap()
    }

    pub fn veto(scheme: VetoScheme) -> Self {
        Self::new(Backend::Veto(scheme), None).unwrap()
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn outcome_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_of(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Dispatches one ±1-game solve to the backend.
    pub fn solve_pm1(&self, part: &Pm1Partition) -> Result<Pm1Result> {
        if part.universe_size() != self.outcome_count() {
            return Err(Error::UniverseMismatch {
                left: part.universe_size(),
                right: self.outcome_count(),
            });
        }
        match &self.backend {
            Backend::Explicit(f) => solve_pm1_explicit(f, part),
            Backend::MonotoneProperty(f) => solve_pm1_monotone(f, part),
            Backend::Positional(s) => solve_pm1_positional(s, part),
            Backend::Jordan(m) => solve_pm1_jordan(m, part),
            Backend::Bargaining(s) => solve_pm1_mb(s, part),
            Backend::Veto(s) => solve_pm1_veto(s, part),
        }
    }

    /// View of this oracle from one player's side: Alice sees the oracle as
    /// is, Bob sees the two roles exchanged.
    pub fn view(&self, player: Player) -> OracleView<'_> {
        OracleView {
            oracle: self,
            transposed: player == Player::Bob,
        }
    }
}

/// Answer to a containment query, carrying the solving side's witness.
#[derive(Debug, Clone)]
pub enum EdgeAnswer {
    /// The candidate contains an edge of the view's own hypergraph; the
    /// witness strategy has its support inside the candidate.
    Contains(StrategyHandle),
    /// It does not; equivalently the complement contains an edge of the
    /// opposite hypergraph, witnessed by the carried strategy.
    Lacks(StrategyHandle),
}

/// An oracle seen from one player's side.
///
/// Every backend provides this transpose view by exchanging the two roles:
/// the ±1 game with the roles swapped has the same winners with the sides
/// flipped, and witnesses pass through unchanged in their native encoding.
#[derive(Debug, Clone, Copy)]
pub struct OracleView<'a> {
    oracle: &'a OracleInstance,
    transposed: bool,
}

impl<'a> OracleView<'a> {
    pub fn oracle(&self) -> &'a OracleInstance {
        self.oracle
    }

    pub fn is_transposed(&self) -> bool {
        self.transposed
    }

    pub fn universe_size(&self) -> usize {
        self.oracle.outcome_count()
    }

    /// Solves the ±1 game where `part.alice()` is the set preferred by the
    /// view's own player. The reported winner is view-relative.
    pub fn solve(&self, part: &Pm1Partition) -> Result<Pm1Result> {
        if !self.transposed {
            return self.oracle.solve_pm1(part);
        }
        let mut res = self.oracle.solve_pm1(&part.swapped())?;
        res.winner = res.winner.opponent();
        Ok(res)
    }

    /// The containment query Q(A, candidate): does the candidate contain an
    /// edge of the view's own hypergraph? Realized as one ±1-game solve with
    /// the candidate as the own player's outcome set.
    pub fn query_edge(&self, candidate: &OutcomeSet) -> Result<EdgeAnswer> {
        // an empty candidate never contains an edge: supports are nonempty
        if candidate.is_empty() {
            let full = Pm1Partition::from_alice(candidate.clone());
            let res = self.solve(&full)?;
            debug_assert_eq!(res.winner, Player::Bob);
            return Ok(EdgeAnswer::Lacks(res.strategy));
        }
        let part = Pm1Partition::from_alice(candidate.clone());
        let res = self.solve(&part)?;
        Ok(match res.winner {
            Player::Alice => EdgeAnswer::Contains(res.strategy),
            Player::Bob => EdgeAnswer::Lacks(res.strategy),
        })
    }
}

/// Whether Alice's hypergraph has an edge inside `candidate`; on yes, a
/// witness strategy whose support lies inside the candidate.
pub fn contains_edge(
    oracle: &OracleInstance,
    candidate: &OutcomeSet,
) -> Result<Option<StrategyHandle>> {
    match oracle.view(Player::Alice).query_edge(candidate)? {
        EdgeAnswer::Contains(h) => Ok(Some(h)),
        EdgeAnswer::Lacks(_) => Ok(None),
    }
}

/// Entry point of the uniform solver contract.
pub fn solve_pm1(oracle: &OracleInstance, part: &Pm1Partition) -> Result<Pm1Result> {
    oracle.solve_pm1(part)
}

/// Solves the game, then shrinks the winner's outcome set one outcome at a
/// time in ascending canonical order, keeping each move to the loser's side
/// that leaves the winner winning. The final witness comes from the last
/// successful solve; its support is inclusion-minimal among winning
/// supports.
pub fn minimal_winning_strategy(oracle: &OracleInstance, part: &Pm1Partition) -> Result<Pm1Result> {
    let first = oracle.solve_pm1(part)?;
    let mut queries = 1u64;
    let winner = first.winner;
    let mut strategy = first.strategy;
    let mut winner_set = match winner {
        Player::Alice => part.alice().clone(),
        Player::Bob => part.bob().clone(),
    };
    let p = part.universe_size();
    for omega in 0..p {
        if !winner_set.contains(omega) {
            continue;
        }
        let mut candidate = winner_set.clone();
        candidate.remove(omega);
        let attempt = match winner {
            Player::Alice => Pm1Partition::from_alice(candidate.clone()),
            Player::Bob => Pm1Partition::from_alice(candidate.complement()),
        };
        let res = oracle.solve_pm1(&attempt)?;
        queries += 1;
        if res.winner == winner {
            winner_set = candidate;
            strategy = res.strategy;
        }
    }
    Ok(Pm1Result {
        winner,
        strategy,
        queries_used: queries,
    })
}
