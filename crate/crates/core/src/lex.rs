use crate::error::{Error, Result};
use crate::oracle::{EdgeAnswer, OracleInstance, OracleView, Player, StrategyHandle};
use crate::outcomes::{OutcomeId, OutcomeSet};
use crate::prefs::{pref_max, Preference};

/// Result of a lexmax-support computation: the unique lexicographically
/// maximal support among the view's own strategies, a witness strategy
/// attaining it, and the number of oracle queries spent.
#[derive(Debug, Clone)]
pub struct LexmaxSupport {
    pub support: OutcomeSet,
    pub witness: StrategyHandle,
    pub queries: u64,
}

/// Computes the lexmax support A^L of the view's own player.
///
/// Outcomes are ordered worst to best by `pref`. The confirmed set K starts
/// empty; each step queries K together with shrinking tails of the undecided
/// suffix. Containment is monotone, so positivity flips at most once per
/// step; the last positive tail start is the next confirmed element. The
/// step range is extended by one past the end so that the final query is on
/// K alone, and a positive answer there terminates with A^L = K.
///
/// With `dichotomy` the flip point of each step is located by binary search
/// instead of a linear scan; the resulting support is identical, only the
/// query count changes.
pub fn lexmax_support(
    view: &OracleView,
    pref: &Preference,
    dichotomy: bool,
) -> Result<LexmaxSupport> {
    let p = view.universe_size();
    if pref.universe_size() != p {
        return Err(Error::UniverseMismatch {
            left: pref.universe_size(),
            right: p,
        });
    }
    let order = pref.worst_to_best();
    let mut confirmed = OutcomeSet::empty(p);
    let mut base = 0usize; // positions order[..base] are decided
    let mut queries = 0u64;

    // the set K ∪ {order[t-1], ..., order[p-1]}, where t = p + 1 gives K alone
    let query_set = |confirmed: &OutcomeSet, t: usize| {
        let mut s = confirmed.clone();
        for &omega in &order[t - 1..] {
            s.insert(omega);
        }
        s
    };

    loop {
        // find the largest t in [base+1, p+1] whose query set still
        // contains an edge; t = base + 1 is positive by invariant
        let mut last_positive;
        let mut last_handle: Option<StrategyHandle> = None;

        if dichotomy {
            let mut lo = base + 1;
            let mut hi = p + 1;
            // the set for t = p + 1 is K itself; empty K cannot contain an edge
            if confirmed.is_empty() && hi > lo {
                hi = p;
            }
            // invariant: answer at lo is positive (by monotone containment),
            // though lo may not have been queried yet
            while lo < hi {
                let mid = lo + (hi - lo + 1) / 2;
                let s = query_set(&confirmed, mid);
                queries += 1;
                match view.query_edge(&s)? {
                    EdgeAnswer::Contains(h) => {
                        last_handle = Some(h);
                        lo = mid;
                    }
                    EdgeAnswer::Lacks(_) => hi = mid - 1,
                }
            }
            last_positive = lo;
            if last_positive == p + 1 && last_handle.is_none() {
                // the search collapsed without touching K itself; issue the
                // terminating query to obtain the witness
                queries += 1;
                match view.query_edge(&confirmed)? {
                    EdgeAnswer::Contains(h) => last_handle = Some(h),
                    EdgeAnswer::Lacks(_) => {
                        return Err(Error::Internal(
                            "confirmed set lost its edge during the search".into(),
                        ))
                    }
                }
            }
        } else {
            last_positive = base;
            for t in base + 1..=p + 1 {
                if t == p + 1 && confirmed.is_empty() {
                    break; // the empty set contains no edge
                }
                let s = query_set(&confirmed, t);
                queries += 1;
                match view.query_edge(&s)? {
                    EdgeAnswer::Contains(h) => {
                        last_handle = Some(h);
                        last_positive = t;
                    }
                    EdgeAnswer::Lacks(_) => break,
                }
            }
        }

        if last_positive == p + 1 {
            // K alone contains an edge: the last positive query was on K,
            // whose witness support equals the lexmax edge
            return Ok(LexmaxSupport {
                support: confirmed,
                witness: last_handle.expect("terminating query must carry a witness"),
                queries,
            });
        }
        debug_assert!(last_positive > base, "first query of a step must be positive");
        confirmed.insert(order[last_positive - 1]);
        base = last_positive;
    }
}

/// Result of the complementary-edge computation: a minimal edge B^M of the
/// opposite hypergraph meeting A^L exactly in the chosen outcome, every
/// other element below it, plus the witness strategy attaining it.
#[derive(Debug, Clone)]
pub struct ComplementEdge {
    pub edge: OutcomeSet,
    pub witness: StrategyHandle,
    pub queries: u64,
}

/// Finds B^M for a chosen outcome of the lexmax edge A^L.
///
/// Starts from the largest admissible opposite set, everything that is
/// neither in A^L \ {omega_star} nor preferred to omega_star, checks it
/// lacks an own-side edge in its complement (guaranteed; a failure is a
/// backend bug), then deletes elements in ascending canonical order while
/// the check still holds. The surviving set is an inclusion-minimal edge of
/// the opposite hypergraph and the witness comes from the last solve that
/// confirmed it.
pub fn complement_edge(
    view: &OracleView,
    lexmax: &OutcomeSet,
    omega_star: OutcomeId,
    pref: &Preference,
) -> Result<ComplementEdge> {
    let p = view.universe_size();
    if lexmax.universe_size() != p || pref.universe_size() != p {
        return Err(Error::UniverseMismatch {
            left: lexmax.universe_size(),
            right: p,
        });
    }
    if !lexmax.contains(omega_star.0) {
        return Err(Error::InvalidInstance(format!(
            "omega_star {omega_star} is not in the lexmax support"
        )));
    }
    let star_rank = pref.rank(omega_star.0);
    let mut edge = OutcomeSet::empty(p);
    for omega in 0..p {
        let above = pref.rank(omega) > star_rank;
        let in_lexmax_other = lexmax.contains(omega) && omega != omega_star.0;
        if !above && !in_lexmax_other {
            edge.insert(omega);
        }
    }
    let mut queries = 0u64;
    let mut witness = match view.query_edge(&edge.complement())? {
        EdgeAnswer::Lacks(h) => h,
        EdgeAnswer::Contains(_) => {
            return Err(Error::Internal(
                "initial complement set contains an own-side edge; \
                 the backend violates the lexicographical theorem"
                    .into(),
            ))
        }
    };
    queries += 1;
    for omega in 0..p {
        if !edge.contains(omega) {
            continue;
        }
        let mut candidate = edge.clone();
        candidate.remove(omega);
        queries += 1;
        if let EdgeAnswer::Lacks(h) = view.query_edge(&candidate.complement())? {
            edge = candidate;
            witness = h;
        }
    }
    Ok(ComplementEdge {
        edge,
        witness,
        queries,
    })
}

/// A certified lexsafe Nash equilibrium for one player's box.
///
/// For `player` = Alice this is an element of box NE-A: `x_strategy` is her
/// lexsafe strategy with support `support_own` = A^L, `y_strategy` the
/// special best response with support `support_other` = B^M, and
/// `ne_outcome` the equilibrium outcome. For Bob the roles are mirrored
/// (`support_own` is his lexmax support B^L).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexsafeNe {
    pub player: Player,
    pub x_strategy: StrategyHandle,
    pub y_strategy: StrategyHandle,
    pub support_own: OutcomeSet,
    pub support_other: OutcomeSet,
    pub ne_outcome: OutcomeId,
    pub queries_used: u64,
}

/// Computes one lexsafe NE of the given player.
///
/// The player's lexmax support is computed on their own strategy axis (for
/// Bob, on the transposed oracle view); the equilibrium outcome is the
/// opponent-preference maximum of that support, which makes the complement
/// edge's witness a best response; the complement edge closes the box.
pub fn lexsafe_ne(
    oracle: &OracleInstance,
    pref_own: &Preference,
    pref_other: &Preference,
    player: Player,
    dichotomy: bool,
) -> Result<LexsafeNe> {
    let view = oracle.view(player);
    let lexmax = lexmax_support(&view, pref_own, dichotomy)?;
    let omega_star = pref_max(&lexmax.support, pref_other)?;
    let complement = complement_edge(&view, &lexmax.support, omega_star, pref_own)?;
    let (x_strategy, y_strategy) = match player {
        Player::Alice => (lexmax.witness, complement.witness),
        Player::Bob => (complement.witness, lexmax.witness),
    };
    Ok(LexsafeNe {
        player,
        x_strategy,
        y_strategy,
        support_own: lexmax.support,
        support_other: complement.edge,
        ne_outcome: omega_star,
        queries_used: lexmax.queries + complement.queries,
    })
}

/// Checks the three conditions that make a lexsafe record an equilibrium:
/// the two supports meet exactly in the equilibrium outcome, which is the
/// opponent-preference maximum of the player's support and the player's
/// preference maximum of the opponent's support. Deviations of the opponent
/// stay inside the player's support and vice versa, so these imply the Nash
/// inequalities.
pub fn certify_ne(ne: &LexsafeNe, pref_a: &Preference, pref_b: &Preference) -> bool {
    let (pref_own, pref_other) = match ne.player {
        Player::Alice => (pref_a, pref_b),
        Player::Bob => (pref_b, pref_a),
    };
    let meet = ne.support_own.intersection(&ne.support_other);
    if meet.len() != 1 || !meet.contains(ne.ne_outcome.0) {
        return false;
    }
    match (
        pref_max(&ne.support_own, pref_other),
        pref_max(&ne.support_other, pref_own),
    ) {
        (Ok(a), Ok(b)) => a == ne.ne_outcome && b == ne.ne_outcome,
        _ => false,
    }
}
