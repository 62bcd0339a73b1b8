use crate::error::{Error, Result};
use crate::explicit::ExplicitGameForm;
use crate::oracle::{BackendKind, MoveChoice, Player, Pm1Result, StrategyHandle, StrategyPayload};
use crate::outcomes::{OutcomeId, Pm1Partition};

/// Default cap on the number of positional strategies per player when
/// expanding to normal form.
pub const DEFAULT_POSITIONAL_EXPANSION_LIMIT: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Owner {
    Alice,
    Bob,
    Terminal,
}

impl Owner {
    fn player(self) -> Option<Player> {
        match self {
            Owner::Alice => Some(Player::Alice),
            Owner::Bob => Some(Player::Bob),
            Owner::Terminal => None,
        }
    }
}

/// How infinite plays are turned into outcomes.
///
/// `Dggs` merges every lasso into the single outcome `c`; `Msdggs` gives
/// each non-transient strongly connected component its own outcome. Cyclic
/// structures treating every simple dicycle as a separate outcome are a
/// different model whose forms may fail tightness; they are not accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionalMode {
    Dggs,
    Msdggs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OutcomeKind {
    /// A terminal vertex.
    Terminal { vertex: usize },
    /// A non-transient strongly connected component (MSDGGS mode).
    Cycle { min_vertex: usize },
    /// All cyclic components merged into one outcome (DGGS mode).
    MergedCycles,
}

/// SCC decomposition of a structure together with the derived outcome list.
///
/// Outcomes are ordered terminals first (by vertex index), then cyclic
/// components (by smallest contained vertex index), then the merged outcome
/// in DGGS mode. Transient components, single non-terminal vertices without
/// a dicycle, are not outcomes.
#[derive(Debug, Clone)]
pub struct SccOutcomeMap {
    pub component_of: Vec<usize>,
    pub component_count: usize,
    /// Outcome index per component; `None` for transient components.
    pub outcome_of_component: Vec<Option<usize>>,
    pub outcomes: Vec<OutcomeKind>,
    pub labels: Vec<String>,
    /// Vertices not reachable from the initial position; allowed, but their
    /// outcomes never occur in a play.
    pub unreachable: Vec<usize>,
}

/// A two-player game structure on a digraph: positions are partitioned into
/// Alice's, Bob's and terminals, and non-terminal positions carry moves.
#[derive(Debug, Clone)]
pub struct PositionalStructure {
    names: Vec<String>,
    owners: Vec<Owner>,
    arcs: Vec<(usize, usize)>,
    out: Vec<Vec<usize>>,
    start: usize,
    mode: PositionalMode,
    decomposition: SccOutcomeMap,
}

fn strongly_connected_components(n: usize, adj: &[Vec<usize>]) -> (Vec<usize>, usize) {
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp = vec![usize::MAX; n];
    let mut next_index = 0usize;
    let mut comp_count = 0usize;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        let mut frames: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            if frame.1 < adj[v].len() {
                let w = adj[v][frame.1];
                frame.1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                frames.pop();
                if let Some(parent) = frames.last() {
                    let u = parent.0;
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp[w] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }
    (comp, comp_count)
}

impl PositionalStructure {
    pub fn new(
        names: Vec<String>,
        owners: Vec<Owner>,
        arcs: Vec<(usize, usize)>,
        start: usize,
        mode: PositionalMode,
    ) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::InvalidInstance("structure has no vertices".into()));
        }
        if owners.len() != n {
            return Err(Error::InvalidInstance("one owner tag per vertex".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::InvalidInstance(format!(
                    "duplicate vertex name {name:?}"
                )));
            }
        }
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (id, &(from, to)) in arcs.iter().enumerate() {
            if from >= n || to >= n {
                return Err(Error::InvalidInstance(format!(
                    "arc {id} references a missing vertex"
                )));
            }
            out[from].push(id);
        }
        for v in 0..n {
            match owners[v] {
                Owner::Terminal if !out[v].is_empty() => {
                    return Err(Error::InvalidInstance(format!(
                        "terminal {:?} has outgoing moves",
                        names[v]
                    )))
                }
                Owner::Alice | Owner::Bob if out[v].is_empty() => {
                    return Err(Error::InvalidInstance(format!(
                        "non-terminal {:?} has no moves",
                        names[v]
                    )))
                }
                _ => {}
            }
        }
        if start >= n || owners[start] == Owner::Terminal {
            return Err(Error::InvalidInstance(
                "initial position must be a non-terminal vertex".into(),
            ));
        }

        let adj: Vec<Vec<usize>> = (0..n)
            .map(|v| out[v].iter().map(|&a| arcs[a].1).collect())
            .collect();
        let (component_of, component_count) = strongly_connected_components(n, &adj);

        // a component is cyclic iff it has two vertices or a self-loop
        let mut comp_members: Vec<Vec<usize>> = vec![Vec::new(); component_count];
        for v in 0..n {
            comp_members[component_of[v]].push(v);
        }
        let has_self_loop: Vec<bool> = (0..component_count)
            .map(|c| {
                comp_members[c].len() > 1
                    || comp_members[c]
                        .iter()
                        .any(|&v| adj[v].iter().any(|&w| w == v))
            })
            .collect();

        let mut outcomes = Vec::new();
        let mut labels = Vec::new();
        let mut outcome_of_component = vec![None; component_count];
        for v in 0..n {
            if owners[v] == Owner::Terminal {
                outcome_of_component[component_of[v]] = Some(outcomes.len());
                outcomes.push(OutcomeKind::Terminal { vertex: v });
                labels.push(names[v].clone());
            }
        }
        let mut cyclic: Vec<usize> = (0..component_count)
            .filter(|&c| has_self_loop[c] && owners[comp_members[c][0]] != Owner::Terminal)
            .collect();
        cyclic.sort_by_key(|&c| comp_members[c][0]);
        match mode {
            PositionalMode::Msdggs => {
                for &c in &cyclic {
                    let min_vertex = comp_members[c][0];
                    outcome_of_component[c] = Some(outcomes.len());
                    outcomes.push(OutcomeKind::Cycle { min_vertex });
                    labels.push(format!("cyc:{}", names[min_vertex]));
                }
            }
            PositionalMode::Dggs => {
                if !cyclic.is_empty() {
                    let merged = outcomes.len();
                    outcomes.push(OutcomeKind::MergedCycles);
                    labels.push("c".to_string());
                    for &c in &cyclic {
                        outcome_of_component[c] = Some(merged);
                    }
                }
            }
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::InvalidInstance(format!(
                    "derived outcome label {l:?} collides with a vertex name; rename the vertex"
                )));
            }
        }
        if outcomes.is_empty() {
            return Err(Error::InvalidInstance(
                "structure derives no outcomes".into(),
            ));
        }

        let mut reachable = vec![false; n];
        let mut queue = vec![start];
        reachable[start] = true;
        while let Some(v) = queue.pop() {
            for &w in &adj[v] {
                if !reachable[w] {
                    reachable[w] = true;
                    queue.push(w);
                }
            }
        }
        let unreachable = (0..n).filter(|&v| !reachable[v]).collect();

        Ok(PositionalStructure {
            names,
            owners,
            arcs,
            out,
            start,
            mode,
            decomposition: SccOutcomeMap {
                component_of,
                component_count,
                outcome_of_component,
                outcomes,
                labels,
                unreachable,
            },
        })
    }

    pub fn mode(&self) -> PositionalMode {
        self.mode
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn owner(&self, v: usize) -> Owner {
        self.owners[v]
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// The SCC decomposition and outcome derivation.
    pub fn decomposition(&self) -> &SccOutcomeMap {
        &self.decomposition
    }

    pub fn outcome_count(&self) -> usize {
        self.decomposition.labels.len()
    }

    pub fn outcome_labels(&self) -> Vec<String> {
        self.decomposition.labels.clone()
    }

    fn controlled(&self, player: Player) -> impl Iterator<Item = usize> + '_ {
        (0..self.vertex_count()).filter(move |&v| self.owners[v].player() == Some(player))
    }

    /// All total strategies of one player. Vertices advance in ascending
    /// index, arc choices in arc-id order, the last vertex varying fastest.
    pub fn enumerate_strategies(&self, player: Player) -> Vec<PositionalStrategy> {
        let vertices: Vec<usize> = self.controlled(player).collect();
        let mut choices: Vec<usize> = vec![0; vertices.len()];
        let mut all = Vec::new();
        loop {
            let mut choice = vec![None; self.vertex_count()];
            for (k, &v) in vertices.iter().enumerate() {
                choice[v] = Some(self.out[v][choices[k]]);
            }
            all.push(PositionalStrategy {
                owner: player,
                choice,
            });
            let mut k = vertices.len();
            loop {
                if k == 0 {
                    return all;
                }
                k -= 1;
                choices[k] += 1;
                if choices[k] < self.out[vertices[k]].len() {
                    break;
                }
                choices[k] = 0;
            }
        }
    }

    pub fn strategy_count(&self, player: Player) -> u128 {
        self.controlled(player)
            .map(|v| self.out[v].len() as u128)
            .product()
    }

    /// Simulates the play from the initial position: the walk stops at a
    /// terminal or at the first revisited vertex, in which case the lasso's
    /// cycle lies inside one strongly connected component whose outcome is
    /// reported (the merged outcome in DGGS mode).
    pub fn play(&self, x: &PositionalStrategy, y: &PositionalStrategy) -> OutcomeId {
        debug_assert_eq!(x.owner, Player::Alice);
        debug_assert_eq!(y.owner, Player::Bob);
        let dec = &self.decomposition;
        let mut visited = vec![false; self.vertex_count()];
        let mut v = self.start;
        loop {
            match self.owners[v] {
                Owner::Terminal => {
                    return OutcomeId(dec.outcome_of_component[dec.component_of[v]].unwrap())
                }
                Owner::Alice | Owner::Bob => {
                    if visited[v] {
                        return OutcomeId(
                            dec.outcome_of_component[dec.component_of[v]]
                                .expect("revisited vertex lies on a dicycle"),
                        );
                    }
                    visited[v] = true;
                    let arc = match self.owners[v] {
                        Owner::Alice => x.choice[v],
                        _ => y.choice[v],
                    }
                    .expect("strategy must be total on the controller's vertices");
                    v = self.arcs[arc].1;
                }
            }
        }
    }

    /// Expands to the normal form: rows and columns enumerate both players'
    /// positional strategies, each cell is the simulated play.
    pub fn expand_explicit(&self, per_player_limit: u64) -> Result<ExplicitGameForm> {
        for player in [Player::Alice, Player::Bob] {
            let count = self.strategy_count(player);
            if count > per_player_limit as u128 {
                return Err(Error::SizeLimitExceeded {
                    required: count,
                    limit: per_player_limit as u128,
                });
            }
        }
        let rows = self.enumerate_strategies(Player::Alice);
        let cols = self.enumerate_strategies(Player::Bob);
        let mut cells = Vec::with_capacity(rows.len() * cols.len());
        for x in &rows {
            for y in &cols {
                cells.push(self.play(x, y).0);
            }
        }
        ExplicitGameForm::with_universe(rows.len(), cols.len(), cells, self.outcome_count())
    }

    /// Reconstructs a strategy from its move list (vertex names).
    pub fn strategy_from_moves(
        &self,
        player: Player,
        moves: &[MoveChoice],
    ) -> Result<PositionalStrategy> {
        let mut choice = vec![None; self.vertex_count()];
        for m in moves {
            let from = self
                .names
                .iter()
                .position(|n| n == &m.from)
                .ok_or_else(|| Error::InvalidInstance(format!("unknown vertex {:?}", m.from)))?;
            let arc = self.out[from]
                .iter()
                .copied()
                .find(|&a| self.names[self.arcs[a].1] == m.to)
                .ok_or_else(|| {
                    Error::InvalidInstance(format!("no move {:?} -> {:?}", m.from, m.to))
                })?;
            choice[from] = Some(arc);
        }
        for v in self.controlled(player) {
            if choice[v].is_none() {
                return Err(Error::InvalidInstance(format!(
                    "strategy misses a move at {:?}",
                    self.names[v]
                )));
            }
        }
        Ok(PositionalStrategy {
            owner: player,
            choice,
        })
    }

    fn moves_payload(&self, player: Player, choice: &[Option<usize>]) -> StrategyHandle {
        let moves = self
            .controlled(player)
            .map(|v| {
                let arc = choice[v].expect("winner's strategy is total");
                MoveChoice {
                    from: self.names[v].clone(),
                    to: self.names[self.arcs[arc].1].clone(),
                }
            })
            .collect();
        StrategyHandle {
            backend: BackendKind::Positional,
            payload: StrategyPayload::Moves(moves),
        }
    }
}

/// A move map: one outgoing arc per controlled non-terminal vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionalStrategy {
    pub owner: Player,
    /// Arc id per vertex; `Some` exactly on the owner's vertices.
    pub choice: Vec<Option<usize>>,
}

/// Solves a ±1 game by backward induction modified to handle dicycles.
///
/// Components are evaluated bottom-up: every move from an eligible component
/// either stays inside it or leads to an already evaluated vertex. Transient
/// components take one ordinary backward-induction step. In a cyclic
/// component the player owning the cycling outcome wins everywhere except
/// the opponent's attractor to already-evaluated opponent-winning exits:
/// cycling forever is as good as exiting for the cycling player. Evaluated
/// vertices then act as pseudo-terminals for the components above.
pub fn solve_pm1_positional(
    structure: &PositionalStructure,
    part: &Pm1Partition,
) -> Result<Pm1Result> {
    let dec = structure.decomposition();
    let p = structure.outcome_count();
    if part.universe_size() != p {
        return Err(Error::UniverseMismatch {
            left: part.universe_size(),
            right: p,
        });
    }
    let side = |o: usize| {
        if part.alice().contains(o) {
            Player::Alice
        } else {
            Player::Bob
        }
    };
    let n = structure.vertex_count();
    let cc = dec.component_count;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); cc];
    for v in 0..n {
        members[dec.component_of[v]].push(v);
    }
    let mut ext_succs: Vec<Vec<usize>> = vec![Vec::new(); cc];
    for &(from, to) in structure.arcs() {
        let a = dec.component_of[from];
        let b = dec.component_of[to];
        if a != b && !ext_succs[a].contains(&b) {
            ext_succs[a].push(b);
        }
    }

    let mut winner: Vec<Option<Player>> = vec![None; n];
    let mut win_move: Vec<Option<usize>> = vec![None; n];
    let mut processed = vec![false; cc];

    for _ in 0..cc {
        // among components whose every external successor is evaluated,
        // take the one with the smallest contained vertex index
        let c = (0..cc)
            .filter(|&c| !processed[c] && ext_succs[c].iter().all(|&d| processed[d]))
            .min_by_key(|&c| members[c][0])
            .expect("condensation is acyclic");
        processed[c] = true;
        let vs = &members[c];
        let single = vs.len() == 1;
        let v0 = vs[0];
        let cyclic = !single
            || structure.out[v0]
                .iter()
                .any(|&a| structure.arcs[a].1 == v0);

        if single && structure.owners[v0] == Owner::Terminal {
            let o = dec.outcome_of_component[c].unwrap();
            winner[v0] = Some(side(o));
            continue;
        }
        if single && !cyclic {
            // transient component: ordinary backward induction step
            let own = structure.owners[v0].player().unwrap();
            let arc = structure.out[v0]
                .iter()
                .copied()
                .find(|&a| winner[structure.arcs[a].1] == Some(own));
            match arc {
                Some(a) => {
                    winner[v0] = Some(own);
                    win_move[v0] = Some(a);
                }
                None => winner[v0] = Some(own.opponent()),
            }
            continue;
        }

        // cyclic component: the cycling outcome's owner wins by staying in
        let o = dec.outcome_of_component[c].expect("cyclic component has an outcome");
        let cp = side(o);
        let ncp = cp.opponent();
        let in_comp: Vec<bool> = {
            let mut m = vec![false; n];
            for &v in vs {
                m[v] = true;
            }
            m
        };
        let mut attracted = vec![false; n];
        let mut level = vec![usize::MAX; n];
        let mut escapes = vec![0usize; n];
        let mut queue = std::collections::VecDeque::new();
        for &v in vs {
            let owner = structure.owners[v].player().unwrap();
            if owner == ncp {
                let has_exit = structure.out[v].iter().any(|&a| {
                    let w = structure.arcs[a].1;
                    !in_comp[w] && winner[w] == Some(ncp)
                });
                if has_exit {
                    attracted[v] = true;
                    level[v] = 1;
                    queue.push_back(v);
                }
            } else {
                escapes[v] = structure.out[v]
                    .iter()
                    .filter(|&&a| {
                        let w = structure.arcs[a].1;
                        in_comp[w] || winner[w] == Some(cp)
                    })
                    .count();
                if escapes[v] == 0 {
                    attracted[v] = true;
                    level[v] = 1;
                    queue.push_back(v);
                }
            }
        }
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &v in vs {
            for &a in &structure.out[v] {
                let w = structure.arcs[a].1;
                if in_comp[w] {
                    preds[w].push(v);
                }
            }
        }
        while let Some(u) = queue.pop_front() {
            for &v in &preds[u] {
                if attracted[v] {
                    continue;
                }
                let owner = structure.owners[v].player().unwrap();
                if owner == ncp {
                    attracted[v] = true;
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                } else {
                    // one internal escape of the cycling player closed
                    let closing = structure.out[v]
                        .iter()
                        .filter(|&&a| structure.arcs[a].1 == u)
                        .count();
                    escapes[v] = escapes[v].saturating_sub(closing);
                    if escapes[v] == 0 {
                        attracted[v] = true;
                        level[v] = level[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
        }
        for &v in vs {
            let owner = structure.owners[v].player().unwrap();
            if attracted[v] {
                winner[v] = Some(ncp);
                if owner == ncp {
                    win_move[v] = structure.out[v].iter().copied().find(|&a| {
                        let w = structure.arcs[a].1;
                        if in_comp[w] {
                            attracted[w] && level[w] < level[v]
                        } else {
                            winner[w] == Some(ncp)
                        }
                    });
                    debug_assert!(win_move[v].is_some());
                }
            } else {
                winner[v] = Some(cp);
                if owner == cp {
                    win_move[v] = structure.out[v].iter().copied().find(|&a| {
                        let w = structure.arcs[a].1;
                        if in_comp[w] {
                            !attracted[w]
                        } else {
                            winner[w] == Some(cp)
                        }
                    });
                    debug_assert!(win_move[v].is_some());
                }
            }
        }
    }

    let overall = winner[structure.start()].expect("every vertex is evaluated");
    let mut choice = vec![None; n];
    for v in structure.controlled(overall) {
        choice[v] = match win_move[v] {
            Some(a) if winner[v] == Some(overall) => Some(a),
            // vertices inside regions lost by the overall winner are never
            // reached when the winner follows this strategy; any move keeps
            // the map total
            _ => Some(structure.out[v][0]),
        };
    }
    Ok(Pm1Result {
        winner: overall,
        strategy: structure.moves_payload(overall, &choice),
        queries_used: 1,
    })
}

/// Small structures from the reference corpus (trees generating the first
/// two matrix fixtures and the two-level fork generating the sixth).
pub mod corpus {
    use super::*;

    fn named(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    /// Root A chooses w1 or hands over to B choosing between w2 and w3.
    pub fn gamma1() -> PositionalStructure {
        PositionalStructure::new(
            named(&["A", "w1", "B", "w2", "w3"]),
            vec![
                Owner::Alice,
                Owner::Terminal,
                Owner::Bob,
                Owner::Terminal,
                Owner::Terminal,
            ],
            vec![(0, 1), (0, 2), (2, 3), (2, 4)],
            0,
            PositionalMode::Dggs,
        )
        .unwrap()
    }

    /// Root A picks one of two B vertices, each choosing between two leaves.
    pub fn gamma2() -> PositionalStructure {
        PositionalStructure::new(
            named(&["A", "B1", "B2", "w1", "w2", "w3", "w4"]),
            vec![
                Owner::Alice,
                Owner::Bob,
                Owner::Bob,
                Owner::Terminal,
                Owner::Terminal,
                Owner::Terminal,
                Owner::Terminal,
            ],
            vec![(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)],
            0,
            PositionalMode::Dggs,
        )
        .unwrap()
    }

    /// A may stop at w1 or pass to B choosing between w1 and w2.
    pub fn gamma3() -> PositionalStructure {
        PositionalStructure::new(
            named(&["A", "B", "w1", "w2"]),
            vec![Owner::Alice, Owner::Bob, Owner::Terminal, Owner::Terminal],
            vec![(0, 2), (0, 1), (1, 2), (1, 3)],
            0,
            PositionalMode::Dggs,
        )
        .unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::explicit::{corpus as figs, is_tight, solve_pm1_explicit, DEFAULT_TIGHT_LIMIT};
    use crate::outcomes::OutcomeSet;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    /// Alice vertex and Bob vertex on a 2-cycle, each with a terminal exit.
    fn two_cycle(mode: PositionalMode) -> PositionalStructure {
        PositionalStructure::new(
            names(&["A", "B", "ta", "tb"]),
            vec![Owner::Alice, Owner::Bob, Owner::Terminal, Owner::Terminal],
            vec![(0, 1), (0, 2), (1, 0), (1, 3)],
            0,
            mode,
        )
        .unwrap()
    }

    #[test]
    fn decompose_examples() {
        let g1 = corpus::gamma1();
        assert_eq!(g1.outcome_labels(), vec!["w1", "w2", "w3"]);
        assert!(g1.decomposition().unreachable.is_empty());

        let g2 = corpus::gamma2();
        assert_eq!(g2.outcome_labels(), vec!["w1", "w2", "w3", "w4"]);

        let cyc = two_cycle(PositionalMode::Msdggs);
        assert_eq!(cyc.outcome_labels(), vec!["ta", "tb", "cyc:A"]);
        let cyc = two_cycle(PositionalMode::Dggs);
        assert_eq!(cyc.outcome_labels(), vec!["ta", "tb", "c"]);
    }

    #[test]
    fn validation_errors() {
        // terminal with out-edges
        assert!(PositionalStructure::new(
            names(&["A", "t"]),
            vec![Owner::Alice, Owner::Terminal],
            vec![(0, 1), (1, 0)],
            0,
            PositionalMode::Dggs,
        )
        .is_err());
        // non-terminal without moves
        assert!(PositionalStructure::new(
            names(&["A", "B", "t"]),
            vec![Owner::Alice, Owner::Bob, Owner::Terminal],
            vec![(0, 2)],
            0,
            PositionalMode::Dggs,
        )
        .is_err());
        // start at a terminal
        assert!(PositionalStructure::new(
            names(&["A", "t"]),
            vec![Owner::Alice, Owner::Terminal],
            vec![(0, 1)],
            1,
            PositionalMode::Dggs,
        )
        .is_err());
    }

    #[test]
    fn play_examples() {
        let g1 = corpus::gamma1();
        let xs = g1.enumerate_strategies(Player::Alice);
        let ys = g1.enumerate_strategies(Player::Bob);
        // Alice moves to B, Bob picks w2
        assert_eq!(g1.play(&xs[1], &ys[0]), OutcomeId(1));
        // acyclic structures terminate for every pair
        for x in &xs {
            for y in &ys {
                let o = g1.play(x, y).0;
                assert!(o < g1.outcome_count());
            }
        }
        // both players stay on the cycle
        let cyc = two_cycle(PositionalMode::Msdggs);
        let xs = cyc.enumerate_strategies(Player::Alice);
        let ys = cyc.enumerate_strategies(Player::Bob);
        let stay_x = xs.iter().find(|x| x.choice[0] == Some(0)).unwrap();
        let stay_y = ys.iter().find(|y| y.choice[1] == Some(2)).unwrap();
        assert_eq!(cyc.play(stay_x, stay_y).0, 2);
    }

    #[test]
    fn expansions_match_matrix_fixtures() {
        let e1 = corpus::gamma1().expand_explicit(4096).unwrap();
        assert_eq!(e1, figs::g1());
        let e2 = corpus::gamma2().expand_explicit(4096).unwrap();
        assert_eq!(e2, figs::g2());
        let e3 = corpus::gamma3().expand_explicit(4096).unwrap();
        assert_eq!(e3, figs::g6());
    }

    #[test]
    fn solve_matches_figure_expansion() {
        let g1 = corpus::gamma1();
        let part = Pm1Partition::from_alice(OutcomeSet::from_indices(3, &[0, 1]));
        let res = solve_pm1_positional(&g1, &part).unwrap();
        assert_eq!(res.winner, Player::Alice);
        // Alice's winning move is straight to w1
        assert_eq!(
            res.strategy.payload,
            StrategyPayload::Moves(vec![MoveChoice {
                from: "A".into(),
                to: "w1".into()
            }])
        );

        let part = Pm1Partition::from_alice(OutcomeSet::from_indices(3, &[1]));
        let res = solve_pm1_positional(&g1, &part).unwrap();
        assert_eq!(res.winner, Player::Bob);
        assert_eq!(
            res.strategy.payload,
            StrategyPayload::Moves(vec![MoveChoice {
                from: "B".into(),
                to: "w3".into()
            }])
        );
    }

    #[test]
    fn cycle_ownership_cases() {
        let cyc = two_cycle(PositionalMode::Msdggs);
        // everything on Alice's side: she wins trivially
        let part = Pm1Partition::from_alice(OutcomeSet::full(3));
        assert_eq!(
            solve_pm1_positional(&cyc, &part).unwrap().winner,
            Player::Alice
        );
        // only the cycle on Alice's side: Bob exits at his own vertex, so
        // cycling cannot be forced (the 2x2 expansion confirms this)
        let part = Pm1Partition::from_alice(OutcomeSet::from_indices(3, &[2]));
        let res = solve_pm1_positional(&cyc, &part).unwrap();
        assert_eq!(res.winner, Player::Bob);
        // cycle plus Bob's exit terminal on Alice's side: now every Bob
        // deviation is bad for him and Alice wins by staying on the cycle
        let part = Pm1Partition::from_alice(OutcomeSet::from_indices(3, &[1, 2]));
        let res = solve_pm1_positional(&cyc, &part).unwrap();
        assert_eq!(res.winner, Player::Alice);
        let StrategyPayload::Moves(moves) = &res.strategy.payload else {
            panic!("positional witness expected")
        };
        assert_eq!(
            moves,
            &vec![MoveChoice {
                from: "A".into(),
                to: "B".into()
            }]
        );
    }

    fn side_of(part: &Pm1Partition, o: usize) -> Player {
        if part.alice().contains(o) {
            Player::Alice
        } else {
            Player::Bob
        }
    }

    fn check_against_expansion(s: &PositionalStructure) {
        let form = s.expand_explicit(4096).unwrap();
        let p = s.outcome_count();
        let xs = s.enumerate_strategies(Player::Alice);
        let ys = s.enumerate_strategies(Player::Bob);
        assert!(is_tight(&form, DEFAULT_TIGHT_LIMIT).unwrap(), "expansion must be tight");
        for mask in 0..(1u64 << p) {
            let part = Pm1Partition::from_alice(OutcomeSet::from_mask(p, mask));
            let oracle = solve_pm1_positional(s, &part).unwrap();
            let explicit = solve_pm1_explicit(&form, &part).unwrap();
            assert_eq!(oracle.winner, explicit.winner, "mask {mask}");
            // witness soundness: play the witness against every reply
            let StrategyPayload::Moves(moves) = &oracle.strategy.payload else {
                panic!("positional witness expected")
            };
            let witness = s.strategy_from_moves(oracle.winner, moves).unwrap();
            match oracle.winner {
                Player::Alice => {
                    for y in &ys {
                        let o = s.play(&witness, y).0;
                        assert_eq!(side_of(&part, o), Player::Alice);
                    }
                }
                Player::Bob => {
                    for x in &xs {
                        let o = s.play(x, &witness).0;
                        assert_eq!(side_of(&part, o), Player::Bob);
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_agrees_with_expansion_on_fixtures() {
        check_against_expansion(&corpus::gamma1());
        check_against_expansion(&corpus::gamma2());
        check_against_expansion(&corpus::gamma3());
        check_against_expansion(&two_cycle(PositionalMode::Msdggs));
        check_against_expansion(&two_cycle(PositionalMode::Dggs));
    }

    #[test]
    fn nested_cycles_and_dggs_merge() {
        // two 2-cycles chained through Bob, three terminals
        let s = PositionalStructure::new(
            names(&["A1", "B1", "A2", "B2", "t1", "t2"]),
            vec![
                Owner::Alice,
                Owner::Bob,
                Owner::Alice,
                Owner::Bob,
                Owner::Terminal,
                Owner::Terminal,
            ],
            vec![
                (0, 1),
                (1, 0),
                (1, 2),
                (2, 3),
                (3, 2),
                (3, 4),
                (2, 5),
            ],
            0,
            PositionalMode::Msdggs,
        )
        .unwrap();
        assert_eq!(s.outcome_labels(), vec!["t1", "t2", "cyc:A1", "cyc:A2"]);
        check_against_expansion(&s);

        let merged = PositionalStructure::new(
            names(&["A1", "B1", "A2", "B2", "t1", "t2"]),
            vec![
                Owner::Alice,
                Owner::Bob,
                Owner::Alice,
                Owner::Bob,
                Owner::Terminal,
                Owner::Terminal,
            ],
            vec![
                (0, 1),
                (1, 0),
                (1, 2),
                (2, 3),
                (3, 2),
                (3, 4),
                (2, 5),
            ],
            0,
            PositionalMode::Dggs,
        )
        .unwrap();
        assert_eq!(merged.outcome_labels(), vec!["t1", "t2", "c"]);
        check_against_expansion(&merged);
    }

    #[test]
    fn tree_expansions_are_rectangular() {
        // every situation of a tree-generated form is simple
        for s in [corpus::gamma1(), corpus::gamma2()] {
            let form = s.expand_explicit(4096).unwrap();
            for r in 0..form.rows() {
                for c in 0..form.cols() {
                    let meet = form.row_support(r).intersection(form.col_support(c));
                    assert_eq!(meet.len(), 1);
                    assert!(meet.contains(form.cell(r, c)));
                }
            }
        }
    }

    #[test]
    fn expansion_limit_is_enforced() {
        let s = corpus::gamma2();
        assert!(matches!(
            s.expand_explicit(1),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }
}
