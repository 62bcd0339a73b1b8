use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::oracle::{BackendKind, Player, Pm1Result, StrategyHandle, StrategyPayload};
use crate::outcomes::{OutcomeSet, Pm1Partition};
use crate::prefs::{lex_compare, pref_max, Preference};

/// Default cap on the universe size for tightness checking; testing
/// tightness enumerates all `2^p` partitions and no polynomial test is known.
pub const DEFAULT_TIGHT_LIMIT: u32 = 20;

/// A game form given explicitly: a `rows x cols` matrix of outcome indices.
///
/// Alice picks the row, Bob picks the column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitGameForm {
    rows: usize,
    cols: usize,
    cells: Vec<usize>,
    universe: usize,
    row_supports: Vec<OutcomeSet>,
    col_supports: Vec<OutcomeSet>,
}

impl ExplicitGameForm {
    /// Builds a form whose universe is exactly the set of outcomes appearing
    /// in the matrix (surjectivity holds by construction).
    pub fn new(rows: usize, cols: usize, cells: Vec<usize>, universe: usize) -> Result<Self> {
        let form = Self::with_universe(rows, cols, cells, universe)?;
        let mut seen = vec![false; universe];
        for &c in &form.cells {
            seen[c] = true;
        }
        if let Some(missing) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidInstance(format!(
                "outcome {missing} never appears in the matrix"
            )));
        }
        Ok(form)
    }

    /// Like [`ExplicitGameForm::new`] but allows outcomes of the universe to
    /// be absent from the matrix. Reduced and expanded forms use this: a
    /// reduction can drop the last occurrence of an outcome without changing
    /// the universe the preferences are stated over.
    pub fn with_universe(
        rows: usize,
        cols: usize,
        cells: Vec<usize>,
        universe: usize,
    ) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInstance("matrix must be nonempty".into()));
        }
        if cells.len() != rows * cols {
            return Err(Error::InvalidInstance(format!(
                "expected {} cells, got {}",
                rows * cols,
                cells.len()
            )));
        }
        if universe == 0 {
            return Err(Error::InvalidInstance("universe must be nonempty".into()));
        }
        if let Some(&bad) = cells.iter().find(|&&c| c >= universe) {
            return Err(Error::InvalidInstance(format!(
                "cell outcome {bad} outside universe of size {universe}"
            )));
        }
        let mut row_supports = vec![OutcomeSet::empty(universe); rows];
        let mut col_supports = vec![OutcomeSet::empty(universe); cols];
        for r in 0..rows {
            for c in 0..cols {
                let o = cells[r * cols + c];
                row_supports[r].insert(o);
                col_supports[c].insert(o);
            }
        }
        Ok(ExplicitGameForm {
            rows,
            cols,
            cells,
            universe,
            row_supports,
            col_supports,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn universe_size(&self) -> usize {
        self.universe
    }

    pub fn cell(&self, row: usize, col: usize) -> usize {
        self.cells[row * self.cols + col]
    }

    pub fn row_support(&self, row: usize) -> &OutcomeSet {
        &self.row_supports[row]
    }

    pub fn col_support(&self, col: usize) -> &OutcomeSet {
        &self.col_supports[col]
    }

    pub fn transposed(&self) -> ExplicitGameForm {
        let mut cells = Vec::with_capacity(self.cells.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                cells.push(self.cell(r, c));
            }
        }
        ExplicitGameForm::with_universe(self.cols, self.rows, cells, self.universe).unwrap()
    }
}

/// Solves a ±1 game on an explicit form: the first row whose support lies in
/// Alice's set wins for Alice; failing that, the first column inside Bob's
/// set wins for Bob; failing both, the form is not tight.
pub fn solve_pm1_explicit(form: &ExplicitGameForm, part: &Pm1Partition) -> Result<Pm1Result> {
    if part.universe_size() != form.universe {
        return Err(Error::UniverseMismatch {
            left: part.universe_size(),
            right: form.universe,
        });
    }
    for (r, support) in form.row_supports.iter().enumerate() {
        if support.is_subset(part.alice()) {
            return Ok(Pm1Result {
                winner: Player::Alice,
                strategy: StrategyHandle {
                    backend: BackendKind::Explicit,
                    payload: StrategyPayload::Row(r),
                },
                queries_used: 1,
            });
        }
    }
    for (c, support) in form.col_supports.iter().enumerate() {
        if support.is_subset(part.bob()) {
            return Ok(Pm1Result {
                winner: Player::Bob,
                strategy: StrategyHandle {
                    backend: BackendKind::Explicit,
                    payload: StrategyPayload::Col(c),
                },
                queries_used: 1,
            });
        }
    }
    Err(Error::NotTight {
        alice_set: part.alice().clone(),
    })
}

/// First partition (by ascending bitmask of Alice's set) on which neither
/// player wins, or `None` when the form is tight.
pub fn tightness_witness(form: &ExplicitGameForm, limit: u32) -> Result<Option<Pm1Partition>> {
    let p = form.universe;
    if p > limit as usize || p >= 64 {
        return Err(Error::SizeLimitExceeded {
            required: p as u128,
            limit: limit as u128,
        });
    }
    for mask in 0..(1u64 << p) {
        let part = Pm1Partition::from_alice(OutcomeSet::from_mask(p, mask));
        match solve_pm1_explicit(form, &part) {
            Ok(_) => {}
            Err(Error::NotTight { .. }) => return Ok(Some(part)),
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

/// Brute-force tightness test over all `2^p` partitions.
pub fn is_tight(form: &ExplicitGameForm, limit: u32) -> Result<bool> {
    Ok(tightness_witness(form, limit)?.is_none())
}

/// All situations `(row, col)` satisfying the Nash inequalities under the
/// given strict preferences.
pub fn enumerate_ne(
    form: &ExplicitGameForm,
    pref_a: &Preference,
    pref_b: &Preference,
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..form.rows {
        for y in 0..form.cols {
            if is_nash(form, pref_a, pref_b, x, y) {
                out.push((x, y));
            }
        }
    }
    out
}

/// Direct check of the Nash definition for one situation.
pub fn is_nash(
    form: &ExplicitGameForm,
    pref_a: &Preference,
    pref_b: &Preference,
    x: usize,
    y: usize,
) -> bool {
    let here = form.cell(x, y);
    let alice_ok = (0..form.rows).all(|x2| pref_a.rank(form.cell(x2, y)) <= pref_a.rank(here));
    let bob_ok = (0..form.cols).all(|y2| pref_b.rank(form.cell(x, y2)) <= pref_b.rank(here));
    alice_ok && bob_ok
}

/// The two multi-hypergraphs of a form: row supports and column supports.
#[derive(Debug, Clone)]
pub struct Hypergraphs {
    pub a_edges: Vec<OutcomeSet>,
    pub b_edges: Vec<OutcomeSet>,
}

pub fn extract_hypergraphs(form: &ExplicitGameForm) -> Hypergraphs {
    Hypergraphs {
        a_edges: form.row_supports.clone(),
        b_edges: form.col_supports.clone(),
    }
}

/// Drops strategies whose support strictly contains another strategy's
/// support, then deduplicates equal supports keeping the first occurrence.
/// Applied to both axes. The universe is kept unchanged, so the result may
/// no longer cover every outcome.
pub fn reduce_minimal(form: &ExplicitGameForm) -> ExplicitGameForm {
    let keep = |supports: &[OutcomeSet]| -> Vec<usize> {
        let mut kept = Vec::new();
        for (i, s) in supports.iter().enumerate() {
            let dominated = supports
                .iter()
                .enumerate()
                .any(|(j, t)| j != i && t.is_proper_subset(s));
            let duplicate = supports[..i].iter().any(|t| t == s);
            if !dominated && !duplicate {
                kept.push(i);
            }
        }
        kept
    };
    let rows = keep(&form.row_supports);
    let cols = keep(&form.col_supports);
    let mut cells = Vec::with_capacity(rows.len() * cols.len());
    for &r in &rows {
        for &c in &cols {
            cells.push(form.cell(r, c));
        }
    }
    ExplicitGameForm::with_universe(rows.len(), cols.len(), cells, form.universe).unwrap()
}

/// Winner of the ±1 game by direct maxmin/minmax computation, or `None`
/// when maxmin < minmax (no saddle point). Used to cross-check the scan
/// solver on tight forms.
pub fn maxmin_winner(form: &ExplicitGameForm, part: &Pm1Partition) -> Option<Player> {
    let value = |o: usize| if part.alice().contains(o) { 1i32 } else { -1 };
    let maxmin = (0..form.rows)
        .map(|x| (0..form.cols).map(|y| value(form.cell(x, y))).min().unwrap())
        .max()
        .unwrap();
    let minmax = (0..form.cols)
        .map(|y| (0..form.rows).map(|x| value(form.cell(x, y))).max().unwrap())
        .min()
        .unwrap();
    match (maxmin, minmax) {
        (1, 1) => Some(Player::Alice),
        (-1, -1) => Some(Player::Bob),
        _ => None,
    }
}

/// The lexsafe equilibrium boxes of an explicit form, enumerated in full.
///
/// `x_l` are Alice's lexsafe rows, `y_m` the special best responses closing
/// box NE-A; `y_l` / `x_m` are the same for Bob's box NE-B. Every pair in
/// `x_l × y_m` (respectively `x_m × y_l`) is a Nash equilibrium with outcome
/// `omega_a` (respectively `omega_b`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LexsafeBoxes {
    pub x_l: Vec<usize>,
    pub y_m: Vec<usize>,
    pub omega_a: usize,
    pub x_m: Vec<usize>,
    pub y_l: Vec<usize>,
    pub omega_b: usize,
}

pub fn lexsafe_boxes(
    form: &ExplicitGameForm,
    pref_a: &Preference,
    pref_b: &Preference,
) -> Result<LexsafeBoxes> {
    let (x_l, y_m, omega_a) = one_box(form, pref_a, pref_b)?;
    let transposed = form.transposed();
    let (y_l, x_m, omega_b) = one_box(&transposed, pref_b, pref_a)?;
    Ok(LexsafeBoxes {
        x_l,
        y_m,
        omega_a,
        x_m,
        y_l,
        omega_b,
    })
}

fn one_box(
    form: &ExplicitGameForm,
    pref_own: &Preference,
    pref_other: &Preference,
) -> Result<(Vec<usize>, Vec<usize>, usize)> {
    let mut best = 0usize;
    for r in 1..form.rows {
        if lex_compare(&form.row_supports[r], &form.row_supports[best], pref_own)?
            == Ordering::Greater
        {
            best = r;
        }
    }
    let lex_support = form.row_supports[best].clone();
    let x_l: Vec<usize> = (0..form.rows)
        .filter(|&r| form.row_supports[r] == lex_support)
        .collect();
    let omega = pref_max(&lex_support, pref_other)?.0;
    let x0 = x_l[0];
    let y_m: Vec<usize> = (0..form.cols)
        .filter(|&y| {
            form.cell(x0, y) == omega
                && (0..form.rows).all(|x2| pref_own.rank(form.cell(x2, y)) <= pref_own.rank(omega))
        })
        .collect();
    Ok((x_l, y_m, omega))
}

/// The nine game forms of the reference corpus, used as fixtures throughout
/// the test suites. Forms 1-6 are tight, forms 7-9 are not.
pub mod corpus {
    use super::ExplicitGameForm;

    fn form(rows: usize, cols: usize, cells: &[usize]) -> ExplicitGameForm {
        let universe = cells.iter().max().unwrap() + 1;
        ExplicitGameForm::new(rows, cols, cells.to_vec(), universe).unwrap()
    }

    pub fn g1() -> ExplicitGameForm {
        form(2, 2, &[0, 0, 1, 2])
    }

    pub fn g2() -> ExplicitGameForm {
        form(2, 4, &[0, 0, 1, 1, 2, 3, 2, 3])
    }

    pub fn g3() -> ExplicitGameForm {
        form(3, 3, &[0, 0, 2, 0, 1, 1, 2, 1, 2])
    }

    pub fn g4() -> ExplicitGameForm {
        form(3, 3, &[0, 0, 2, 0, 0, 1, 3, 1, 1])
    }

    pub fn g5() -> ExplicitGameForm {
        form(
            4,
            4,
            &[0, 1, 0, 1, 2, 3, 3, 2, 0, 3, 0, 4, 2, 1, 5, 1],
        )
    }

    pub fn g6() -> ExplicitGameForm {
        form(2, 2, &[0, 0, 0, 1])
    }

    pub fn g7() -> ExplicitGameForm {
        form(2, 2, &[0, 1, 1, 0])
    }

    pub fn g8() -> ExplicitGameForm {
        form(2, 3, &[0, 0, 1, 2, 3, 2])
    }

    pub fn g9() -> ExplicitGameForm {
        form(3, 3, &[0, 0, 1, 3, 4, 1, 3, 2, 2])
    }

    pub fn all() -> Vec<(&'static str, ExplicitGameForm, bool)> {
        vec![
            ("g1", g1(), true),
            ("g2", g2(), true),
            ("g3", g3(), true),
            ("g4", g4(), true),
            ("g5", g5(), true),
            ("g6", g6(), true),
            ("g7", g7(), false),
            ("g8", g8(), false),
            ("g9", g9(), false),
        ]
    }
}
