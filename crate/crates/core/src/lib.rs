//! Engine for computing lexicographically safe (lexsafe) Nash equilibria in
//! finite two-person games whose tight game form is presented either as an
//! explicit matrix or through a polynomial ±1-game oracle.
//!
//! The crate is organized around three layers:
//!
//! * ground types: outcome universe, outcome sets, strict preferences and the
//!   lexicographic order over subsets ([`outcomes`], [`prefs`]);
//! * the uniform ±1-game solver contract and its six backends ([`oracle`],
//!   [`explicit`], [`monotone`], [`positional`], [`jordan`], [`bargaining`],
//!   [`veto`]);
//! * the lexmax-support / complementary-edge algorithms producing certified
//!   equilibria ([`lex`]).
//!
//! The explicit backend doubles as a brute-force reference layer: every other
//! backend can be expanded to an explicit matrix on small instances and
//! cross-checked against it.

pub mod bargaining;
pub mod error;
pub mod expand;
pub mod explicit;
pub mod instance;
pub mod jordan;
pub mod lex;
pub mod monotone;
pub mod oracle;
pub mod outcomes;
pub mod positional;
pub mod prefs;
pub mod report;
pub mod veto;

pub use error::{Error, Result};
pub use expand::{expand_to_explicit, expansion_col_index, expansion_row_index};
pub use explicit::ExplicitGameForm;
pub use lex::{certify_ne, complement_edge, lexmax_support, lexsafe_ne, LexsafeNe};
pub use oracle::{
    contains_edge, minimal_winning_strategy, solve_pm1, OracleInstance, OracleView, Player,
    Pm1Result, StrategyHandle,
};
pub use outcomes::{OutcomeId, OutcomeSet, Pm1Partition};
pub use prefs::{lex_compare, pref_max, Preference};
