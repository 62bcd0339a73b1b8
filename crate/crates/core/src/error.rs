use thiserror::Error;

use crate::outcomes::OutcomeSet;

/// Errors shared by every module of the engine.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two arguments refer to outcome universes of different sizes.
    #[error("universe size mismatch: {left} vs {right}")]
    UniverseMismatch { left: usize, right: usize },

    /// An operation that needs a nonempty outcome set got an empty one.
    #[error("operation requires a nonempty outcome set")]
    EmptySet,

    /// A preference list is not a strict total order over the universe.
    #[error("invalid preference: {0}")]
    InvalidPreference(String),

    /// Backend instance data violates its own construction rules.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// The queried ±1 game has no winner: the explicit form is not tight.
    /// Carries the partition (Alice's side) on which both scans failed.
    #[error("game form is not tight (no winner for the queried partition)")]
    NotTight { alice_set: OutcomeSet },

    /// An enumeration would exceed the configured size limit.
    #[error("size limit exceeded: required {required}, limit {limit}")]
    SizeLimitExceeded { required: u128, limit: u128 },

    /// A Jordan map failed the exactly-one-winner runtime check; its
    /// adjacency data does not describe a valid degree-3 planar partition.
    #[error("invalid Jordan map: {0}")]
    InvalidMap(String),

    /// A condition guaranteed by a proved theorem failed at runtime;
    /// indicates a backend bug, not a user error.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
