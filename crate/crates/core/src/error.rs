use std::fmt;

use serde::Serialize;

/// Which participant a move or strategy belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Alpha,
    Beta,
    #[serde(rename = "player_i")]
    PlayerI,
    #[serde(rename = "player_ii")]
    PlayerII,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Side::Alpha => "alpha",
            Side::Beta => "beta",
            Side::PlayerI => "player_i",
            Side::PlayerII => "player_ii",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An element, point or move does not belong to the space it was used with.
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    /// A bounded search ran out of fuel before reaching its goal.
    #[error("fuel exhausted: {0}")]
    Fuel(String),
    #[error("illegal move by {side} in round {round}: {reason}")]
    IllegalStrategyMove {
        side: Side,
        round: usize,
        reason: String,
    },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("not certified at depth {0}")]
    NotCertifiedAtDepth(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
