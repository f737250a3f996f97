//! Finite-depth adjudication: three-valued outcomes backed by checkable certificates.

use serde::Serialize;
use serde_json::{json, Value};

use super::{Arena, GameKind, History, Move};
use crate::error::{Error, Result};

/// How an α certificate was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaRule {
    /// The last open is an atom, so every later open equals it.
    Atom,
    /// The same canonical point was carried through every round.
    Threaded,
}

/// Evidence that enumerated point `index` is outside the open of move `move_index`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Exclusion<P> {
    pub index: usize,
    pub point: P,
    pub move_index: usize,
    pub round: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome<P> {
    AlphaCertified { witness: P, rule: AlphaRule },
    BetaCertified { prefix: usize, exclusions: Vec<Exclusion<P>> },
    UndecidedAtDepth { depth: usize, diagnostics: Value },
}

impl<P: Serialize> Outcome<P> {
    pub fn tag(&self) -> &'static str {
        match self {
            Outcome::AlphaCertified { .. } => "AlphaCertified",
            Outcome::BetaCertified { .. } => "BetaCertified",
            Outcome::UndecidedAtDepth { .. } => "UndecidedAtDepth",
        }
    }

    pub fn certificate(&self) -> Value {
        match self {
            Outcome::AlphaCertified { witness, rule } => json!({ "witness": witness, "rule": rule }),
            Outcome::BetaCertified { prefix, exclusions } => json!({ "prefix": prefix, "exclusions": exclusions }),
            Outcome::UndecidedAtDepth { depth, diagnostics } => json!({ "depth": depth, "diagnostics": diagnostics }),
        }
    }

    pub fn to_json_line(&self) -> Value {
        json!({ "outcome": self.tag(), "certificate": self.certificate() })
    }

    pub fn is_alpha(&self) -> bool {
        matches!(self, Outcome::AlphaCertified { .. })
    }

    pub fn is_beta(&self) -> bool {
        matches!(self, Outcome::BetaCertified { .. })
    }

    pub fn witness(&self) -> Option<&P> {
        match self {
            Outcome::AlphaCertified { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

fn in_all<A: Arena>(arena: &A, x: &A::Point, history: &History<A::Point, A::Open>) -> Result<bool> {
    for u in history.opens() {
        if !arena.member(x, u)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Adjudicates a BM or Ch history played to `depth` rounds.
///
/// In order: α wins when the last open is an atom; β wins when the first `depth`
/// enumerated points are each excluded by some open; α wins by a threaded point
/// (β's point in Ch, the canonical point of every open in BM) that never changes;
/// otherwise the play is undecided. Exclusions are checked before threading
/// because they are exact, while a threaded point may still be excluded later.
pub fn certify<A: Arena>(arena: &A, history: &History<A::Point, A::Open>, depth: usize) -> Result<Outcome<A::Point>> {
    let undecided = Outcome::UndecidedAtDepth { depth, diagnostics: json!({ "rounds": history.round() }) };
    if history.kind == GameKind::Gruenhage {
        return Err(Error::Unsupported("Gruenhage plays are not adjudicated".into()));
    }
    let Some(last) = history.last_open() else {
        return Ok(undecided);
    };
    if arena.is_atom(last)? {
        let w = arena.pick_point(last)?;
        if in_all(arena, &w, history)? {
            return Ok(Outcome::AlphaCertified { witness: w, rule: AlphaRule::Atom });
        }
    }
    let mut exclusions = Vec::new();
    for k in 0..depth {
        let Some(p) = arena.enumerate_point(k) else { break };
        let mut hit = None;
        for (i, mv) in history.moves.iter().enumerate() {
            if let Some(u) = mv.open() {
                if !arena.member(&p, u)? {
                    hit = Some(i);
                    break;
                }
            }
        }
        match hit {
            Some(i) => exclusions.push(Exclusion { index: k, point: p, move_index: i, round: i / 2 }),
            None => break,
        }
    }
    if depth > 0 && exclusions.len() == depth {
        return Ok(Outcome::BetaCertified { prefix: depth, exclusions });
    }
    let threads: Vec<A::Point> = match history.kind {
        GameKind::StrongChoquet => history.first_moves().filter_map(Move::point).cloned().collect(),
        _ => history.opens().map(|u| arena.pick_point(u)).collect::<Result<_>>()?,
    };
    if let Some(w) = threads.first() {
        if threads.iter().all(|t| t == w) && in_all(arena, w, history)? {
            return Ok(Outcome::AlphaCertified { witness: w.clone(), rule: AlphaRule::Threaded });
        }
    }
    Ok(undecided)
}

/// Re-checks an outcome against the history by fresh membership tests.
pub fn verify_outcome<A: Arena>(arena: &A, history: &History<A::Point, A::Open>, outcome: &Outcome<A::Point>) -> Result<bool> {
    match outcome {
        Outcome::AlphaCertified { witness, .. } => in_all(arena, witness, history),
        Outcome::BetaCertified { prefix, exclusions } => {
            if exclusions.len() != *prefix {
                return Ok(false);
            }
            for (k, e) in exclusions.iter().enumerate() {
                let Some(u) = history.moves.get(e.move_index).and_then(Move::open) else {
                    return Ok(false);
                };
                if e.index != k || arena.enumerate_point(k).as_ref() != Some(&e.point) || arena.member(&e.point, u)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Outcome::UndecidedAtDepth { .. } => Ok(true),
    }
}
