//! Referee-checked Banach-Mazur, strong Choquet and Gruenhage games.
//!
//! A game is played inside an [`Arena`]: anything with decidable inclusion and
//! membership. Every zoo [`Space`] is an arena; the Krom and product arenas of
//! the transfer module are others. Each move is validated by a [`Referee`] before
//! it is appended, and a finished play is adjudicated by certificate search.
//!
//! Move order: in BM and Ch, β opens each round and α replies; in the Gruenhage
//! game Player I plays a neighborhood and Player II a point inside it.

mod certify;
mod gruenhage;
pub mod registry;
mod strategies;

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub use certify::{certify, verify_outcome, AlphaRule, Exclusion, Outcome};
pub use gruenhage::{gruenhage_run, tail_containment, CenterReplier, EdgeReplier, RandomReplier, WPointPlayer};
pub use strategies::{
    bm_rationals_beta_strategy, remark_tactic, CanonicalBeta, DiagonalBeta, EchoAlpha, RandomAlpha, RandomBeta,
    RationalWalkBeta, RefineAlpha, RemarkTactic, Scripted,
};

use crate::error::{domain, Error, Result, Side};
use crate::topology::{BaseElement, FiniteSet, Point, Space};

/// A playing field: opens and points with decidable inclusion and membership.
pub trait Arena {
    type Point: Clone + fmt::Debug + PartialEq + Serialize;
    type Open: Clone + fmt::Debug + PartialEq + Serialize;

    fn label(&self) -> String;
    fn whole(&self) -> Self::Open;
    fn contains(&self, inner: &Self::Open, outer: &Self::Open) -> Result<bool>;
    fn member(&self, x: &Self::Point, u: &Self::Open) -> Result<bool>;
    fn pick_point(&self, u: &Self::Open) -> Result<Self::Point>;

    /// Whether every nonempty open inside `u` equals `u`.
    fn is_atom(&self, _u: &Self::Open) -> Result<bool> {
        Ok(false)
    }

    /// A fixed enumeration of points, used for exclusion certificates.
    fn enumerate_point(&self, _k: usize) -> Option<Self::Point> {
        None
    }
}

impl Arena for Space {
    type Point = Point;
    type Open = BaseElement;

    fn label(&self) -> String {
        self.name()
    }

    fn whole(&self) -> BaseElement {
        Space::whole(self)
    }

    fn contains(&self, inner: &BaseElement, outer: &BaseElement) -> Result<bool> {
        Space::contains(self, inner, outer)
    }

    fn member(&self, x: &Point, u: &BaseElement) -> Result<bool> {
        Space::member(self, x, u)
    }

    fn pick_point(&self, u: &BaseElement) -> Result<Point> {
        Space::pick_point(self, u)
    }

    fn is_atom(&self, u: &BaseElement) -> Result<bool> {
        Space::is_atom(self, u)
    }

    fn enumerate_point(&self, k: usize) -> Option<Point> {
        Space::enumerate_point(self, k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    BanachMazur,
    StrongChoquet,
    Gruenhage,
}

impl GameKind {
    /// The side making move number `index` (0-based).
    pub fn side_of(self, index: usize) -> Side {
        match (self, index % 2) {
            (GameKind::Gruenhage, 0) => Side::PlayerI,
            (GameKind::Gruenhage, _) => Side::PlayerII,
            (_, 0) => Side::Beta,
            _ => Side::Alpha,
        }
    }

    pub fn sides(self) -> (Side, Side) {
        (self.side_of(0), self.side_of(1))
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GameKind::BanachMazur => "bm",
            GameKind::StrongChoquet => "ch",
            GameKind::Gruenhage => "gruenhage",
        })
    }
}

impl std::str::FromStr for GameKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<GameKind> {
        match s {
            "bm" | "banach-mazur" | "banach_mazur" => Ok(GameKind::BanachMazur),
            "ch" | "strong-choquet" | "strong_choquet" => Ok(GameKind::StrongChoquet),
            "gruenhage" | "w" => Ok(GameKind::Gruenhage),
            _ => Err(Error::Parse(format!("unknown game {s:?} (expected bm, ch or gruenhage)"))),
        }
    }
}

/// One move: an open set (BM, α in Ch, Player I), a pointed open (β in Ch) or a
/// point (Player II).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Move<P, O> {
    Open(O),
    Pointed { point: P, open: O },
    Point(P),
}

impl<P, O> Move<P, O> {
    pub fn open(&self) -> Option<&O> {
        match self {
            Move::Open(o) | Move::Pointed { open: o, .. } => Some(o),
            Move::Point(_) => None,
        }
    }

    pub fn point(&self) -> Option<&P> {
        match self {
            Move::Pointed { point, .. } | Move::Point(point) => Some(point),
            Move::Open(_) => None,
        }
    }

    fn shape(&self) -> &'static str {
        match self {
            Move::Open(_) => "open",
            Move::Pointed { .. } => "pointed open",
            Move::Point(_) => "point",
        }
    }
}

pub type SpaceMove = Move<Point, BaseElement>;

/// The moves played so far, alternating starting with β (or Player I).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct History<P, O> {
    pub kind: GameKind,
    pub moves: Vec<Move<P, O>>,
    /// The point Player I is trying to converge to (Gruenhage only).
    pub center: Option<P>,
}

pub type SpaceHistory = History<Point, BaseElement>;

impl<P: Clone, O: Clone> History<P, O> {
    pub fn new(kind: GameKind) -> Self {
        History { kind, moves: Vec::new(), center: None }
    }

    pub fn with_center(kind: GameKind, center: P) -> Self {
        History { kind, moves: Vec::new(), center: Some(center) }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Current round: number of completed move pairs.
    pub fn round(&self) -> usize {
        self.moves.len() / 2
    }

    pub fn side_to_move(&self) -> Side {
        self.kind.side_of(self.moves.len())
    }

    /// The most recent open set, from either side.
    pub fn last_open(&self) -> Option<&O> {
        self.moves.iter().rev().find_map(Move::open)
    }

    pub fn opens(&self) -> impl Iterator<Item = &O> {
        self.moves.iter().filter_map(Move::open)
    }

    /// Moves made by the side that opens each round (β or Player I).
    pub fn first_moves(&self) -> impl Iterator<Item = &Move<P, O>> {
        self.moves.iter().step_by(2)
    }

    /// Moves made by the replying side (α or Player II).
    pub fn reply_moves(&self) -> impl Iterator<Item = &Move<P, O>> {
        self.moves.iter().skip(1).step_by(2)
    }

    /// The last move, if it was made by the opponent of the side to move.
    pub fn last(&self) -> Option<&Move<P, O>> {
        self.moves.last()
    }

    pub fn truncated(&self, len: usize) -> Self {
        History { kind: self.kind, moves: self.moves[..len.min(self.moves.len())].to_vec(), center: self.center.clone() }
    }
}

/// Why `mv` cannot follow `history`, or `None` when it is legal.
///
/// Wrong-shaped moves and elements from another space are domain errors.
pub fn check_move<A: Arena>(arena: &A, history: &History<A::Point, A::Open>, mv: &Move<A::Point, A::Open>) -> Result<Option<String>> {
    let index = history.moves.len();
    let side = history.kind.side_of(index);
    let expected = match (history.kind, side) {
        (GameKind::StrongChoquet, Side::Beta) => "pointed open",
        (GameKind::Gruenhage, Side::PlayerII) => "point",
        _ => "open",
    };
    if mv.shape() != expected {
        return domain(format!("{side} must play a {expected} in {}, got a {}", history.kind, mv.shape()));
    }
    let prev = history.moves.last();
    let reason = match (history.kind, mv) {
        (GameKind::BanachMazur, Move::Open(u)) => match prev.and_then(Move::open) {
            Some(p) if !arena.contains(u, p)? => Some(format!("{u:?} is not inside the previous open {p:?}")),
            _ => {
                arena.contains(u, u)?;
                None
            }
        },
        (GameKind::StrongChoquet, Move::Pointed { point, open }) => {
            if !arena.member(point, open)? {
                Some(format!("{point:?} is not in {open:?}"))
            } else {
                match prev.and_then(Move::open) {
                    Some(p) if !arena.contains(open, p)? => Some(format!("{open:?} is not inside α's open {p:?}")),
                    _ => None,
                }
            }
        }
        (GameKind::StrongChoquet, Move::Open(u)) => {
            let Some(Move::Pointed { point, open }) = prev else { unreachable!("β moved last") };
            if !arena.member(point, u)? {
                Some(format!("{u:?} does not contain β's point {point:?}"))
            } else if !arena.contains(u, open)? {
                Some(format!("{u:?} is not inside β's open {open:?}"))
            } else {
                None
            }
        }
        (GameKind::Gruenhage, Move::Open(u)) => {
            let Some(c) = &history.center else { return domain("Gruenhage history without a center") };
            if arena.member(c, u)? {
                None
            } else {
                Some(format!("{u:?} is not a neighborhood of the center {c:?}"))
            }
        }
        (GameKind::Gruenhage, Move::Point(x)) => {
            let Some(Move::Open(u)) = prev else { unreachable!("Player I moved last") };
            if arena.member(x, u)? {
                None
            } else {
                Some(format!("{x:?} is not in Player I's neighborhood {u:?}"))
            }
        }
        _ => unreachable!("shape checked"),
    };
    Ok(reason)
}

/// Whether appending `mv` keeps `history` legal.
pub fn legal_move<A: Arena>(arena: &A, history: &History<A::Point, A::Open>, mv: &Move<A::Point, A::Open>) -> Result<bool> {
    Ok(check_move(arena, history, mv)?.is_none())
}

/// Validates and records moves one at a time.
#[derive(Debug)]
pub struct Referee<'a, A: Arena> {
    arena: &'a A,
    history: History<A::Point, A::Open>,
}

impl<'a, A: Arena> Referee<'a, A> {
    pub fn new(arena: &'a A, history: History<A::Point, A::Open>) -> Self {
        Referee { arena, history }
    }

    pub fn history(&self) -> &History<A::Point, A::Open> {
        &self.history
    }

    pub fn into_history(self) -> History<A::Point, A::Open> {
        self.history
    }

    /// Appends `mv` if legal; otherwise reports an illegal move by the side to move.
    pub fn submit(&mut self, mv: Move<A::Point, A::Open>) -> Result<()> {
        let side = self.history.side_to_move();
        let round = self.history.round();
        let illegal = |reason: String| Error::IllegalStrategyMove { side, round, reason };
        match check_move(self.arena, &self.history, &mv) {
            Ok(None) => {
                self.history.moves.push(mv);
                Ok(())
            }
            Ok(Some(reason)) => Err(illegal(reason)),
            Err(Error::Domain(reason)) => Err(illegal(reason)),
            Err(e) => Err(e),
        }
    }
}

/// A deterministic move chooser. Any randomness lives in the strategy's own
/// seeded state, so equal inputs give equal plays.
pub trait Strategy<A: Arena> {
    fn name(&self) -> String;
    fn side(&self) -> Side;
    fn choose(&mut self, arena: &A, history: &History<A::Point, A::Open>) -> Result<Move<A::Point, A::Open>>;
}

impl<A: Arena, S: Strategy<A> + ?Sized> Strategy<A> for Box<S> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn side(&self) -> Side {
        (**self).side()
    }

    fn choose(&mut self, arena: &A, history: &History<A::Point, A::Open>) -> Result<Move<A::Point, A::Open>> {
        (**self).choose(arena, history)
    }
}

/// A play cut short by an error keeps the legal prefix for inspection.
#[derive(Debug)]
pub struct PartialPlay<P, O> {
    pub history: History<P, O>,
    pub error: Option<Error>,
}

/// Plays `depth` rounds of `first` against `second`, stopping at the first error.
pub fn play_rounds<A, S1, S2>(
    arena: &A,
    history: History<A::Point, A::Open>,
    first: &mut S1,
    second: &mut S2,
    depth: usize,
) -> PartialPlay<A::Point, A::Open>
where
    A: Arena,
    S1: Strategy<A> + ?Sized,
    S2: Strategy<A> + ?Sized,
{
    let (s1, s2) = history.kind.sides();
    let mut referee = Referee::new(arena, history);
    let mut error = None;
    for side in [(first.side(), s1), (second.side(), s2)] {
        if side.0 != side.1 {
            error = Some(Error::Precondition(format!(
                "{} strategy supplied where {} moves in {}",
                side.0,
                side.1,
                referee.history.kind
            )));
        }
    }
    if error.is_none() {
        'rounds: for _ in 0..depth {
            for turn in 0..2 {
                let mv = if turn == 0 {
                    first.choose(arena, referee.history())
                } else {
                    second.choose(arena, referee.history())
                };
                if let Err(e) = mv.and_then(|mv| referee.submit(mv)) {
                    error = Some(e);
                    break 'rounds;
                }
            }
        }
    }
    PartialPlay { history: referee.into_history(), error }
}

/// A referee-validated finite play with its adjudicated outcome.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Transcript<P, O> {
    pub kind: GameKind,
    pub arena: String,
    pub depth: usize,
    pub first: String,
    pub second: String,
    pub history: History<P, O>,
    pub outcome: Outcome<P>,
}

pub type SpaceTranscript = Transcript<Point, BaseElement>;

impl<P: Serialize + Clone, O: Serialize + Clone> Transcript<P, O> {
    /// Number of recorded rounds (a round is a pair of moves).
    pub fn rounds(&self) -> usize {
        self.history.round()
    }

    /// One JSON line per move, then the outcome line.
    pub fn to_jsonl(&self) -> String {
        let mut out = history_jsonl(&self.history);
        out.push_str(&self.outcome.to_json_line().to_string());
        out.push('\n');
        out
    }
}

/// JSON lines for the moves of a history (no terminator).
pub fn history_jsonl<P: Serialize + Clone, O: Serialize + Clone>(history: &History<P, O>) -> String {
    let mut out = String::new();
    for (i, mv) in history.moves.iter().enumerate() {
        let line = json!({
            "round": i / 2,
            "side": history.kind.side_of(i),
            "move": mv,
            "legal": true,
        });
        out.push_str(&line.to_string());
        out.push('\n');
    }
    out
}

/// The line closing a trace that was cut short by an error.
pub fn error_line(err: &Error) -> Value {
    json!({ "outcome": "error", "certificate": { "error": err.to_string() } })
}

/// Plays `depth` rounds of a BM or Ch game and adjudicates the result.
pub fn run_game<A, B, C>(kind: GameKind, arena: &A, beta: &mut B, alpha: &mut C, depth: usize) -> Result<Transcript<A::Point, A::Open>>
where
    A: Arena,
    B: Strategy<A> + ?Sized,
    C: Strategy<A> + ?Sized,
{
    if kind == GameKind::Gruenhage {
        return Err(Error::Unsupported("Gruenhage games need a center; use gruenhage_run".into()));
    }
    let play = play_rounds(arena, History::new(kind), beta, alpha, depth);
    if let Some(e) = play.error {
        return Err(e);
    }
    let outcome = certify(arena, &play.history, depth)?;
    Ok(Transcript {
        kind,
        arena: arena.label(),
        depth,
        first: beta.name(),
        second: alpha.name(),
        history: play.history,
        outcome,
    })
}

/// For a finite space: whether the intersection of all dense opens is dense.
/// Always true (finite spaces are Baire); it exercises the lattice machinery.
pub fn finite_space_baire_oracle(space: &Space) -> Result<bool> {
    let Space::Finite(t) = space else {
        return Err(Error::Unsupported(format!("{space} is not a finite space")));
    };
    let meet = t.dense_opens().iter().fold(t.full(), |acc, d| FiniteSet(acc.0 & d.0));
    Ok(t.nonempty_opens().all(|u| u.0 & meet.0 != 0))
}
