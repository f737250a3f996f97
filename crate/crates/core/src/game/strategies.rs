//! Stock strategies for BM and Ch over zoo spaces.

use std::fmt;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{Arena, GameKind, History, Move, SpaceHistory, SpaceMove, Strategy};
use crate::error::{precondition, Error, Result, Side};
use crate::rational::{enumerate_rational, Rat};
use crate::topology::{BaseElement, Interval, Point, Space};

fn open_to_shrink(space: &Space, history: &SpaceHistory) -> BaseElement {
    history.last_open().cloned().unwrap_or_else(|| space.whole())
}

fn beta_move(kind: GameKind, space: &Space, point: Point, open: BaseElement) -> Result<SpaceMove> {
    match kind {
        GameKind::BanachMazur => Ok(Move::Open(open)),
        GameKind::StrongChoquet => Ok(Move::Pointed { point, open }),
        GameKind::Gruenhage => Err(Error::Unsupported(format!("no β in the Gruenhage game on {space}"))),
    }
}

/// β's last move, as (point, open); in BM the point is the canonical one.
fn beta_last(space: &Space, history: &SpaceHistory) -> Result<(Point, BaseElement)> {
    match history.last() {
        Some(Move::Pointed { point, open }) => Ok((point.clone(), open.clone())),
        Some(Move::Open(v)) => Ok((space.pick_point(v)?, v.clone())),
        _ => precondition("α asked to move before β"),
    }
}

/// β plays the canonical point of the current open and shrinks one step around it.
#[derive(Clone, Debug, Default)]
pub struct CanonicalBeta;

impl Strategy<Space> for CanonicalBeta {
    fn name(&self) -> String {
        "canonical".into()
    }

    fn side(&self) -> Side {
        Side::Beta
    }

    fn choose(&mut self, space: &Space, history: &SpaceHistory) -> Result<SpaceMove> {
        let u = open_to_shrink(space, history);
        let x = space.pick_point(&u)?;
        let v = space.refine(&x, &u, 1)?;
        beta_move(history.kind, space, x, v)
    }
}

/// α shrinks one refinement step around β's point: halves intervals, extends cylinders.
#[derive(Clone, Debug)]
pub struct RefineAlpha {
    name: String,
}

impl RefineAlpha {
    pub fn new(name: impl Into<String>) -> Self {
        RefineAlpha { name: name.into() }
    }
}

impl Default for RefineAlpha {
    fn default() -> Self {
        RefineAlpha::new("refine")
    }
}

impl Strategy<Space> for RefineAlpha {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn side(&self) -> Side {
        Side::Alpha
    }

    fn choose(&mut self, space: &Space, history: &SpaceHistory) -> Result<SpaceMove> {
        let (x, v) = beta_last(space, history)?;
        Ok(Move::Open(space.refine(&x, &v, 1)?))
    }
}

/// α repeats β's open.
#[derive(Clone, Debug, Default)]
pub struct EchoAlpha;

impl<A: Arena> Strategy<A> for EchoAlpha {
    fn name(&self) -> String {
        "identity".into()
    }

    fn side(&self) -> Side {
        Side::Alpha
    }

    fn choose(&mut self, _arena: &A, history: &History<A::Point, A::Open>) -> Result<Move<A::Point, A::Open>> {
        match history.last().and_then(Move::open) {
            Some(v) => Ok(Move::Open(v.clone())),
            None => precondition("α asked to move before β"),
        }
    }
}

/// β's diagonal strategy on ℚ: at round `n` it plays a subinterval whose closure
/// misses the `n`-th enumerated rational and whose length is below `2^-n`.
#[derive(Clone)]
pub struct DiagonalBeta {
    enumeration: Arc<dyn Fn(usize) -> Rat + Send + Sync>,
}

impl fmt::Debug for DiagonalBeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiagonalBeta").finish_non_exhaustive()
    }
}

impl Default for DiagonalBeta {
    fn default() -> Self {
        DiagonalBeta::new(enumerate_rational)
    }
}

impl DiagonalBeta {
    pub fn new(enumeration: impl Fn(usize) -> Rat + Send + Sync + 'static) -> Self {
        DiagonalBeta { enumeration: Arc::new(enumeration) }
    }

    /// The round-`n` interval inside `within`.
    pub fn step(&self, within: &Interval, n: usize) -> Interval {
        let base = if *within == Interval::whole() {
            Interval::bounded(Rat::zero(), Rat::one()).expect("0 < 1")
        } else {
            within.bounded_part()
        };
        let (lo, hi) = (base.lo.clone().expect("bounded"), base.hi.clone().expect("bounded"));
        let q = (self.enumeration)(n);
        let (mut lo, mut hi) = (lo, hi);
        if base.closure_contains(&q) {
            let left = &q - &lo;
            let right = &hi - &q;
            if left >= right {
                // keep (lo, q), pull the right end away from q
                hi = &q - &(&left / &Rat::integer(4));
            } else {
                lo = &q + &(&right / &Rat::integer(4));
            }
        }
        let cap = Rat::dyadic(n as u32);
        if &hi - &lo >= cap {
            hi = &lo + &Rat::dyadic(n as u32 + 1);
        }
        Interval { lo: Some(lo), hi: Some(hi) }
    }
}

impl Strategy<Space> for DiagonalBeta {
    fn name(&self) -> String {
        "diagonal".into()
    }

    fn side(&self) -> Side {
        Side::Beta
    }

    fn choose(&mut self, space: &Space, history: &SpaceHistory) -> Result<SpaceMove> {
        let Space::Rationals = space else {
            return precondition(format!("the diagonal strategy plays on rationals, not {space}"));
        };
        let BaseElement::Interval(within) = open_to_shrink(space, history) else { unreachable!("rational base") };
        let i = self.step(&within, history.round());
        let x = Point::Rational(i.canonical_point());
        beta_move(history.kind, space, x, BaseElement::Interval(i))
    }
}

/// The diagonal β strategy for an enumeration of ℚ.
pub fn bm_rationals_beta_strategy(enumeration: impl Fn(usize) -> Rat + Send + Sync + 'static) -> DiagonalBeta {
    DiagonalBeta::new(enumeration)
}

/// α's tactic on `ℚ ∪ D`: answer `{x}` to a point of `D`, otherwise return β's open.
#[derive(Clone, Debug, Default)]
pub struct RemarkTactic;

pub fn remark_tactic() -> RemarkTactic {
    RemarkTactic
}

impl Strategy<Space> for RemarkTactic {
    fn name(&self) -> String {
        "remark".into()
    }

    fn side(&self) -> Side {
        Side::Alpha
    }

    fn choose(&mut self, space: &Space, history: &SpaceHistory) -> Result<SpaceMove> {
        if !matches!(space, Space::Remark(_)) || history.kind != GameKind::StrongChoquet {
            return precondition(format!("the remark tactic plays Ch on remark-qd, not {} on {space}", history.kind));
        }
        let (x, v) = beta_last(space, history)?;
        Ok(Move::Open(match x {
            Point::Isolated(d) => BaseElement::Singleton(d),
            _ => v,
        }))
    }
}

/// β on spaces with rational points: keeps α's open and varies a rational point in it.
#[derive(Clone, Debug, Default)]
pub struct RationalWalkBeta;

impl Strategy<Space> for RationalWalkBeta {
    fn name(&self) -> String {
        "rational-walk".into()
    }

    fn side(&self) -> Side {
        Side::Beta
    }

    fn choose(&mut self, space: &Space, history: &SpaceHistory) -> Result<SpaceMove> {
        let u = open_to_shrink(space, history);
        let interval = match &u {
            BaseElement::Interval(i) | BaseElement::CoFinite { interval: i, .. } => i,
            _ => return precondition(format!("{u:?} has no rational part")),
        };
        let n = history.round() as u64;
        let x = Point::Rational(interval.fraction_point(1 + n % 3, 4));
        beta_move(history.kind, space, x, u)
    }
}

/// β choosing uniformly seeded random legal moves.
#[derive(Clone, Debug)]
pub struct RandomBeta {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomBeta {
    pub fn new(seed: u64) -> Self {
        RandomBeta { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Strategy<Space> for RandomBeta {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn side(&self) -> Side {
        Side::Beta
    }

    fn choose(&mut self, space: &Space, history: &SpaceHistory) -> Result<SpaceMove> {
        let u = open_to_shrink(space, history);
        match history.kind {
            GameKind::BanachMazur => Ok(Move::Open(space.random_subelement(&u, &mut self.rng)?)),
            _ => {
                let x = space.random_point(&u, &mut self.rng)?;
                let v = space.random_neighborhood(&x, &u, &mut self.rng)?;
                beta_move(history.kind, space, x, v)
            }
        }
    }
}

/// α choosing seeded random legal replies.
#[derive(Clone, Debug)]
pub struct RandomAlpha {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomAlpha {
    pub fn new(seed: u64) -> Self {
        RandomAlpha { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Strategy<Space> for RandomAlpha {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn side(&self) -> Side {
        Side::Alpha
    }

    fn choose(&mut self, space: &Space, history: &SpaceHistory) -> Result<SpaceMove> {
        Ok(Move::Open(match history.last() {
            Some(Move::Open(v)) => space.random_subelement(v, &mut self.rng)?,
            Some(Move::Pointed { point, open }) => space.random_neighborhood(point, open, &mut self.rng)?,
            _ => return precondition("α asked to move before β"),
        }))
    }
}

/// Replays a fixed list of moves for one side.
#[derive(Clone, Debug)]
pub struct Scripted<P, O> {
    side: Side,
    moves: Vec<Move<P, O>>,
}

impl<P, O> Scripted<P, O> {
    pub fn new(side: Side, moves: Vec<Move<P, O>>) -> Self {
        Scripted { side, moves }
    }
}

impl<A: Arena> Strategy<A> for Scripted<A::Point, A::Open> {
    fn name(&self) -> String {
        "scripted".into()
    }

    fn side(&self) -> Side {
        self.side
    }

    fn choose(&mut self, _arena: &A, history: &History<A::Point, A::Open>) -> Result<Move<A::Point, A::Open>> {
        let i = history.round();
        match self.moves.get(i) {
            Some(m) => Ok(m.clone()),
            None => precondition(format!("script for {} has only {} moves", self.side, self.moves.len())),
        }
    }
}
