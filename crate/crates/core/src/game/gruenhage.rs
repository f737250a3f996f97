//! The Gruenhage game at a point: Player I plays neighborhoods, Player II points.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{play_rounds, History, Move, Outcome, SpaceHistory, SpaceMove, SpaceTranscript, Strategy, Transcript};
use crate::error::{precondition, Result, Side};
use crate::topology::{BaseElement, Point, Space, WPointStrategy};

/// Deepest base index tracked by the convergence diagnostic.
const TAIL_CAP: u32 = 64;

/// Player I following a W-point responder.
#[derive(Clone, Debug)]
pub struct WPointPlayer {
    pub w: WPointStrategy,
}

impl Strategy<Space> for WPointPlayer {
    fn name(&self) -> String {
        format!("w-point:{}", self.w.center())
    }

    fn side(&self) -> Side {
        Side::PlayerI
    }

    fn choose(&mut self, _space: &Space, history: &SpaceHistory) -> Result<SpaceMove> {
        Ok(Move::Open(self.w.respond_after(history.reply_moves().count())?))
    }
}

fn current_neighborhood(history: &SpaceHistory) -> Result<&BaseElement> {
    match history.last() {
        Some(Move::Open(u)) => Ok(u),
        _ => precondition("Player II asked to move before Player I"),
    }
}

/// Player II always replying with the center itself.
#[derive(Clone, Debug, Default)]
pub struct CenterReplier;

impl Strategy<Space> for CenterReplier {
    fn name(&self) -> String {
        "center".into()
    }

    fn side(&self) -> Side {
        Side::PlayerII
    }

    fn choose(&mut self, _space: &Space, history: &SpaceHistory) -> Result<SpaceMove> {
        current_neighborhood(history)?;
        match &history.center {
            Some(c) => Ok(Move::Point(c.clone())),
            None => precondition("Gruenhage history without a center"),
        }
    }
}

/// Player II replying as far from the center as the neighborhood allows.
#[derive(Clone, Debug, Default)]
pub struct EdgeReplier;

impl Strategy<Space> for EdgeReplier {
    fn name(&self) -> String {
        "edge".into()
    }

    fn side(&self) -> Side {
        Side::PlayerII
    }

    fn choose(&mut self, space: &Space, history: &SpaceHistory) -> Result<SpaceMove> {
        let u = current_neighborhood(history)?;
        let x = match u {
            BaseElement::Interval(i) | BaseElement::CoFinite { interval: i, .. } => {
                Point::Rational(i.fraction_point(1023, 1024))
            }
            _ => space.sample_points(u, 8)?.pop().expect("nonempty sample"),
        };
        Ok(Move::Point(x))
    }
}

/// Player II replying with seeded random points.
#[derive(Clone, Debug)]
pub struct RandomReplier {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RandomReplier {
    pub fn new(seed: u64) -> Self {
        RandomReplier { seed, rng: ChaCha8Rng::seed_from_u64(seed) }
    }
}

impl Strategy<Space> for RandomReplier {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn side(&self) -> Side {
        Side::PlayerII
    }

    fn choose(&mut self, space: &Space, history: &SpaceHistory) -> Result<SpaceMove> {
        let u = current_neighborhood(history)?.clone();
        Ok(Move::Point(space.random_point(&u, &mut self.rng)?))
    }
}

/// For each `k`, the deepest base index `j ≤ 64` at `x` whose member contains
/// every reply from `k` on.
pub fn tail_containment(space: &Space, x: &Point, replies: &[Point]) -> Result<Vec<u32>> {
    let mut levels = Vec::with_capacity(replies.len());
    for r in replies {
        let mut j = 0;
        while j < TAIL_CAP && space.member(r, &space.neighborhood_base_member(x, j + 1)?)? {
            j += 1;
        }
        levels.push(j);
    }
    let mut tail = vec![TAIL_CAP; replies.len()];
    let mut running = TAIL_CAP;
    for k in (0..replies.len()).rev() {
        running = running.min(levels[k]);
        tail[k] = running;
    }
    Ok(tail)
}

/// Plays the Gruenhage game at `x` and records the convergence diagnostic.
/// The outcome is always undecided: convergence is a statement about the infinite play.
pub fn gruenhage_run<R: Strategy<Space> + ?Sized>(
    space: &Space,
    x: &Point,
    w: &WPointStrategy,
    replier: &mut R,
    depth: usize,
) -> Result<SpaceTranscript> {
    if w.center() != x || w.space() != space {
        return precondition(format!("W-point strategy is centered at {} on {}, not {x} on {space}", w.center(), w.space()));
    }
    let mut player = WPointPlayer { w: w.clone() };
    let play = play_rounds(space, History::with_center(super::GameKind::Gruenhage, x.clone()), &mut player, replier, depth);
    if let Some(e) = play.error {
        return Err(e);
    }
    let replies: Vec<Point> = play.history.reply_moves().filter_map(Move::point).cloned().collect();
    let tail = tail_containment(space, x, &replies)?;
    Ok(Transcript {
        kind: super::GameKind::Gruenhage,
        arena: space.name(),
        depth,
        first: player.name(),
        second: replier.name(),
        history: play.history,
        outcome: Outcome::UndecidedAtDepth { depth, diagnostics: json!({ "tail_containment": tail }) },
    })
}
