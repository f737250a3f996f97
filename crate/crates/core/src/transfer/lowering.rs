//! Lowering a β strategy in `Ch(K⁰_B(X))` to one in `Ch(X)` for a space with a
//! base of countable order, and gluing a surviving `Ch(X)` play back into a Krom
//! point that survives the σ*-play.

use serde::Serialize;

use crate::error::{precondition, Error, Result, Side};
use crate::game::{check_move, play_rounds, Arena, GameKind, History, Move, SpaceHistory, Strategy};
use crate::krom::{basic_subset_in, k0_certify, DecreasingSeq, K0Certificate, KromPoint, Tail};
use crate::topology::{BaseElement, Point, Space};

/// The subspace `K⁰_B(X)` of Krom points whose entries shrink onto their witness,
/// with basic opens `[f] ∩ K⁰`. Membership certifies `k0_depth` base members.
#[derive(Clone, Debug, PartialEq)]
pub struct KromChArena {
    pub space: Space,
    pub k0_depth: usize,
    pub fuel: usize,
}

impl KromChArena {
    pub fn new(space: Space, k0_depth: usize, fuel: usize) -> Self {
        KromChArena { space, k0_depth, fuel }
    }
}

/// Whether the tail of `f`, through any splices, is eventually constant.
fn ends_in_repeat(f: &KromPoint) -> bool {
    match f.tail() {
        Tail::Repeat => true,
        Tail::Splice(inner) => ends_in_repeat(inner),
        Tail::ShrinkToWitness => false,
    }
}

impl Arena for KromChArena {
    type Point = KromPoint;
    type Open = DecreasingSeq;

    fn label(&self) -> String {
        format!("K0({})", self.space)
    }

    fn whole(&self) -> DecreasingSeq {
        DecreasingSeq::singleton(&self.space, self.space.whole()).expect("whole space is basic")
    }

    fn contains(&self, inner: &DecreasingSeq, outer: &DecreasingSeq) -> Result<bool> {
        basic_subset_in(&self.space, inner, outer)
    }

    fn member(&self, f: &KromPoint, u: &DecreasingSeq) -> Result<bool> {
        if *f.space() != self.space {
            return Err(Error::Domain(format!("Krom point of {} in {}", f.space(), self.label())));
        }
        if !f.in_basic(u)? {
            return Ok(false);
        }
        // a shrinking tail always certifies given room, so failing one is a fuel stop
        match k0_certify(f, self.k0_depth, self.fuel) {
            Ok(_) => Ok(true),
            Err(Error::NotCertifiedAtDepth(_)) if ends_in_repeat(f) => Ok(false),
            Err(Error::NotCertifiedAtDepth(k)) => {
                Err(Error::Fuel(format!("K0 certificate stops at depth {k} within {} entries", self.fuel)))
            }
            Err(e) => Err(e),
        }
    }

    fn pick_point(&self, u: &DecreasingSeq) -> Result<KromPoint> {
        KromPoint::canonical(&self.space, u.clone())
    }

    fn is_atom(&self, u: &DecreasingSeq) -> Result<bool> {
        self.space.is_atom(u.last())
    }
}

/// σ* in `Ch(K⁰_B(X))`: below α's stem `g` play `f = g ⌢ (shrinking to the
/// canonical point)` with the open `[f↾(|g|+1)]`.
#[derive(Clone, Debug, Default)]
pub struct CanonicalKromChBeta;

impl Strategy<KromChArena> for CanonicalKromChBeta {
    fn name(&self) -> String {
        "krom-ch-canonical".into()
    }

    fn side(&self) -> Side {
        Side::Beta
    }

    fn choose(&mut self, arena: &KromChArena, h: &History<KromPoint, DecreasingSeq>) -> Result<Move<KromPoint, DecreasingSeq>> {
        let g = h.last_open().cloned().unwrap_or_else(|| arena.whole());
        let f = KromPoint::canonical(&arena.space, g.clone())?;
        let open = f.restrict(g.len() + 1)?;
        Ok(Move::Pointed { point: f, open })
    }
}

/// One round of the lowered strategy.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerRound {
    pub f: KromPoint,
    pub m: usize,
    pub x: Point,
    pub v: BaseElement,
    /// `f(m−1)` was a singleton and was played as is.
    pub singleton: bool,
    /// The index `n ≥ m` with `f(n) ⊆ U`, once α has replied.
    pub n: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerTrace {
    pub rounds: Vec<LowerRound>,
    pub krom: History<KromPoint, DecreasingSeq>,
}

/// σ lowered from σ*.
#[derive(Clone, Debug)]
pub struct BcoChLower<S> {
    sigma_star: S,
    star: KromChArena,
}

pub fn bco_ch_lower<S: Strategy<KromChArena>>(sigma_star: S, star: KromChArena) -> Result<BcoChLower<S>> {
    if !star.space.flags().has_bco {
        return Err(Error::Unsupported(format!("{} has no base of countable order", star.space)));
    }
    Ok(BcoChLower { sigma_star, star })
}

/// A base element around `x` strictly inside `last`.
fn strictly_below(space: &Space, x: &Point, last: &BaseElement) -> Result<BaseElement> {
    for step in 1..=64 {
        let cand = space.refine(x, last, step)?;
        if space.contains(&cand, last)? && cand != *last {
            return Ok(cand);
        }
    }
    Err(Error::Unsupported(format!("no base element around {x} is a proper subset of {last:?}")))
}

impl<S: Strategy<KromChArena>> BcoChLower<S> {
    pub fn star(&self) -> &KromChArena {
        &self.star
    }

    /// Replays a `Ch(X)` play through σ*, ending with σ's current move.
    pub fn replay(&mut self, arena: &Space, h: &SpaceHistory) -> Result<LowerTrace> {
        if *arena != self.star.space || h.kind != GameKind::StrongChoquet {
            return precondition("the lowered strategy plays Ch on its own space");
        }
        if !h.len().is_multiple_of(2) {
            return precondition("β asked to move out of turn");
        }
        let space = self.star.space.clone();
        let r = h.round();
        let mut hs = History::new(GameKind::StrongChoquet);
        let mut rounds = Vec::with_capacity(r + 1);
        for k in 0..=r {
            let mv = self.sigma_star.choose(&self.star, &hs)?;
            if let Some(reason) = check_move(&self.star, &hs, &mv)? {
                return Err(Error::IllegalStrategyMove { side: Side::Beta, round: k, reason });
            }
            let Move::Pointed { point: f, open: vstar } = &mv else { unreachable!("shape checked") };
            let m = vstar.len();
            let x = f.witness().clone();
            let last = f.get(m - 1)?;
            let (v, singleton) = if space.is_singleton(&last)? {
                (last, true)
            } else {
                (strictly_below(&space, &x, &last)?, false)
            };
            let mut round = LowerRound { f: f.clone(), m, x, v, singleton, n: None };
            hs.moves.push(mv);
            if k < r {
                let expected = Move::Pointed { point: round.x.clone(), open: round.v.clone() };
                if h.moves[2 * k] != expected {
                    return precondition(format!("round {k} of the history is not a move of the lowered strategy"));
                }
                let u = h.moves[2 * k + 1].open().expect("α plays opens");
                let mut found = None;
                for n in m..m + self.star.fuel {
                    if space.contains(&round.f.get(n)?, u)? {
                        found = Some(n);
                        break;
                    }
                }
                let Some(n) = found else {
                    return Err(Error::Fuel(format!("round {k}: no f({}..{}) inside α's open", m, m + self.star.fuel)));
                };
                round.n = Some(n);
                let reply = Move::Open(round.f.restrict(n + 1)?);
                if let Some(reason) = check_move(&self.star, &hs, &reply)? {
                    return Err(Error::InvariantViolation(format!("lowered reply of round {k} is illegal: {reason}")));
                }
                hs.moves.push(reply);
            }
            rounds.push(round);
        }
        Ok(LowerTrace { rounds, krom: hs })
    }
}

impl<S: Strategy<KromChArena>> Strategy<Space> for BcoChLower<S> {
    fn name(&self) -> String {
        format!("bco-lower({})", self.sigma_star.name())
    }

    fn side(&self) -> Side {
        Side::Beta
    }

    fn choose(&mut self, arena: &Space, h: &SpaceHistory) -> Result<Move<Point, BaseElement>> {
        let trace = self.replay(arena, h)?;
        let last = trace.rounds.last().expect("at least one round");
        Ok(Move::Pointed { point: last.x.clone(), open: last.v.clone() })
    }
}

/// The glued Krom point of a surviving play and the checks made on it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlueReport {
    pub stem: DecreasingSeq,
    pub ms: Vec<usize>,
    pub ns: Vec<Option<usize>>,
    /// `f↾mₖ = fₖ↾mₖ` for every round.
    pub law: bool,
    /// Every step of the stem is a proper inclusion.
    pub strictly_decreasing: bool,
    /// The stem becomes a constant singleton after its strict part.
    pub singleton_stabilized: bool,
    /// Each non-singleton round played `V ⊊ f(m−1)`.
    pub strict_rounds: bool,
    pub survives: bool,
    pub round_certificates: Vec<K0Certificate>,
    pub certificate: K0Certificate,
}

impl GlueReport {
    pub fn ok(&self) -> bool {
        self.law && (self.strictly_decreasing || self.singleton_stabilized) && self.strict_rounds && self.survives
    }
}

/// `f(p) = fₖ(p)` for `m_{k−1} ≤ p < mₖ`, continued by shrinking onto `y`.
pub fn glue(star: &KromChArena, trace: &LowerTrace, y: &Point, depth: usize) -> Result<GlueReport> {
    let space = &star.space;
    let mut elems = Vec::new();
    let mut prev_m = 0;
    for (k, r) in trace.rounds.iter().enumerate() {
        if r.m <= prev_m && k > 0 {
            return Err(Error::InvariantViolation(format!("m_{k} = {} does not exceed m_{}", r.m, k - 1)));
        }
        for p in prev_m..r.m {
            elems.push(r.f.get(p)?);
        }
        prev_m = r.m;
    }
    let stem = DecreasingSeq::new(space, elems).map_err(|e| Error::InvariantViolation(format!("glued stem: {e}")))?;
    let mut law = true;
    for r in &trace.rounds {
        law &= stem.restrict(r.m)? == r.f.restrict(r.m)?;
    }
    let steps: Vec<(bool, bool)> = stem
        .elems()
        .windows(2)
        .map(|w| Ok((w[1] != w[0], space.is_singleton(&w[1])?)))
        .collect::<Result<_>>()?;
    let strictly_decreasing = steps.iter().all(|s| s.0);
    let first_equal = steps.iter().position(|s| !s.0).unwrap_or(steps.len());
    let singleton_stabilized = steps[first_equal..].iter().all(|s| !s.0 && s.1) && first_equal < steps.len();
    let mut strict_rounds = true;
    for r in &trace.rounds {
        if !r.singleton {
            strict_rounds &= r.v != r.f.get(r.m - 1)? && space.contains(&r.v, &r.f.get(r.m - 1)?)?;
        }
    }
    let point = KromPoint::shrink(space, stem.clone(), y.clone()).map_err(|e| Error::InvariantViolation(format!("glued point: {e}")))?;
    let mut survives = true;
    for u in trace.krom.opens() {
        survives &= star.member(&point, u)?;
    }
    let round_certificates = trace
        .rounds
        .iter()
        .map(|r| k0_certify(&r.f, depth, star.fuel))
        .collect::<Result<Vec<_>>>()?;
    let certificate = k0_certify(&point, depth, star.fuel)?;
    Ok(GlueReport {
        stem,
        ms: trace.rounds.iter().map(|r| r.m).collect(),
        ns: trace.rounds.iter().map(|r| r.n).collect(),
        law,
        strictly_decreasing,
        singleton_stabilized,
        strict_rounds,
        survives,
        round_certificates,
        certificate,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LoweringReport {
    pub space: String,
    pub depth: usize,
    pub alpha: String,
    pub play: SpaceHistory,
    pub witness: Point,
    pub glue: GlueReport,
}

impl LoweringReport {
    pub fn ok(&self) -> bool {
        self.glue.ok()
    }
}

/// Lowers the canonical σ*, plays it against `alpha` for `depth` rounds, and glues.
pub fn run_lowering<A>(space: Space, depth: usize, fuel: usize, alpha: &mut A) -> Result<LoweringReport>
where
    A: Strategy<Space> + ?Sized,
{
    let star = KromChArena::new(space.clone(), depth.max(1), fuel);
    let mut lower = bco_ch_lower(CanonicalKromChBeta, star.clone())?;
    let play = play_rounds(&space, History::new(GameKind::StrongChoquet), &mut lower, alpha, depth);
    if let Some(e) = play.error {
        return Err(e);
    }
    let trace = lower.replay(&space, &play.history)?;
    let y = trace.rounds.last().expect("at least one round").x.clone();
    for u in play.history.opens() {
        if !space.member(&y, u)? {
            return Err(Error::InvariantViolation(format!("{y} is not in the play's open {u:?}")));
        }
    }
    let glue = glue(&star, &trace, &y, depth.max(1))?;
    Ok(LoweringReport { space: space.name(), depth, alpha: alpha.name(), play: play.history, witness: y, glue })
}
