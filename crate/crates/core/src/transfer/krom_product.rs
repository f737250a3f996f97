//! β strategies between `BM(∏ Xᵢ)` and `BM(∏ K(Xᵢ))`.
//!
//! [`krom_lift_beta`] turns σ on the product into σ* on the Krom product: each
//! σ move `Vₖ₊₁` is appended to the stems α has built (or starts a fresh stem on
//! a new index). [`krom_lower_beta`] goes the other way by projecting σ*'s stems
//! to their final entries. Both are history-driven: every move replays the play
//! from the start, so the wrapped strategy must be deterministic.

use serde::Serialize;

use super::{FiniteSupportBox, KromBox, KromProductArena, ProductArena, ProductBox};
use crate::error::{precondition, Error, Result, Side};
use crate::game::{check_move, Arena, GameKind, History, Move, Referee, Strategy};
use crate::krom::{DecreasingSeq, KromPoint};
use crate::topology::{BaseElement, FiniteTopology, Point, Space};

pub type ProductHistory = History<Vec<Point>, ProductBox>;
pub type KromHistory = History<Vec<KromPoint>, KromBox>;

fn beta_legal<A: Arena>(arena: &A, h: &History<A::Point, A::Open>, mv: &Move<A::Point, A::Open>) -> Result<()> {
    let round = h.round();
    let illegal = |reason| Error::IllegalStrategyMove { side: Side::Beta, round, reason };
    match check_move(arena, h, mv) {
        Ok(None) => Ok(()),
        Ok(Some(reason)) | Err(Error::Domain(reason)) => Err(illegal(reason)),
        Err(e) => Err(e),
    }
}

fn open_of<P, O>(mv: &Move<P, O>) -> &O {
    mv.open().expect("BM moves are opens")
}

fn require_beta_turn<P: Clone, O: Clone>(h: &History<P, O>) -> Result<()> {
    if h.kind != GameKind::BanachMazur {
        return precondition("strategy transfers here play BM");
    }
    if !h.len().is_multiple_of(2) {
        return precondition("β asked to move out of turn");
    }
    Ok(())
}

fn extend_or_fresh(space: &Space, stem: Option<&DecreasingSeq>, u: BaseElement) -> Result<DecreasingSeq> {
    match stem {
        Some(s) => s
            .extend(space, u)
            .map_err(|e| Error::InvariantViolation(format!("stem containment violated: {e}"))),
        None => DecreasingSeq::singleton(space, u),
    }
}

/// β on `∏ Xᵢ`: at round `k` refine coordinate `k mod |I|` around its canonical point.
#[derive(Clone, Debug, Default)]
pub struct ProductCanonicalBeta;

impl Strategy<ProductArena> for ProductCanonicalBeta {
    fn name(&self) -> String {
        "product-canonical".into()
    }

    fn side(&self) -> Side {
        Side::Beta
    }

    fn choose(&mut self, arena: &ProductArena, h: &ProductHistory) -> Result<Move<Vec<Point>, ProductBox>> {
        if arena.is_empty() {
            return precondition("empty product");
        }
        let mut b = h.last_open().cloned().unwrap_or_default();
        let i = h.round() % arena.len();
        let c = arena.coord(&b, i);
        let p = arena.factors[i].pick_point(&c)?;
        b.insert(i, arena.factors[i].refine(&p, &c, 1)?);
        Ok(Move::Open(b))
    }
}

/// β on `∏ K(Xᵢ)`: at round `k` extend the stem at `k mod |I|` by one canonical
/// refinement (two on odd rounds), or start it.
#[derive(Clone, Debug, Default)]
pub struct KromCanonicalBeta;

impl Strategy<KromProductArena> for KromCanonicalBeta {
    fn name(&self) -> String {
        "krom-canonical".into()
    }

    fn side(&self) -> Side {
        Side::Beta
    }

    fn choose(&mut self, arena: &KromProductArena, h: &KromHistory) -> Result<Move<Vec<KromPoint>, KromBox>> {
        if arena.is_empty() {
            return precondition("empty product");
        }
        let mut b = h.last_open().cloned().unwrap_or_default();
        let i = h.round() % arena.len();
        let space = &arena.factors[i];
        let stem = match b.get(i) {
            Some(s) => {
                let p = space.pick_point(s.last())?;
                let mut s = s.extend(space, space.refine(&p, s.last(), 1)?)?;
                if h.round() % 2 == 1 {
                    let next = space.refine(&p, s.last(), 2)?;
                    s = s.extend(space, next)?;
                }
                s
            }
            None => {
                let w = space.whole();
                DecreasingSeq::singleton(space, space.refine(&space.pick_point(&w)?, &w, 1)?)?
            }
        };
        b.insert(i, stem);
        Ok(Move::Open(b))
    }
}

/// σ* built from σ.
#[derive(Clone, Debug)]
pub struct KromLift<S> {
    sigma: S,
}

pub fn krom_lift_beta<S: Strategy<ProductArena>>(sigma: S) -> KromLift<S> {
    KromLift { sigma }
}

impl<S: Strategy<ProductArena>> KromLift<S> {
    /// The projected σ-play (ending with σ's current move) and σ*'s current move.
    pub fn replay(&mut self, star: &KromProductArena, h: &KromHistory) -> Result<(ProductHistory, KromBox)> {
        require_beta_turn(h)?;
        let base = star.base();
        let r = h.round();
        let mut hx = History::new(GameKind::BanachMazur);
        for k in 0..=r {
            let mv = self.sigma.choose(&base, &hx)?;
            beta_legal(&base, &hx, &mv)?;
            let v = open_of(&mv).clone();
            let vstar: KromBox = if k == 0 {
                v.support
                    .iter()
                    .map(|(i, e)| Ok((*i, DecreasingSeq::singleton(&star.factors[*i], e.clone())?)))
                    .collect::<Result<_>>()?
            } else {
                let ustar = open_of(&h.moves[2 * k - 1]);
                let indices: std::collections::BTreeSet<usize> = ustar.indices().chain(v.indices()).collect();
                indices
                    .into_iter()
                    .map(|i| Ok((i, extend_or_fresh(&star.factors[i], ustar.get(i), base.coord(&v, i))?)))
                    .collect::<Result<_>>()?
            };
            hx.moves.push(mv);
            if k == r {
                return Ok((hx, vstar));
            }
            if open_of(&h.moves[2 * k]) != &vstar {
                return precondition(format!("round {k} of the history is not a σ* move"));
            }
            hx.moves.push(Move::Open(star.project(open_of(&h.moves[2 * k + 1]))));
        }
        unreachable!("loop returns at k = r")
    }
}

impl<S: Strategy<ProductArena>> Strategy<KromProductArena> for KromLift<S> {
    fn name(&self) -> String {
        format!("lift({})", self.sigma.name())
    }

    fn side(&self) -> Side {
        Side::Beta
    }

    fn choose(&mut self, arena: &KromProductArena, h: &KromHistory) -> Result<Move<Vec<KromPoint>, KromBox>> {
        self.replay(arena, h).map(|(_, v)| Move::Open(v))
    }
}

/// σ built from σ*.
#[derive(Clone, Debug)]
pub struct KromLower<S> {
    sigma_star: S,
}

pub fn krom_lower_beta<S: Strategy<KromProductArena>>(sigma_star: S) -> KromLower<S> {
    KromLower { sigma_star }
}

impl<S: Strategy<KromProductArena>> KromLower<S> {
    /// The σ*-play behind a σ-play (ending with σ*'s current move) and σ's current move.
    pub fn replay(&mut self, base: &ProductArena, h: &ProductHistory) -> Result<(KromHistory, ProductBox)> {
        require_beta_turn(h)?;
        let star = KromProductArena::new(base.factors.clone());
        let r = h.round();
        let mut hs = History::new(GameKind::BanachMazur);
        for k in 0..=r {
            let mv = self.sigma_star.choose(&star, &hs)?;
            beta_legal(&star, &hs, &mv)?;
            let vstar = open_of(&mv).clone();
            let v = star.project(&vstar);
            hs.moves.push(mv);
            if k == r {
                return Ok((hs, v));
            }
            if open_of(&h.moves[2 * k]) != &v {
                return precondition(format!("round {k} of the history is not a σ move"));
            }
            let u = open_of(&h.moves[2 * k + 1]);
            let indices: std::collections::BTreeSet<usize> = vstar.indices().chain(u.indices()).collect();
            let ustar: KromBox = indices
                .into_iter()
                .map(|i| Ok((i, extend_or_fresh(&star.factors[i], vstar.get(i), base.coord(u, i))?)))
                .collect::<Result<_>>()?;
            let reply = Move::Open(ustar);
            if let Some(reason) = check_move(&star, &hs, &reply)? {
                return Err(Error::InvariantViolation(format!("lifted reply of round {k} is illegal: {reason}")));
            }
            hs.moves.push(reply);
        }
        unreachable!("loop returns at k = r")
    }
}

impl<S: Strategy<KromProductArena>> Strategy<ProductArena> for KromLower<S> {
    fn name(&self) -> String {
        format!("lower({})", self.sigma_star.name())
    }

    fn side(&self) -> Side {
        Side::Beta
    }

    fn choose(&mut self, arena: &ProductArena, h: &ProductHistory) -> Result<Move<Vec<Point>, ProductBox>> {
        self.replay(arena, h).map(|(_, v)| Move::Open(v))
    }
}

fn survives<A: Arena>(arena: &A, x: &A::Point, h: &History<A::Point, A::Open>) -> Result<Option<usize>> {
    for (n, u) in h.opens().enumerate() {
        if !arena.member(x, u)? {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// From `f` surviving a σ*-play, the witnesses `xᵢ ∈ ⋂ₙ f(i)(n)`, checked against the projected σ-play.
pub fn extract_counterplay_lift(base: &ProductArena, f: &[KromPoint], projected: &ProductHistory) -> Result<Vec<Point>> {
    if f.len() != base.len() {
        return precondition(format!("{} Krom points for {} factors", f.len(), base.len()));
    }
    let x: Vec<Point> = f.iter().map(|g| g.witness().clone()).collect();
    if let Some(n) = survives(base, &x, projected)? {
        return Err(Error::InvariantViolation(format!("extracted point leaves projected open {n}")));
    }
    Ok(x)
}

/// From `x` surviving a σ-play, the Krom points following the stems of the last
/// σ* open (and `(Xᵢ)ₙ` off support) with witnesses `xᵢ`, checked against the σ*-play.
pub fn extract_counterplay_lower(star: &KromProductArena, x: &[Point], krom: &KromHistory) -> Result<Vec<KromPoint>> {
    if x.len() != star.len() {
        return precondition(format!("{} coordinates for {} factors", x.len(), star.len()));
    }
    let last = krom.last_open().cloned().unwrap_or_default();
    let f = (0..star.len())
        .map(|i| {
            let space = &star.factors[i];
            let r = match last.get(i) {
                Some(stem) => KromPoint::shrink(space, stem.clone(), x[i].clone()),
                None => KromPoint::repeat(space, DecreasingSeq::singleton(space, space.whole())?, x[i].clone()),
            };
            r.map_err(|e| Error::InvariantViolation(format!("coordinate {i}: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(n) = survives(star, &f, krom)? {
        return Err(Error::InvariantViolation(format!("extracted Krom point leaves σ* open {n}")));
    }
    Ok(f)
}

fn finite_opens(space: &Space, within: &BaseElement) -> Result<Vec<BaseElement>> {
    match (space, within) {
        (Space::Finite(t), BaseElement::Open(s)) => Ok(t.opens_within(*s).map(BaseElement::Open).collect()),
        _ => Err(Error::Unsupported(format!("exhaustive replies need finite spaces, got {space}"))),
    }
}

fn cartesian<T: Clone>(options: &[Vec<Option<T>>]) -> Vec<FiniteSupportBox<T>> {
    let mut out = vec![FiniteSupportBox::new()];
    for (i, opts) in options.iter().enumerate() {
        out = out
            .into_iter()
            .flat_map(|b| {
                opts.iter().map(move |o| {
                    let mut b = b.clone();
                    if let Some(t) = o {
                        b.insert(i, t.clone());
                    }
                    b
                })
            })
            .collect();
    }
    out
}

/// Every α reply inside `within` on a finite product.
pub fn product_replies(base: &ProductArena, within: &ProductBox) -> Result<Vec<ProductBox>> {
    let options = (0..base.len())
        .map(|i| {
            let space = &base.factors[i];
            Ok(match within.get(i) {
                Some(u) => finite_opens(space, u)?.into_iter().map(Some).collect(),
                None => {
                    let whole = space.whole();
                    let mut v = vec![None];
                    v.extend(finite_opens(space, &whole)?.into_iter().filter(|u| *u != whole).map(Some));
                    v
                }
            })
        })
        .collect::<Result<Vec<Vec<Option<BaseElement>>>>>()?;
    Ok(cartesian(&options))
}

/// α replies inside `within` on a finite Krom product: each stem kept or extended
/// by one open, each free index left free or given a one-element stem.
pub fn krom_replies(star: &KromProductArena, within: &KromBox) -> Result<Vec<KromBox>> {
    let options = (0..star.len())
        .map(|i| {
            let space = &star.factors[i];
            Ok(match within.get(i) {
                Some(s) => {
                    let mut v = vec![Some(s.clone())];
                    for u in finite_opens(space, s.last())? {
                        v.push(Some(s.extend(space, u)?));
                    }
                    v
                }
                None => {
                    let mut v = vec![None];
                    for u in finite_opens(space, &space.whole())? {
                        v.push(Some(DecreasingSeq::singleton(space, u)?));
                    }
                    v
                }
            })
        })
        .collect::<Result<Vec<Vec<Option<DecreasingSeq>>>>>()?;
    Ok(cartesian(&options))
}

/// Visits every play of `depth` rounds of `beta` against all enumerated replies;
/// each visited history ends with β's move after the last reply.
pub fn for_each_play<A, S>(
    arena: &A,
    beta: &mut S,
    depth: usize,
    replies: &mut dyn FnMut(&A::Open) -> Result<Vec<A::Open>>,
    visit: &mut dyn FnMut(&History<A::Point, A::Open>) -> Result<()>,
) -> Result<usize>
where
    A: Arena,
    S: Strategy<A> + ?Sized,
{
    let mut count = 0;
    explore(arena, beta, History::new(GameKind::BanachMazur), depth, replies, visit, &mut count)?;
    Ok(count)
}

fn explore<A, S>(
    arena: &A,
    beta: &mut S,
    h: History<A::Point, A::Open>,
    remaining: usize,
    replies: &mut dyn FnMut(&A::Open) -> Result<Vec<A::Open>>,
    visit: &mut dyn FnMut(&History<A::Point, A::Open>) -> Result<()>,
    count: &mut usize,
) -> Result<()>
where
    A: Arena,
    S: Strategy<A> + ?Sized,
{
    let mv = beta.choose(arena, &h)?;
    let mut referee = Referee::new(arena, h);
    referee.submit(mv)?;
    let h = referee.into_history();
    if remaining == 0 {
        *count += 1;
        return visit(&h);
    }
    let within = h.last_open().expect("β just moved").clone();
    for u in replies(&within)? {
        let mut referee = Referee::new(arena, h.clone());
        referee
            .submit(Move::Open(u))
            .map_err(|e| Error::InvariantViolation(format!("enumerated reply rejected: {e}")))?;
        explore(arena, beta, referee.into_history(), remaining - 1, replies, visit, count)?;
    }
    Ok(())
}

/// Tally of an exhaustive check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub plays: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

impl Counts {
    fn absorb(&mut self, r: Result<()>) -> Result<()> {
        match r {
            Ok(()) => Ok(()),
            Err(e @ (Error::InvariantViolation(_) | Error::IllegalStrategyMove { .. })) => {
                self.violations += 1;
                self.first_violation.get_or_insert_with(|| e.to_string());
                Ok(())
            }
            Err(e) => Err(e),
        }
    }

    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

fn replay_legal<A: Arena>(arena: &A, h: &History<A::Point, A::Open>) -> Result<()> {
    let mut referee = Referee::new(arena, History::new(h.kind));
    for mv in &h.moves {
        referee.submit(mv.clone())?;
    }
    Ok(())
}

/// σ* = lift(product-canonical) against every enumerated Krom reply: σ* moves legal,
/// projections legal, and a surviving Krom point extracts to a surviving point.
pub fn check_lift(factors: &[Space], depth: usize) -> Result<Counts> {
    let star = KromProductArena::new(factors.to_vec());
    let base = star.base();
    let mut counts = Counts::default();
    let mut sigma_star = krom_lift_beta(ProductCanonicalBeta);
    let mut replies = |b: &KromBox| krom_replies(&star, b);
    let mut visit = |h: &KromHistory| {
        let r = (|| {
            let (hx, _) = krom_lift_beta(ProductCanonicalBeta).replay(&star, &h.truncated(h.len() - 1))?;
            replay_legal(&base, &hx)?;
            let f = star.pick_point(h.last_open().expect("nonempty play"))?;
            if let Some(n) = survives(&star, &f, h)? {
                return Err(Error::InvariantViolation(format!("canonical Krom point leaves open {n}")));
            }
            extract_counterplay_lift(&base, &f, &hx).map(drop)
        })();
        counts.absorb(r)
    };
    counts.plays = for_each_play(&star, &mut sigma_star, depth, &mut replies, &mut visit)?;
    Ok(counts)
}

/// σ = lower(krom-canonical) against every product reply: σ moves legal, the
/// reconstructed σ*-play legal, and a surviving point extracts to a surviving Krom point.
pub fn check_lower(factors: &[Space], depth: usize) -> Result<Counts> {
    let base = ProductArena::new(factors.to_vec());
    let star = KromProductArena::new(factors.to_vec());
    let mut counts = Counts::default();
    let mut sigma = krom_lower_beta(KromCanonicalBeta);
    let mut replies = |b: &ProductBox| product_replies(&base, b);
    let mut visit = |h: &ProductHistory| {
        let r = (|| {
            let (hs, _) = krom_lower_beta(KromCanonicalBeta).replay(&base, &h.truncated(h.len() - 1))?;
            replay_legal(&star, &hs)?;
            let x = base.pick_point(h.last_open().expect("nonempty play"))?;
            if let Some(n) = survives(&base, &x, h)? {
                return Err(Error::InvariantViolation(format!("canonical point leaves open {n}")));
            }
            extract_counterplay_lower(&star, &x, &hs).map(drop)
        })();
        counts.absorb(r)
    };
    counts.plays = for_each_play(&base, &mut sigma, depth, &mut replies, &mut visit)?;
    Ok(counts)
}

/// lower(lift(σ)) against every product reply: each of its moves lies inside σ's
/// move on the same history.
pub fn check_roundtrip(factors: &[Space], depth: usize) -> Result<Counts> {
    let base = ProductArena::new(factors.to_vec());
    let mut counts = Counts::default();
    let mut round_trip = krom_lower_beta(krom_lift_beta(ProductCanonicalBeta));
    let mut replies = |b: &ProductBox| product_replies(&base, b);
    let mut visit = |h: &ProductHistory| {
        let r = (|| {
            for k in 0..=h.round() {
                let prefix = h.truncated(2 * k);
                let direct = ProductCanonicalBeta.choose(&base, &prefix)?;
                if !base.contains(open_of(&h.moves[2 * k]), open_of(&direct))? {
                    return Err(Error::InvariantViolation(format!("round {k}: round-trip move leaves σ's move")));
                }
            }
            Ok(())
        })();
        counts.absorb(r)
    };
    counts.plays = for_each_play(&base, &mut round_trip, depth, &mut replies, &mut visit)?;
    Ok(counts)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KromProductReport {
    pub factors: Vec<String>,
    pub depth: usize,
    pub lift: Option<Counts>,
    pub lower: Option<Counts>,
    pub roundtrip: Option<Counts>,
}

impl KromProductReport {
    pub fn ok(&self) -> bool {
        [&self.lift, &self.lower, &self.roundtrip].iter().all(|c| c.as_ref().is_none_or(Counts::ok))
    }

    pub fn plays(&self) -> usize {
        [&self.lift, &self.lower, &self.roundtrip].iter().filter_map(|c| c.as_ref()).map(|c| c.plays).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KromChecks {
    pub lift: bool,
    pub lower: bool,
    pub roundtrip: bool,
}

impl KromChecks {
    pub const ALL: KromChecks = KromChecks { lift: true, lower: true, roundtrip: true };
}

pub fn run_krom_product(factors: &[Space], depth: usize, checks: KromChecks) -> Result<KromProductReport> {
    Ok(KromProductReport {
        factors: factors.iter().map(Space::name).collect(),
        depth,
        lift: checks.lift.then(|| check_lift(factors, depth)).transpose()?,
        lower: checks.lower.then(|| check_lower(factors, depth)).transpose()?,
        roundtrip: checks.roundtrip.then(|| check_roundtrip(factors, depth)).transpose()?,
    })
}

/// Every topology on `1..=max_points` points, as `|I|` copies for each `|I|` in `1..=max_indices`.
pub fn run_krom_product_exhaustive(max_points: usize, max_indices: usize, depth: usize) -> Result<Vec<KromProductReport>> {
    let mut out = Vec::new();
    for n in 1..=max_points {
        for t in FiniteTopology::all_on(n) {
            for k in 1..=max_indices {
                let factors = vec![Space::Finite(t.clone()); k];
                out.push(run_krom_product(&factors, depth, KromChecks::ALL)?);
            }
        }
    }
    Ok(out)
}
