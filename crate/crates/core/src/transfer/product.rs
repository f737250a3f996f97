//! Products of a Baire space with a β-unfavorable strong Choquet space.
//!
//! Given dense opens `O₀ ⊇ O₁ ⊇ ...` of `X × Y` and a box `U × V`, [`SigmaX`] is a
//! β strategy in `BM(X)` that, alongside each `Uₙ`, maintains opens `V_t` and
//! W-points `y_t ∈ V_t` for the nodes `t` of the branching tree. The invariants
//! checked after every step, for `t ∈ Tₙ`, are
//!
//! - (O) `Uₙ × V_{t⁻} ⊆ Oₙ ∩ (A_{n−1} × V_t)`
//! - (W) `Uₙ × V_{t⁺} ⊆ Oₙ ∩ (A_{n−1} × (V_{s_t} ∩ W_{y_{s_t}}(y_{s_t⌢0}, …, y_t)))`
//!
//! where `W_y` is Player I's W-point strategy at `y`. [`SigmaY`] is then a β
//! strategy in `Ch(Y)` walking down the tree, and [`assemble_witness`] combines
//! a surviving point of each play into a point of `U × V ∩ ⋂ Oₙ`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use serde_json::{json, Value};

use crate::branchtree::{self, TreeNode};
use crate::error::{precondition, Error, Result, Side};
use crate::game::{play_rounds, EchoAlpha, GameKind, History, Move, SpaceHistory, Strategy};
use crate::rational::Rat;
use crate::topology::{gruenhage_w_strategy, BaseElement, DenseOpenOracle, Interval, Point, PunctureOracle, Space, WPointStrategy, WholeSpaceOracle};

/// Picks a W-point inside a base element of `Y`.
pub type WChooser = Arc<dyn Fn(&Space, &BaseElement) -> Result<Point> + Send + Sync>;

/// Number of sampled pairs used when an oracle cannot decide box inclusion exactly.
pub const SAMPLES: usize = 32;

#[derive(Clone, Debug, Serialize)]
pub struct NodeRecord {
    pub y: Point,
    pub v: BaseElement,
    #[serde(skip)]
    w: WPointStrategy,
}

/// Per-level verdicts of the invariants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelReport {
    pub level: usize,
    pub refinements: usize,
    pub nodes: usize,
    pub o_holds: bool,
    pub w_holds: bool,
    /// Whether every oracle inclusion was decided exactly rather than sampled.
    pub exact: bool,
    /// Each new `y_{s⌢k}` lies in the `k`-th W-neighborhood of `y_s`.
    pub convergence: bool,
}

impl LevelReport {
    pub fn ok(&self) -> bool {
        self.o_holds && self.w_holds && self.convergence
    }
}

/// The bookkeeping shared by σ_X and σ_Y.
pub struct ProductState {
    x: Space,
    y: Space,
    schedule: Vec<Box<dyn DenseOpenOracle>>,
    fallback: WholeSpaceOracle,
    u: BaseElement,
    v: BaseElement,
    chooser: WChooser,
    nodes: BTreeMap<TreeNode, NodeRecord>,
    us: Vec<BaseElement>,
    answers: Vec<BaseElement>,
    levels: Vec<LevelReport>,
}

impl std::fmt::Debug for ProductState {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ProductState")
            .field("x", &self.x)
            .field("y", &self.y)
            .field("levels", &self.levels)
            .finish_non_exhaustive()
    }
}

fn at_node<T>(r: Result<T>, level: usize, node: &TreeNode) -> Result<T> {
    r.map_err(|e| match e {
        Error::Fuel(msg) => Error::Fuel(format!("level {level}, node {node}: {msg}")),
        e => e,
    })
}

impl ProductState {
    /// Beyond the schedule, `Oₙ` is the whole product.
    pub fn new(x: Space, y: Space, schedule: Vec<Box<dyn DenseOpenOracle>>, u: BaseElement, v: BaseElement) -> Result<Self> {
        x.validate_element(&u)?;
        y.validate_element(&v)?;
        for sp in [&x, &y] {
            if !sp.flags().first_countable {
                return Err(Error::Unsupported(format!("{sp} has no W-point strategy")));
            }
        }
        let chooser: WChooser = Arc::new(|s: &Space, v: &BaseElement| s.pick_point(v));
        Ok(ProductState {
            x,
            y,
            schedule,
            fallback: WholeSpaceOracle::default(),
            u,
            v,
            chooser,
            nodes: BTreeMap::new(),
            us: Vec::new(),
            answers: Vec::new(),
            levels: Vec::new(),
        })
    }

    pub fn with_chooser(mut self, chooser: WChooser) -> Self {
        self.chooser = chooser;
        self
    }

    pub fn x(&self) -> &Space {
        &self.x
    }

    pub fn y(&self) -> &Space {
        &self.y
    }

    pub fn start_box(&self) -> (&BaseElement, &BaseElement) {
        (&self.u, &self.v)
    }

    pub fn oracle(&self, n: usize) -> &dyn DenseOpenOracle {
        match self.schedule.get(n) {
            Some(o) => o.as_ref(),
            None => &self.fallback,
        }
    }

    pub fn schedule_len(&self) -> usize {
        self.schedule.len()
    }

    pub fn node(&self, t: &TreeNode) -> Option<&NodeRecord> {
        self.nodes.get(t)
    }

    pub fn nodes(&self) -> &BTreeMap<TreeNode, NodeRecord> {
        &self.nodes
    }

    /// `U₀, U₁, ...` produced so far.
    pub fn us(&self) -> &[BaseElement] {
        &self.us
    }

    pub fn levels(&self) -> &[LevelReport] {
        &self.levels
    }

    /// The deepest tree level with recorded nodes.
    pub fn materialized_level(&self) -> usize {
        self.us.len()
    }

    fn record(&mut self, t: TreeNode, v: BaseElement) -> Result<()> {
        let y = (self.chooser)(&self.y, &v)?;
        if !self.y.member(&y, &v)? {
            return Err(Error::InvariantViolation(format!("W-point {y} chosen outside V_{t}")));
        }
        let w = gruenhage_w_strategy(&self.y, &y)?;
        self.nodes.insert(t, NodeRecord { y, v, w });
        Ok(())
    }

    /// Decides `u × v ⊆ Oₙ`, exactly when the oracle can and by sampling otherwise.
    fn inside(&self, n: usize, u: &BaseElement, v: &BaseElement) -> Result<(bool, bool)> {
        let o = self.oracle(n);
        if let Some(b) = o.box_inside(&self.x, &self.y, u, v) {
            return Ok((b, true));
        }
        let xs = self.x.sample_points(u, SAMPLES)?;
        let ys = self.y.sample_points(v, SAMPLES)?;
        let ok = xs.iter().zip(&ys).all(|(p, q)| o.member(p, q) != Some(false));
        Ok((ok, false))
    }

    fn refine(&self, n: usize, t: &TreeNode, h: &BaseElement, v: &BaseElement) -> Result<(BaseElement, BaseElement)> {
        let (h2, v2) = at_node(self.oracle(n).refine(&self.x, &self.y, h, v), n, t)?;
        if !self.x.contains(&h2, h)? || !self.y.contains(&v2, v)? {
            return Err(Error::InvariantViolation(format!("O_{n} left the box it refined at node {t}")));
        }
        Ok((h2, v2))
    }

    /// σ_X(∅) = U₀, with `U₀ × V_(0) ⊆ O₀ ∩ (U × V)`.
    pub fn start(&mut self) -> Result<BaseElement> {
        if !self.us.is_empty() {
            return precondition("σ_X has already opened");
        }
        let root = TreeNode::root();
        self.record(root.clone(), self.v.clone())?;
        let first = branchtree::root_successor();
        let (u0, v0) = self.refine(0, &first, &self.u, &self.v)?;
        let (inside, exact) = self.inside(0, &u0, &v0)?;
        let o_holds = inside && self.x.contains(&u0, &self.u)? && self.y.contains(&v0, &self.v)?;
        self.record(first, v0)?;
        self.us.push(u0.clone());
        self.levels.push(LevelReport { level: 0, refinements: 1, nodes: 1, o_holds, w_holds: true, exact, convergence: true });
        if !o_holds {
            return Err(Error::InvariantViolation("U₀ × V_(0) is not inside O₀ ∩ (U × V)".into()));
        }
        Ok(u0)
    }

    /// σ_X(A₀, …, Aₙ) = Uₙ₊₁, built by the chain of `2^(n+1)` refinements over `Tₙ₊₁`.
    pub fn step(&mut self, a: &BaseElement) -> Result<BaseElement> {
        let Some(u_n) = self.us.last() else {
            return precondition("σ_X has not opened yet");
        };
        if !self.x.contains(a, u_n)? {
            return precondition(format!("α's move {a:?} is not inside U_{}", self.us.len() - 1));
        }
        let level = self.us.len();
        let tier = branchtree::level(level);
        let mut h = a.clone();
        let mut minus = Vec::with_capacity(tier.len());
        for t in &tier {
            let v_t = self.nodes[t].v.clone();
            let (h2, v2) = self.refine(level, t, &h, &v_t)?;
            h = h2;
            minus.push(v2);
        }
        let mut plus = Vec::with_capacity(tier.len());
        let mut targets = Vec::with_capacity(tier.len());
        for t in &tier {
            let (s, _) = branchtree::source(t)?;
            let rec = &self.nodes[&s];
            let count = t.last().expect("not the root") as usize + 1;
            let w = at_node(rec.w.respond_after(count), level, t)?;
            let target = at_node(self.y.meet_at(&rec.y, &rec.v, &w), level, t)?;
            let (h2, v2) = self.refine(level, t, &h, &target)?;
            h = h2;
            plus.push(v2);
            targets.push((s, w));
        }
        let u_next = h;

        let mut report = LevelReport {
            level,
            refinements: 2 * tier.len(),
            nodes: tier.len(),
            o_holds: true,
            w_holds: true,
            exact: true,
            convergence: true,
        };
        let u_ok = self.x.contains(&u_next, a)?;
        for (i, t) in tier.iter().enumerate() {
            let (in_o, exact) = self.inside(level, &u_next, &minus[i])?;
            report.exact &= exact;
            report.o_holds &= u_ok && in_o && self.y.contains(&minus[i], &self.nodes[t].v)?;

            let (s, w) = &targets[i];
            let (in_o, exact) = self.inside(level, &u_next, &plus[i])?;
            report.exact &= exact;
            report.w_holds &= u_ok && in_o && self.y.contains(&plus[i], &self.nodes[s].v)? && self.y.contains(&plus[i], w)?;
        }
        for (i, t) in tier.iter().enumerate() {
            let (t_minus, t_plus) = branchtree::successors(t)?;
            self.record(t_minus, minus[i].clone())?;
            self.record(t_plus.clone(), plus[i].clone())?;
            let (s, _) = branchtree::source(&t_plus)?;
            let k = t_plus.last().expect("not the root") as usize;
            let nbhd = self.nodes[&s].w.respond_after(k)?;
            report.convergence &= self.y.member(&self.nodes[&t_plus].y, &nbhd)?;
        }
        self.us.push(u_next.clone());
        self.answers.push(a.clone());
        let ok = report.ok();
        self.levels.push(report);
        if !ok {
            return Err(Error::InvariantViolation(format!("(O)/(W) fail at level {level}")));
        }
        Ok(u_next)
    }
}

/// σ_X as a β strategy in `BM(X)`. Re-queries on a prefix of the play return the
/// recorded move.
#[derive(Debug)]
pub struct SigmaX<'a> {
    state: &'a mut ProductState,
}

pub fn build_sigma_x(state: &mut ProductState) -> SigmaX<'_> {
    SigmaX { state }
}

impl Strategy<Space> for SigmaX<'_> {
    fn name(&self) -> String {
        "sigma-x".into()
    }

    fn side(&self) -> Side {
        Side::Beta
    }

    fn choose(&mut self, arena: &Space, history: &SpaceHistory) -> Result<Move<Point, BaseElement>> {
        if *arena != self.state.x || history.kind != GameKind::BanachMazur {
            return precondition("σ_X plays BM on its own X");
        }
        let r = history.round();
        let answers: Vec<&BaseElement> = history.reply_moves().filter_map(Move::open).collect();
        if answers.len() != r {
            return precondition("σ_X asked to move out of turn");
        }
        if r < self.state.us.len() {
            if answers.iter().zip(&self.state.answers).any(|(a, b)| *a != b) {
                return precondition("history diverges from the recorded σ_X play");
            }
            return Ok(Move::Open(self.state.us[r].clone()));
        }
        if r == 0 {
            return self.state.start().map(Move::Open);
        }
        if r != self.state.us.len() {
            return precondition("σ_X skipped a round");
        }
        self.state.step(answers[r - 1]).map(Move::Open)
    }
}

/// The tree path σ_Y has followed: `t = (k_{B₀}, …, k_{B_{n−1}})` with the current `(zₙ, Wₙ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SigmaYTrace {
    pub node: TreeNode,
    pub ks: Vec<u64>,
    pub z: Point,
    pub w: BaseElement,
}

/// σ_Y as a β strategy in `Ch(Y)`, reading the records of a finished σ_X play.
#[derive(Debug)]
pub struct SigmaY<'a> {
    state: &'a ProductState,
    fuel: usize,
}

pub fn build_sigma_y(state: &ProductState, fuel: usize) -> SigmaY<'_> {
    SigmaY { state, fuel }
}

impl SigmaY<'_> {
    /// Replays σ_Y against α's opens `B₀, …`.
    pub fn trace<'b>(&self, replies: impl IntoIterator<Item = &'b BaseElement>) -> Result<SigmaYTrace> {
        let y = &self.state.y;
        let root = TreeNode::root();
        let Some(rec) = self.state.node(&root) else {
            return precondition("σ_X has not opened, so no tree is recorded");
        };
        let mut cur = SigmaYTrace { node: root, ks: Vec::new(), z: rec.y.clone(), w: rec.v.clone() };
        for (n, b) in replies.into_iter().enumerate() {
            if !y.member(&cur.z, b)? || !y.contains(b, &cur.w)? {
                return precondition(format!("B_{n} is not a legal reply to (z_{n}, W_{n})"));
            }
            let mut found = None;
            for k in n as u64..(n + self.fuel) as u64 {
                let c = cur.node.child(k);
                let Some(rec) = self.state.node(&c) else {
                    return Err(Error::Fuel(format!(
                        "round {n}: node {c} is past the materialized level {}",
                        self.state.materialized_level()
                    )));
                };
                if y.member(&rec.y, b)? {
                    found = Some((k, c, rec));
                    break;
                }
            }
            let Some((k, c, rec)) = found else {
                return Err(Error::Fuel(format!("round {n}: no y_(t⌢k) in B_{n} within {} steps", self.fuel)));
            };
            let w = y.meet_at(&rec.y, b, &rec.v)?;
            cur.ks.push(k);
            cur = SigmaYTrace { node: c, ks: cur.ks, z: rec.y.clone(), w };
        }
        Ok(cur)
    }
}

impl Strategy<Space> for SigmaY<'_> {
    fn name(&self) -> String {
        "sigma-y".into()
    }

    fn side(&self) -> Side {
        Side::Beta
    }

    fn choose(&mut self, arena: &Space, history: &SpaceHistory) -> Result<Move<Point, BaseElement>> {
        if *arena != self.state.y || history.kind != GameKind::StrongChoquet {
            return precondition("σ_Y plays Ch on its own Y");
        }
        let t = self.trace(history.reply_moves().filter_map(Move::open))?;
        Ok(Move::Pointed { point: t.z, open: t.w })
    }
}

/// A point of `U × V` passing every oracle of the schedule prefix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AssembledWitness {
    pub x: Point,
    pub y: Point,
    /// The node whose recorded W-point is `y`.
    pub node: TreeNode,
    /// `(n, verdict)` for each oracle checked; `None` when it has no membership test.
    pub oracle_checks: Vec<(usize, Option<bool>)>,
}

/// Combines `x ∈ ⋂ Uₙ` with the surviving Ch(Y) play into `(x, y) ∈ U × V ∩ O₀ ∩ … ∩ O_{N−1}`.
///
/// `y` is the W-point at the node σ_Y reached, followed down minus-branches to level `N`.
pub fn assemble_witness(state: &ProductState, x: &Point, ch: &SpaceHistory, depth: usize) -> Result<AssembledWitness> {
    let (sx, sy) = (&state.x, &state.y);
    let fail = |what: String| Err(Error::InvariantViolation(what));
    if depth == 0 {
        let y = sy.pick_point(&state.v)?;
        if !sx.member(x, &state.u)? {
            return fail(format!("{x} is not in U"));
        }
        return Ok(AssembledWitness { x: x.clone(), y, node: TreeNode::root(), oracle_checks: Vec::new() });
    }
    if state.materialized_level() < depth {
        return precondition(format!("σ_X materialized {} levels, {depth} needed", state.materialized_level()));
    }
    let moves = if ch.len().is_multiple_of(2) && !ch.is_empty() { ch.truncated(ch.len() - 1) } else { ch.clone() };
    let sigma_y = build_sigma_y(state, usize::MAX / 2);
    let trace = sigma_y.trace(moves.reply_moves().filter_map(Move::open))?;
    let level = trace.node.level()?;
    if level > depth {
        return precondition(format!("σ_Y reached level {level}, past the depth {depth}"));
    }
    let mut node = trace.node.clone();
    while node.level()? < depth {
        node = node.child(0);
    }
    let y = state.nodes[&node].y.clone();

    if !sx.member(x, &state.u)? || !sy.member(&y, &state.v)? {
        return fail(format!("({x}, {y}) is not in U × V"));
    }
    for (n, u) in state.us.iter().enumerate().take(depth) {
        if !sx.member(x, u)? {
            return fail(format!("{x} is not in U_{n}"));
        }
    }
    for u in ch.opens() {
        if !sy.member(&y, u)? {
            return fail(format!("{y} left the Ch(Y) play at {u:?}"));
        }
    }
    let mut oracle_checks = Vec::with_capacity(depth);
    for n in 0..depth {
        let verdict = state.oracle(n).member(x, &y);
        if verdict == Some(false) {
            return fail(format!("({x}, {y}) is not in O_{n}"));
        }
        oracle_checks.push((n, verdict));
    }
    Ok(AssembledWitness { x: x.clone(), y, node, oracle_checks })
}

/// `1/2, 1/4, 3/4, 1/8, 3/8, ...`: the dyadic rationals of `(0,1)` by level.
pub fn dyadic_point(j: usize) -> Rat {
    let m = j as u64 + 1;
    let a = 63 - m.leading_zeros();
    let b = m - (1u64 << a);
    &Rat::integer(2 * b as i64 + 1) * &Rat::dyadic(a + 1)
}

/// `Oₙ = ℚ² ∖ {(qⱼ, qⱼ) : j ≤ n}` with `qⱼ` = [`dyadic_point`]`(j)`: decreasing, dense, exact.
pub fn puncture_schedule(depth: usize) -> Vec<Box<dyn DenseOpenOracle>> {
    (0..depth)
        .map(|n| {
            let punctures = (0..=n).map(|j| (Point::Rational(dyadic_point(j)), Point::Rational(dyadic_point(j)))).collect();
            Box::new(PunctureOracle::new(n, punctures)) as Box<dyn DenseOpenOracle>
        })
        .collect()
}

pub fn whole_schedule(depth: usize) -> Vec<Box<dyn DenseOpenOracle>> {
    (0..depth).map(|index| Box::new(WholeSpaceOracle { index }) as Box<dyn DenseOpenOracle>).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProductReport {
    pub depth: usize,
    pub levels: Vec<LevelReport>,
    pub refinements: Vec<usize>,
    pub bm_x: Value,
    pub ch_y: Value,
    pub sigma_y: Option<SigmaYTrace>,
    pub witness: AssembledWitness,
    pub schedule: Vec<Value>,
}

impl ProductReport {
    pub fn ok(&self) -> bool {
        self.levels.iter().all(LevelReport::ok) && self.witness.oracle_checks.iter().all(|(_, v)| *v != Some(false))
    }
}

/// Runs the pipeline on `X = Y = ℚ`, `U = V = (0,1)`: σ_X against identity α for
/// `depth` rounds, σ_Y against identity α until the tree runs out, then assembly.
pub fn run_product(depth: usize, schedule: Vec<Box<dyn DenseOpenOracle>>, fuel: usize) -> Result<ProductReport> {
    let unit = BaseElement::Interval(Interval::bounded(Rat::zero(), Rat::one()).expect("nonempty"));
    let describe: Vec<Value> = schedule.iter().map(|o| o.describe()).collect();
    let mut state = ProductState::new(Space::Rationals, Space::Rationals, schedule, unit.clone(), unit)?;
    let x_space = state.x.clone();
    let bm = {
        let mut sigma_x = build_sigma_x(&mut state);
        let play = play_rounds(&x_space, History::new(GameKind::BanachMazur), &mut sigma_x, &mut EchoAlpha, depth);
        if let Some(e) = play.error {
            return Err(e);
        }
        play.history
    };
    let x = match bm.last_open() {
        Some(u) => x_space.pick_point(u)?,
        None => x_space.pick_point(&state.u)?,
    };
    let y_space = state.y.clone();
    let (ch, trace) = if depth == 0 {
        (History::new(GameKind::StrongChoquet), None)
    } else {
        let mut sigma_y = build_sigma_y(&state, fuel);
        let play = play_rounds(&y_space, History::new(GameKind::StrongChoquet), &mut sigma_y, &mut EchoAlpha, depth + 1);
        match play.error {
            None | Some(Error::Fuel(_)) => {}
            Some(e) => return Err(e),
        }
        let h = play.history;
        let trace = sigma_y.trace(h.reply_moves().filter_map(Move::open).take(h.len().saturating_sub(1) / 2))?;
        (h, Some(trace))
    };
    let witness = assemble_witness(&state, &x, &ch, depth)?;
    Ok(ProductReport {
        depth,
        refinements: state.levels.iter().map(|l| l.refinements).collect(),
        levels: state.levels.clone(),
        bm_x: json!(bm),
        ch_y: json!(ch),
        sigma_y: trace,
        witness,
        schedule: describe,
    })
}
