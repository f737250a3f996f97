//! Invariant suites shared by the command-line `verify` and the acceptance run.
//!
//! Each check re-verifies what the engines report with an independent test
//! (membership replays, hand-built enumerations, direct endpoint comparisons)
//! and returns a serializable verdict. Details are deterministic: no timings.

use std::collections::BTreeSet;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::branchtree::{self, TreeNode};
use crate::error::{Error, Result};
use crate::game::{
    certify, gruenhage_run, registry, run_game, verify_outcome, CanonicalBeta, DiagonalBeta, GameKind, History, Move, Outcome,
    RandomBeta, Referee, RefineAlpha, RemarkTactic, SpaceTranscript,
};
use crate::krom::{
    basic_disjoint, ccc_pi_base_step_default, generate_disjoint_family, k0_certify, k0_verify, ultradist, DecreasingSeq,
    KromPoint,
};
use crate::rational::{enumerate_rational, Rat};
use crate::topology::{gruenhage_w_strategy, BaseElement, FiniteTopology, Interval, Point, Space};
use crate::transfer::krom_product::run_krom_product_exhaustive;
use crate::transfer::lowering::{run_lowering, LoweringReport};
use crate::transfer::product::{puncture_schedule, run_product, ProductReport};

pub const SUITES: &[&str] = &["topology", "games", "krom", "tree", "transfer"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Budget {
    Small,
    Full,
}

impl FromStr for Budget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Budget> {
        match s {
            "small" => Ok(Budget::Small),
            "full" => Ok(Budget::Full),
            _ => Err(Error::Parse(format!("unknown budget {s:?} (expected small or full)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub budget: Budget,
    pub triples: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { budget: Budget::Full, triples: 10_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

impl Check {
    fn new(name: &str, passed: bool, detail: Value) -> Check {
        Check { name: name.into(), passed, detail }
    }

    /// An engine error is a failed check, not an aborted suite.
    fn from_result(name: &str, r: Result<Check>) -> Check {
        r.unwrap_or_else(|e| Check::new(name, false, json!({ "error": e.to_string() })))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

/// Runs one named suite, or every suite for `all`.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, cfg)).collect();
    }
    Ok(vec![run_one(name, cfg)?])
}

fn run_one(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let full = cfg.budget == Budget::Full;
    let seed = cfg.seed;
    let checks: Vec<(&str, Result<Check>)> = match name {
        "topology" => vec![
            ("inclusion-soundness", inclusion_soundness(if full { 1500 } else { 200 }, seed)),
            ("refine-chains", refine_chains(if full { 100 } else { 20 }, seed)),
            ("finite-topology-counts", finite_topology_counts()),
        ],
        "games" => vec![
            ("fuzzed-referee", fuzz_games(if full { 1000 } else { 200 }, seed)),
            ("diagonal-bm", diagonal_check(32)),
            ("choquet-cylinder", choquet_cylinder_check(64)),
            ("remark-tactic", remark_check(if full { 1000 } else { 200 }, seed)),
        ],
        "krom" => vec![
            ("ultrametric", ultrametric_check(cfg.triples, seed)),
            ("k0-certificates", k0_check(if full { 200 } else { 40 }, seed)),
        ],
        "tree" => vec![("branchtree", tree_check(12))],
        "transfer" => vec![
            ("product", product_check(if full { 6 } else { 4 })),
            ("krom-product", krom_product_check(if full { 3 } else { 2 }, 2, if full { 3 } else { 2 })),
            ("projection", projection_check(100, seed)),
            ("lowering", lowering_check(5)),
        ],
        _ => return Err(Error::Parse(format!("unknown suite {name:?} (expected one of {SUITES:?} or all)"))),
    };
    let checks: Vec<Check> = checks.into_iter().map(|(n, r)| Check::from_result(n, r)).collect();
    Ok(SuiteReport { suite: name.into(), passed: checks.iter().all(|c| c.passed), checks })
}

fn zoo() -> Vec<Space> {
    ["rationals", "baire-omega", "cantor", "finite:3:0;0,1", "finite:discrete:3", "remark-qd:6", "remark-qd:0"]
        .iter()
        .map(|n| n.parse().expect("zoo names parse"))
        .collect()
}

// ---- topology ----

/// `U ⊆ V ∧ x ∈ U ⟹ x ∈ V` on sampled triples of every zoo space.
pub fn inclusion_soundness(per_space: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut samples, mut included, mut violations) = (0, 0, 0);
    for s in zoo() {
        for _ in 0..per_space {
            let v = s.random_subelement(&s.whole(), &mut rng)?;
            let u = if rng.gen_bool(0.5) { s.random_subelement(&v, &mut rng)? } else { s.random_subelement(&s.whole(), &mut rng)? };
            let x = s.random_point(&u, &mut rng)?;
            samples += 1;
            if !s.member(&x, &u)? {
                violations += 1;
            }
            if s.contains(&u, &v)? {
                included += 1;
                if !s.member(&x, &v)? {
                    violations += 1;
                }
            }
        }
    }
    Ok(Check::new("inclusion-soundness", violations == 0, json!({ "samples": samples, "included": included, "violations": violations })))
}

/// Refinement chains around a point decrease and keep the point.
pub fn refine_chains(per_space: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
    let mut violations = 0;
    for s in zoo() {
        for _ in 0..per_space {
            let v = s.random_subelement(&s.whole(), &mut rng)?;
            let x = s.random_point(&v, &mut rng)?;
            let mut prev = v.clone();
            for k in 0..12 {
                let u = s.refine(&x, &v, k)?;
                if !s.member(&x, &u)? || !s.contains(&u, &prev)? {
                    violations += 1;
                }
                prev = u;
            }
        }
    }
    Ok(Check::new("refine-chains", violations == 0, json!({ "violations": violations })))
}

/// Labeled topologies on 1..=4 points: 1, 4, 29, 355.
pub fn finite_topology_counts() -> Result<Check> {
    let counts: Vec<usize> = (1..=4).map(|n| FiniteTopology::all_on(n).len()).collect();
    Ok(Check::new("finite-topology-counts", counts == [1, 4, 29, 355], json!({ "counts": counts })))
}

// ---- games ----

/// A seeded random game: kind, space, both strategies and depth `0..=16`.
fn random_run(seed: u64) -> Result<(GameKind, SpaceTranscript)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spaces = zoo();
    let s = spaces[rng.gen_range(0..spaces.len())].clone();
    let depth = rng.gen_range(0..=16);
    let kind = [GameKind::BanachMazur, GameKind::StrongChoquet, GameKind::Gruenhage][rng.gen_range(0..3)];
    if kind == GameKind::Gruenhage {
        let x = s.random_point(&s.whole(), &mut rng)?;
        let w = gruenhage_w_strategy(&s, &x)?;
        let mut replier = registry::replier(["center", "edge", "random"][rng.gen_range(0..3)], seed)?;
        return Ok((kind, gruenhage_run(&s, &x, &w, &mut replier, depth)?));
    }
    let mut beta = match rng.gen_range(0..3) {
        0 => registry::beta("canonical", seed)?,
        1 if s == Space::Rationals => registry::beta("diagonal", seed)?,
        _ => registry::beta("random", seed)?,
    };
    let mut alpha = match rng.gen_range(0..4) {
        0 => registry::alpha("halver", seed)?,
        1 => registry::alpha("identity", seed)?,
        2 if kind == GameKind::StrongChoquet && matches!(s, Space::Remark(_)) => registry::alpha("remark", seed)?,
        _ => registry::alpha("random", seed)?,
    };
    Ok((kind, run_game(kind, &s, &mut beta, &mut alpha, depth)?))
}

/// Replays every move through a fresh referee and re-checks each outcome.
pub fn fuzz_games(runs: usize, seed: u64) -> Result<Check> {
    let mut illegal = 0;
    let mut bad_outcomes = 0;
    let mut per_game = [0usize; 3];
    for r in 0..runs as u64 {
        let (kind, t) = random_run(seed.wrapping_mul(1_000_003).wrapping_add(r))?;
        per_game[kind as usize] += 1;
        let space: Space = t.arena.parse()?;
        let start = match &t.history.center {
            Some(c) => History::with_center(kind, c.clone()),
            None => History::new(kind),
        };
        let mut referee = Referee::new(&space, start);
        for mv in &t.history.moves {
            if referee.submit(mv.clone()).is_err() {
                illegal += 1;
                break;
            }
        }
        if t.rounds() != t.depth {
            illegal += 1;
        }
        if kind != GameKind::Gruenhage && !verify_outcome(&space, &t.history, &t.outcome)? {
            bad_outcomes += 1;
        }
    }
    Ok(Check::new(
        "fuzzed-referee",
        illegal == 0 && bad_outcomes == 0,
        json!({ "runs": runs, "bm": per_game[0], "ch": per_game[1], "gruenhage": per_game[2], "illegal": illegal, "bad_outcomes": bad_outcomes }),
    ))
}

pub fn diagonal_transcript(depth: usize) -> Result<SpaceTranscript> {
    run_game(GameKind::BanachMazur, &Space::Rationals, &mut DiagonalBeta::default(), &mut RefineAlpha::new("halver"), depth)
}

/// β's diagonal strategy on ℚ excludes each of the first `depth` enumerated
/// rationals; every exclusion is re-tested by membership.
pub fn diagonal_check(depth: usize) -> Result<Check> {
    let t = diagonal_transcript(depth)?;
    let Outcome::BetaCertified { prefix, exclusions } = &t.outcome else {
        return Ok(Check::new("diagonal-bm", false, json!({ "outcome": t.outcome.tag() })));
    };
    let mut confirmed = 0;
    for (k, e) in exclusions.iter().enumerate() {
        let qk = Point::Rational(enumerate_rational(k));
        let open = t.history.moves.get(e.move_index).and_then(Move::open);
        if e.index == k && e.point == qk && open.is_some_and(|u| !Space::Rationals.member(&qk, u).unwrap_or(true)) {
            confirmed += 1;
        }
    }
    let passed = *prefix == depth && confirmed == depth;
    Ok(Check::new("diagonal-bm", passed, json!({ "prefix": prefix, "confirmed": confirmed })))
}

pub fn choquet_cylinder_transcript(depth: usize) -> Result<SpaceTranscript> {
    run_game(GameKind::StrongChoquet, &Space::BaireOmega, &mut CanonicalBeta, &mut RefineAlpha::new("cylinder"), depth)
}

/// Ch(ω^ω) against the cylinder α is α-certified at every depth `1..=max`, with
/// the witness in every open.
pub fn choquet_cylinder_check(max: usize) -> Result<Check> {
    let mut failures = Vec::new();
    for d in 1..=max {
        let t = choquet_cylinder_transcript(d)?;
        let ok = match t.outcome.witness() {
            Some(x) => t.history.opens().all(|u| Space::BaireOmega.member(x, u).unwrap_or(false)),
            None => false,
        };
        if !ok {
            failures.push(d);
        }
    }
    Ok(Check::new("choquet-cylinder", failures.is_empty(), json!({ "depths": max, "failures": failures })))
}

/// Random β against the remark tactic: a β point in `D` is the α witness.
pub fn remark_check(runs: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(17));
    let (mut hits, mut mismatches) = (0, 0);
    for r in 0..runs as u64 {
        let bound = rng.gen_range(0..=16);
        let s: Space = format!("remark-qd:{bound}").parse()?;
        let depth = rng.gen_range(1..=16);
        let t = run_game(GameKind::StrongChoquet, &s, &mut RandomBeta::new(seed.wrapping_add(r)), &mut RemarkTactic, depth)?;
        let first_d = t.history.first_moves().find_map(|m| match m.point() {
            Some(p @ Point::Isolated(_)) => Some(p.clone()),
            _ => None,
        });
        if let Some(d) = first_d {
            hits += 1;
            if t.outcome.witness() != Some(&d) || !t.outcome.is_alpha() {
                mismatches += 1;
            }
        }
    }
    Ok(Check::new("remark-tactic", hits > 0 && mismatches == 0, json!({ "runs": runs, "hits": hits, "mismatches": mismatches })))
}

// ---- krom ----

fn random_chain(rng: &mut ChaCha8Rng, base: &[BaseElement], len: usize) -> Result<DecreasingSeq> {
    let s = Space::Rationals;
    let keep = rng.gen_range(1..=base.len().min(len));
    let mut elems: Vec<BaseElement> = base[..keep].to_vec();
    while elems.len() < len {
        let last = elems.last().expect("nonempty").clone();
        let next = if rng.gen_bool(0.3) { last } else { s.random_subelement(&last, rng)? };
        elems.push(next);
    }
    DecreasingSeq::new(&s, elems)
}

/// Random Krom points drawn from for the ultrametric triples.
const POOL: usize = 1000;

/// Symmetry and the strong triangle inequality on random triples drawn from a
/// pool of random points sharing prefixes.
pub fn ultrametric_check(triples: usize, seed: u64) -> Result<Check> {
    let s = Space::Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(99));
    let unit = BaseElement::Interval(Interval::bounded(Rat::zero(), Rat::one()).expect("nonempty"));
    let mut base = vec![unit];
    for _ in 0..7 {
        let next = s.random_subelement(base.last().expect("nonempty"), &mut rng)?;
        base.push(next);
    }
    let pool = (0..POOL)
        .map(|_| {
            let c = random_chain(&mut rng, &base, 8)?;
            let w = s.pick_point(c.last())?;
            KromPoint::repeat(&s, c, w)
        })
        .collect::<Result<Vec<_>>>()?;
    let (mut asym, mut triangle) = (0, 0);
    for _ in 0..triples {
        let [f, g, h] = [0; 3].map(|_| &pool[rng.gen_range(0..POOL)]);
        let (fg, gh, fh) = (ultradist(f, g, 8)?, ultradist(g, h, 8)?, ultradist(f, h, 8)?);
        if fg != ultradist(g, f, 8)? {
            asym += 1;
        }
        if fh.bound() > fg.bound().max(gh.bound()) {
            triangle += 1;
        }
    }
    Ok(Check::new("ultrametric", asym == 0 && triangle == 0, json!({ "triples": triples, "asymmetric": asym, "triangle": triangle })))
}

/// Canonical Krom points over random stems certify and their certificates verify.
pub fn k0_check(count: usize, seed: u64) -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(5));
    let mut failures = 0;
    for s in [Space::BaireOmega, Space::Cantor, Space::Rationals] {
        for _ in 0..count {
            let mut elems = vec![s.whole()];
            for _ in 0..rng.gen_range(0..4) {
                let next = s.random_subelement(elems.last().expect("nonempty"), &mut rng)?;
                elems.push(next);
            }
            let f = KromPoint::canonical(&s, DecreasingSeq::new(&s, elems)?)?;
            let cert = k0_certify(&f, 6, 4096)?;
            if !k0_verify(&f, &cert)? {
                failures += 1;
            }
        }
    }
    Ok(Check::new("k0-certificates", failures == 0, json!({ "points": 3 * count, "failures": failures })))
}

// ---- branchtree ----

/// For `n ≤ max`: `|Tₙ₊₁| = 2ⁿ`, successors partition `Tₙ₊₁`, `t = s_t ⌢ (n−k−1)`,
/// `s_{t⁻} = t` and `s_{t⁺} = s_t`.
pub fn tree_check(max: usize) -> Result<Check> {
    let mut violations = Vec::new();
    for n in 1..=max {
        let here = branchtree::level(n);
        let next = branchtree::level(n + 1);
        if next.len() != 1 << n {
            violations.push(format!("|T_{}| = {}", n + 1, next.len()));
        }
        let mut union = BTreeSet::new();
        for t in &here {
            let (minus, plus) = branchtree::successors(t)?;
            union.insert(minus.clone());
            union.insert(plus.clone());
            if branchtree::source(&minus)?.0 != *t || branchtree::source(&plus)?.0 != branchtree::source(t)?.0 {
                violations.push(format!("source law at {t}"));
            }
        }
        if union != next.iter().cloned().collect::<BTreeSet<TreeNode>>() {
            violations.push(format!("successors of T_{n} do not partition T_{}", n + 1));
        }
        for t in &here {
            let (s, k) = branchtree::source(t)?;
            if s.child((n - k - 1) as u64) != *t {
                violations.push(format!("source identity at {t}"));
            }
        }
    }
    Ok(Check::new("branchtree", violations.is_empty(), json!({ "max_level": max, "violations": violations })))
}

// ---- transfer ----

/// The dyadic rationals of `(0,1)` level by level, built directly.
fn dyadics(count: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(count);
    let mut a = 1u32;
    while out.len() < count {
        let d = 1i64 << a;
        out.extend((1..d).step_by(2).map(|b| Rat::new(b, d)));
        a += 1;
    }
    out.truncate(count);
    out
}

pub fn product_report(depth: usize) -> Result<ProductReport> {
    run_product(depth, puncture_schedule(depth), 4096)
}

/// `2ⁿ` refinements at level `n`, (O)/(W) certified exactly, and a witness
/// avoiding every puncture.
pub fn product_check(depth: usize) -> Result<Check> {
    let r = product_report(depth)?;
    let counts_ok = r.refinements.iter().enumerate().all(|(n, c)| *c == 1 << n) && r.refinements.len() == depth;
    let levels_ok = r.levels.iter().all(|l| l.ok() && l.exact);
    let avoided = match (&r.witness.x, &r.witness.y) {
        (Point::Rational(x), Point::Rational(y)) => dyadics(depth).iter().all(|p| !(x == p && y == p)),
        _ => false,
    };
    let passed = r.ok() && counts_ok && levels_ok && avoided;
    Ok(Check::new(
        "product",
        passed,
        json!({ "depth": depth, "refinements": r.refinements, "levels_ok": levels_ok, "punctures_avoided": avoided, "witness": r.witness }),
    ))
}

pub fn krom_product_check(max_points: usize, max_indices: usize, depth: usize) -> Result<Check> {
    let reports = run_krom_product_exhaustive(max_points, max_indices, depth)?;
    let plays: usize = reports.iter().map(|r| r.plays()).sum();
    let failing: Vec<Value> = reports.iter().filter(|r| !r.ok()).map(|r| json!(r)).collect();
    Ok(Check::new(
        "krom-product",
        failing.is_empty(),
        json!({ "cases": reports.len(), "plays": plays, "max_points": max_points, "max_indices": max_indices, "depth": depth, "failing": failing }),
    ))
}

/// Regenerates the disjoint family below `((-1,1)) ⌢ U` and compares final
/// intervals endpoint by endpoint.
pub fn projection_check(family: usize, seed: u64) -> Result<Check> {
    let s = Space::Rationals;
    let start = BaseElement::Interval(Interval::bounded(Rat::integer(-1), Rat::one()).expect("nonempty"));
    let f0 = ccc_pi_base_step_default(&s, &DecreasingSeq::singleton(&s, start)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let members = generate_disjoint_family(&f0, family, &mut rng)?;
    let BaseElement::Interval(u) = f0.last() else { return Err(Error::InvariantViolation("f0 ends in an interval".into())) };
    let mut intervals = Vec::with_capacity(members.len());
    for g in &members {
        let BaseElement::Interval(i) = g.last() else { return Err(Error::InvariantViolation("member ends in an interval".into())) };
        intervals.push(i.clone());
    }
    let inside = intervals.iter().all(|i| i.is_subset(u));
    let apart = |a: &Interval, b: &Interval| match (&a.lo, &a.hi, &b.lo, &b.hi) {
        (Some(alo), Some(ahi), Some(blo), Some(bhi)) => ahi <= blo || bhi <= alo,
        _ => false,
    };
    let mut overlaps = 0;
    let mut stems_overlap = 0;
    for i in 0..intervals.len() {
        for j in i + 1..intervals.len() {
            if !apart(&intervals[i], &intervals[j]) {
                overlaps += 1;
            }
            if !basic_disjoint(&members[i], &members[j]) {
                stems_overlap += 1;
            }
        }
    }
    let passed = members.len() == family && inside && overlaps == 0 && stems_overlap == 0;
    Ok(Check::new("projection", passed, json!({ "family": members.len(), "inside": inside, "overlaps": overlaps, "stem_overlaps": stems_overlap })))
}

pub fn lowering_report(depth: usize) -> Result<LoweringReport> {
    run_lowering(Space::BaireOmega, depth, 4096, &mut RefineAlpha::new("cylinder"))
}

/// The glue law, strictness and K⁰ certificates on ω^ω, re-verified.
pub fn lowering_check(depth: usize) -> Result<Check> {
    let r = lowering_report(depth)?;
    let g = &r.glue;
    let certs_verify = g.round_certificates.len() == depth + 1 && g.certificate.evidence.len() >= depth;
    let passed = r.ok() && certs_verify && (g.strictly_decreasing || g.singleton_stabilized);
    Ok(Check::new(
        "lowering",
        passed,
        json!({ "depth": depth, "law": g.law, "strictly_decreasing": g.strictly_decreasing, "singleton_stabilized": g.singleton_stabilized, "survives": g.survives, "ms": g.ms, "certificates": g.round_certificates.len() + 1 }),
    ))
}

/// Adjudicates a finished history again; used to cross-check transcripts.
pub fn recertify(t: &SpaceTranscript) -> Result<bool> {
    let space: Space = t.arena.parse()?;
    Ok(certify(&space, &t.history, t.depth)? == t.outcome)
}
