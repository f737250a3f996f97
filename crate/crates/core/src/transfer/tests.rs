use super::krom_product::*;
use super::lowering::*;
use super::product::*;
use super::projection::projection_demo;
use super::*;
use crate::branchtree::{self, TreeNode};
use crate::error::Error;
use crate::game::{play_rounds, EchoAlpha, GameKind, History, Move, RefineAlpha, Strategy};
use crate::rational::Rat;
use crate::topology::{FiniteSet, FiniteTopology, Interval};

fn q(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn iv(a: Rat, b: Rat) -> BaseElement {
    BaseElement::Interval(Interval::bounded(a, b).unwrap())
}

fn unit() -> BaseElement {
    iv(q(0, 1), q(1, 1))
}

fn finite(spec: &str) -> Space {
    format!("finite:{spec}").parse().unwrap()
}

// ---- arenas ----

#[test]
fn product_boxes_compare_coordinatewise() {
    let a = ProductArena::new(vec![Space::Rationals, Space::Rationals]);
    let b0: ProductBox = [(0, unit())].into_iter().collect();
    let b01: ProductBox = [(0, iv(q(0, 1), q(1, 2))), (1, unit())].into_iter().collect();
    assert!(a.contains(&b0, &a.whole()).unwrap());
    assert!(!a.contains(&a.whole(), &b0).unwrap());
    assert!(a.contains(&b01, &b0).unwrap());
    assert!(!a.contains(&b0, &b01).unwrap());
    let x = a.pick_point(&b01).unwrap();
    assert!(a.member(&x, &b01).unwrap());
    let bad: ProductBox = [(2, unit())].into_iter().collect();
    assert!(matches!(a.contains(&bad, &b0), Err(Error::Domain(_))));
    assert!(matches!(a.member(&vec![], &b0), Err(Error::Domain(_))));
}

#[test]
fn krom_product_missing_index_is_whole_only_for_one_basic_factor() {
    let s = finite("sierpinski");
    let p = finite("point");
    let arena = KromProductArena::new(vec![s.clone(), p.clone()]);
    let whole_s: KromBox = [(0, DecreasingSeq::singleton(&s, s.whole()).unwrap())].into_iter().collect();
    let whole_p: KromBox = [(1, DecreasingSeq::singleton(&p, p.whole()).unwrap())].into_iter().collect();
    assert!(!arena.contains(&arena.whole(), &whole_s).unwrap());
    assert!(arena.contains(&arena.whole(), &whole_p).unwrap());
    assert!(arena.contains(&whole_s, &arena.whole()).unwrap());
    let f = arena.pick_point(&whole_s).unwrap();
    assert!(arena.member(&f, &whole_s).unwrap());
    assert_eq!(arena.project(&whole_s).get(0), Some(&s.whole()));
}

// ---- product ----

#[test]
fn dyadic_points_by_level() {
    let want = [q(1, 2), q(1, 4), q(3, 4), q(1, 8), q(3, 8), q(5, 8), q(7, 8), q(1, 16)];
    for (j, w) in want.iter().enumerate() {
        assert_eq!(dyadic_point(j), *w, "j = {j}");
    }
}

#[test]
fn refinements_double_per_level() {
    let r = run_product(6, puncture_schedule(6), 4096).unwrap();
    assert!(r.ok(), "{:?}", r.levels);
    assert_eq!(r.refinements[0], 1);
    for n in 1..r.refinements.len() {
        // two refinements per node of the tier, counted independently of the state
        let tier = branchtree::level(n).len();
        assert_eq!(r.refinements[n], 2 * tier);
        assert_eq!(r.refinements[n], 1 << n);
    }
}

#[test]
fn invariants_hold_at_depth_one_and_six() {
    for depth in [1, 6] {
        let r = run_product(depth, puncture_schedule(depth), 4096).unwrap();
        assert!(r.ok());
        assert!(r.levels.iter().all(|l| l.o_holds && l.w_holds && l.convergence && l.exact));
        assert_eq!(r.levels.len(), depth);
    }
}

#[test]
fn whole_space_oracles_give_a_legal_chain() {
    let r = run_product(4, whole_schedule(4), 4096).unwrap();
    assert!(r.ok());
    assert!(r.witness.oracle_checks.iter().all(|(_, v)| *v == Some(true)));
}

#[test]
fn depth_zero_assembles_from_the_start_box() {
    let r = run_product(0, vec![], 4096).unwrap();
    assert!(r.ok());
    assert!(Space::Rationals.member(&r.witness.x, &unit()).unwrap());
    assert!(Space::Rationals.member(&r.witness.y, &unit()).unwrap());
}

#[test]
fn witness_avoids_the_punctures() {
    let depth = 6;
    let r = run_product(depth, puncture_schedule(depth), 4096).unwrap();
    let (Point::Rational(x), Point::Rational(y)) = (&r.witness.x, &r.witness.y) else { panic!("ℚ points") };
    assert!(*x > q(0, 1) && *x < q(1, 1) && *y > q(0, 1) && *y < q(1, 1));
    // the punctures listed by hand: 1/2, 1/4, 3/4, 1/8, 3/8, 5/8
    for p in [q(1, 2), q(1, 4), q(3, 4), q(1, 8), q(3, 8), q(5, 8)] {
        assert!(!(*x == p && *y == p), "witness is the puncture {p}");
    }
    assert_eq!(r.witness.oracle_checks.len(), depth);
}

fn played_state(depth: usize) -> ProductState {
    let mut state = ProductState::new(Space::Rationals, Space::Rationals, puncture_schedule(depth), unit(), unit()).unwrap();
    let mut sx = build_sigma_x(&mut state);
    let p = play_rounds(&Space::Rationals, History::new(GameKind::BanachMazur), &mut sx, &mut EchoAlpha, depth);
    assert!(p.error.is_none(), "{:?}", p.error);
    state
}

#[test]
fn sigma_y_against_identity_follows_k_equal_n() {
    let state = played_state(6);
    let mut sy = build_sigma_y(&state, 64);
    let p = play_rounds(&Space::Rationals, History::new(GameKind::StrongChoquet), &mut sy, &mut EchoAlpha, 3);
    assert!(p.error.is_none(), "{:?}", p.error);
    let t = sy.trace(p.history.reply_moves().filter_map(Move::open)).unwrap();
    assert_eq!(t.ks, vec![0, 1, 2]);
    assert_eq!(t.node, TreeNode::new(vec![0, 1, 2]));
}

#[test]
fn sigma_y_matches_an_independent_linear_search() {
    let state = played_state(7);
    let mut sy = build_sigma_y(&state, 64);
    let mut alpha = RefineAlpha::new("halver");
    let p = play_rounds(&Space::Rationals, History::new(GameKind::StrongChoquet), &mut sy, &mut alpha, 3);
    let replies: Vec<BaseElement> = p.history.reply_moves().filter_map(Move::open).cloned().collect();
    assert!(!replies.is_empty());
    let t = sy.trace(&replies).unwrap();

    let mut node = TreeNode::root();
    let mut ks = Vec::new();
    for (n, b) in replies.iter().enumerate() {
        let k = (n as u64..)
            .find(|&k| {
                let c = node.child(k);
                let rec = state.node(&c).expect("materialized");
                Space::Rationals.member(&rec.y, b).unwrap()
            })
            .unwrap();
        assert!(k >= n as u64);
        ks.push(k);
        node = node.child(k);
    }
    assert_eq!(t.ks, ks);
    assert_eq!(t.node, node);
}

#[test]
fn sigma_y_needs_a_played_sigma_x() {
    let state = ProductState::new(Space::Rationals, Space::Rationals, vec![], unit(), unit()).unwrap();
    let sy = build_sigma_y(&state, 8);
    assert!(matches!(sy.trace(std::iter::empty()), Err(Error::Precondition(_))));
}

#[test]
fn product_runs_are_deterministic() {
    let a = serde_json::to_string(&run_product(5, puncture_schedule(5), 4096).unwrap()).unwrap();
    let b = serde_json::to_string(&run_product(5, puncture_schedule(5), 4096).unwrap()).unwrap();
    assert_eq!(a, b);
}

// ---- Krom products ----

#[test]
fn lifted_first_move_is_singleton_stems() {
    let factors = vec![Space::Rationals, Space::Rationals];
    let star = KromProductArena::new(factors.clone());
    let base = ProductArena::new(factors);
    let v0 = match ProductCanonicalBeta.choose(&base, &History::new(GameKind::BanachMazur)).unwrap() {
        Move::Open(b) => b,
        m => panic!("{m:?}"),
    };
    let mut lift = krom_lift_beta(ProductCanonicalBeta);
    let (_, vstar) = lift.replay(&star, &History::new(GameKind::BanachMazur)).unwrap();
    assert_eq!(vstar.indices().collect::<Vec<_>>(), v0.indices().collect::<Vec<_>>());
    for (i, s) in &vstar.support {
        assert_eq!(s.elems(), &[v0.get(*i).unwrap().clone()]);
    }
}

#[test]
fn lift_starts_fresh_stems_on_new_indices() {
    let factors = vec![Space::Rationals, Space::Rationals];
    let star = KromProductArena::new(factors);
    let mut lift = krom_lift_beta(ProductCanonicalBeta);
    let mut h: KromHistory = History::new(GameKind::BanachMazur);
    h.moves.push(lift.choose(&star, &h).unwrap());
    let Move::Open(v0) = &h.moves[0] else { panic!() };
    assert!(v0.get(1).is_none());
    // α keeps coordinate 0 and opens coordinate 1 itself
    let mut reply = v0.clone();
    reply.insert(1, DecreasingSeq::singleton(&Space::Rationals, unit()).unwrap());
    h.moves.push(Move::Open(reply));
    let Move::Open(v1) = lift.choose(&star, &h).unwrap() else { panic!() };
    assert_eq!(v1.get(0).unwrap().len(), 2);
    assert_eq!(v1.get(1).unwrap().len(), 2);
    assert_eq!(v1.get(1).unwrap().elems()[0], unit());
}

#[test]
fn lowered_moves_project_last_entries() {
    let factors = vec![Space::Rationals];
    let base = ProductArena::new(factors.clone());
    let star = KromProductArena::new(factors);
    let mut lower = krom_lower_beta(KromCanonicalBeta);
    let mut h: ProductHistory = History::new(GameKind::BanachMazur);
    for _ in 0..3 {
        let mv = lower.choose(&base, &h).unwrap();
        let reply = mv.clone();
        h.moves.push(mv);
        h.moves.push(reply);
    }
    let (krom, v) = lower.replay(&base, &h).unwrap();
    assert_eq!(v, star.project(krom.last_open().unwrap()));
    for (k, mv) in h.first_moves().enumerate() {
        let Move::Open(b) = mv else { panic!() };
        let Move::Open(s) = &krom.moves[2 * k] else { panic!() };
        assert_eq!(*b, star.project(s));
    }
}

#[test]
fn exhaustive_small_products() {
    let reports = run_krom_product_exhaustive(2, 2, 2).unwrap();
    // 1 topology on 1 point and 4 on 2 points, each as 1 or 2 copies
    assert_eq!(reports.len(), (1 + FiniteTopology::all_on(2).len()) * 2);
    for r in &reports {
        assert!(r.ok(), "{r:?}");
        assert!(r.plays() > 0);
    }
}

#[test]
fn extraction_both_ways() {
    let factors = vec![finite("discrete:2"), finite("sierpinski")];
    let base = ProductArena::new(factors.clone());
    let star = KromProductArena::new(factors);
    let mut lower = krom_lower_beta(KromCanonicalBeta);
    let mut h: ProductHistory = History::new(GameKind::BanachMazur);
    for _ in 0..2 {
        let mv = lower.choose(&base, &h).unwrap();
        h.moves.push(mv.clone());
        h.moves.push(mv);
    }
    h.moves.push(lower.choose(&base, &h).unwrap());
    let x = base.pick_point(h.last_open().unwrap()).unwrap();
    let (krom, _) = lower.replay(&base, &h.truncated(h.len() - 1)).unwrap();
    let f = extract_counterplay_lower(&star, &x, &krom).unwrap();
    assert_eq!(f.iter().map(|g| g.witness().clone()).collect::<Vec<_>>(), x);

    let mut lift = krom_lift_beta(ProductCanonicalBeta);
    let mut hs: KromHistory = History::new(GameKind::BanachMazur);
    for _ in 0..2 {
        let mv = lift.choose(&star, &hs).unwrap();
        hs.moves.push(mv.clone());
        hs.moves.push(mv);
    }
    let (projected, vstar) = lift.replay(&star, &hs).unwrap();
    let g = star.pick_point(&vstar).unwrap();
    let y = extract_counterplay_lift(&base, &g, &projected).unwrap();
    assert_eq!(y.len(), 2);
}

// ---- lowering ----

#[test]
fn lowering_on_baire_space_glues() {
    let space: Space = "baire-omega".parse().unwrap();
    let r = run_lowering(space, 5, 4096, &mut RefineAlpha::new("cylinder")).unwrap();
    assert!(r.ok(), "{:?}", r.glue);
    assert!(r.glue.strictly_decreasing);
    assert!(r.glue.law && r.glue.survives && r.glue.strict_rounds);
    assert_eq!(r.glue.ms.len(), 6);
    assert!(r.glue.ms.windows(2).all(|w| w[0] < w[1]));
    for (m, n) in r.glue.ms.iter().zip(&r.glue.ns) {
        if let Some(n) = n {
            assert!(n >= m);
        }
    }
}

#[test]
fn lowering_plays_singletons_as_is() {
    let space = finite("discrete:2");
    let r = run_lowering(space.clone(), 3, 4096, &mut EchoAlpha).unwrap();
    assert!(r.ok(), "{:?}", r.glue);
    let zero = BaseElement::Open(FiniteSet(0b01));
    let Move::Pointed { open, .. } = &r.play.moves[0] else { panic!() };
    assert_eq!(*open, zero);
    assert!(r.glue.singleton_stabilized);
    assert!(!r.glue.strictly_decreasing);
}

#[test]
fn lowering_needs_a_proper_refinement() {
    let space = finite("indiscrete:2");
    let e = run_lowering(space, 2, 64, &mut EchoAlpha).unwrap_err();
    assert!(matches!(e, Error::Unsupported(_)), "{e:?}");
}

#[test]
fn lowering_rejects_spaces_without_bco() {
    let e = run_lowering(Space::Rationals, 2, 64, &mut EchoAlpha).unwrap_err();
    assert!(matches!(e, Error::Unsupported(_)), "{e:?}");
}

#[test]
fn canonical_krom_beta_extends_by_one() {
    let space: Space = "baire-omega".parse().unwrap();
    let arena = KromChArena::new(space, 3, 256);
    let Move::Pointed { point, open } = CanonicalKromChBeta.choose(&arena, &History::new(GameKind::StrongChoquet)).unwrap()
    else {
        panic!()
    };
    assert_eq!(open.len(), 2);
    assert!(arena.member(&point, &open).unwrap());
}

// ---- projection and scenarios ----

#[test]
fn projection_of_a_hundred_members() {
    let r = projection_demo(100, 7).unwrap();
    assert_eq!(r.family, 100);
    assert!(r.ok());
}

#[test]
fn scenario_config_defaults_and_errors() {
    let cfg = ScenarioConfig::from_json(r#"{"transfer": "projection", "family": 10}"#).unwrap();
    assert_eq!(cfg.depth, ScenarioConfig::default().depth);
    let r = run_scenario(&cfg).unwrap();
    assert!(r.ok);
    assert!(matches!(ScenarioConfig::from_json(r#"{"bogus": 1}"#), Err(Error::Parse(_))));
    let bad = ScenarioConfig { transfer: "nope".into(), ..Default::default() };
    assert!(matches!(run_scenario(&bad), Err(Error::Parse(_))));
}

#[test]
fn scenario_runs_every_transfer() {
    for t in ["product", "krom-lift", "krom-lower", "krom-roundtrip", "lowering"] {
        let cfg = ScenarioConfig { transfer: t.into(), depth: 2, ..Default::default() };
        let r = run_scenario(&cfg).unwrap_or_else(|e| panic!("{t}: {e}"));
        assert!(r.ok, "{t}: {}", r.report);
    }
}

#[test]
fn krom_ch_membership_separates_stalls_from_fuel() {
    let space: Space = "baire-omega".parse().unwrap();
    let arena = KromChArena::new(space.clone(), 4, 2);
    let whole = arena.whole();
    let stalled = KromPoint::repeat(&space, whole.clone(), Point::Branch(vec![])).unwrap();
    assert!(!arena.member(&stalled, &whole).unwrap());
    let shrinking = KromPoint::canonical(&space, whole.clone()).unwrap();
    assert!(matches!(arena.member(&shrinking, &whole), Err(Error::Fuel(_))));
    let roomy = KromChArena::new(space, 4, 64);
    assert!(roomy.member(&shrinking, &whole).unwrap());
}
