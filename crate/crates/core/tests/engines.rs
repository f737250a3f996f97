use baire_core::game::{registry, run_game, verify_outcome, Arena, GameKind, History, Move, Outcome, Referee};
use baire_core::krom::{basic_disjoint, generate_disjoint_family, DecreasingSeq};
use baire_core::topology::Space;
use baire_core::transfer::{run_scenario, ScenarioConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SPACES: &[&str] = &["rationals", "baire-omega", "cantor", "finite:sierpinski", "finite:discrete:3", "remark-qd:4"];

fn replay(space: &Space, history: &History<<Space as Arena>::Point, <Space as Arena>::Open>) {
    let mut referee = Referee::new(space, History::new(history.kind));
    for mv in &history.moves {
        referee.submit(mv.clone()).expect("recorded move is legal on replay");
    }
    assert_eq!(referee.history().moves.len(), history.moves.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_plays_replay_and_nest(space in 0..SPACES.len(), choquet in any::<bool>(), seed in any::<u64>(), depth in 0usize..10) {
        let space: Space = SPACES[space].parse().unwrap();
        let kind = if choquet { GameKind::StrongChoquet } else { GameKind::BanachMazur };
        let mut beta = registry::beta("random", seed).unwrap();
        let mut alpha = registry::alpha("random", seed.wrapping_add(1)).unwrap();
        let t = run_game(kind, &space, &mut *beta, &mut *alpha, depth).unwrap();
        prop_assert_eq!(t.rounds(), depth);
        replay(&space, &t.history);
        let opens: Vec<_> = t.history.opens().cloned().collect();
        for w in opens.windows(2) {
            prop_assert!(space.contains(&w[1], &w[0]).unwrap());
        }
        if choquet {
            for mv in t.history.first_moves() {
                let Move::Pointed { point, open } = mv else { panic!("Choquet β move without a point") };
                prop_assert!(space.member(point, open).unwrap());
            }
        }
        prop_assert!(verify_outcome(&space, &t.history, &t.outcome).unwrap());
    }

    #[test]
    fn generated_families_are_pairwise_disjoint(seed in any::<u64>(), n in 1usize..24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f0 = DecreasingSeq::new(&Space::Rationals, vec![Space::Rationals.whole()]).unwrap();
        let family = generate_disjoint_family(&f0, n, &mut rng).unwrap();
        prop_assert_eq!(family.len(), n);
        for (i, a) in family.iter().enumerate() {
            for b in &family[i + 1..] {
                prop_assert!(basic_disjoint(a, b));
            }
        }
    }
}

#[test]
fn diagonal_beta_wins_on_rationals() {
    let space = Space::Rationals;
    let mut beta = registry::beta("diagonal", 0).unwrap();
    let mut alpha = registry::alpha("halver", 0).unwrap();
    let t = run_game(GameKind::BanachMazur, &space, &mut *beta, &mut *alpha, 20).unwrap();
    assert!(matches!(t.outcome, Outcome::BetaCertified { .. }), "{:?}", t.outcome);
    replay(&space, &t.history);
    assert!(verify_outcome(&space, &t.history, &t.outcome).unwrap());
}

#[test]
fn cylinder_alpha_wins_choquet_on_baire_space() {
    let space = Space::BaireOmega;
    for depth in 1..=16 {
        let mut beta = registry::beta("canonical", 0).unwrap();
        let mut alpha = registry::alpha("cylinder", 0).unwrap();
        let t = run_game(GameKind::StrongChoquet, &space, &mut *beta, &mut *alpha, depth).unwrap();
        assert!(t.outcome.is_alpha(), "depth {depth}: {:?}", t.outcome);
        replay(&space, &t.history);
    }
}

#[test]
fn transcripts_are_deterministic() {
    let run = || {
        let space: Space = "cantor".parse().unwrap();
        let mut beta = registry::beta("random:3", 0).unwrap();
        let mut alpha = registry::alpha("random:4", 0).unwrap();
        run_game(GameKind::BanachMazur, &space, &mut *beta, &mut *alpha, 12).unwrap().to_jsonl()
    };
    assert_eq!(run(), run());
}

#[test]
fn every_transfer_scenario_succeeds() {
    for transfer in ["projection", "product", "krom-lift", "krom-lower", "krom-roundtrip", "lowering"] {
        let cfg = ScenarioConfig::from_json(&format!(r#"{{"transfer": "{transfer}", "depth": 3, "family": 20}}"#)).unwrap();
        let r = run_scenario(&cfg).unwrap();
        assert!(r.ok, "{transfer}: {}", r.report);
    }
}

#[test]
fn scenario_config_rejects_unknown_keys() {
    assert!(ScenarioConfig::from_json(r#"{"transfr": "product"}"#).is_err());
    let cfg = ScenarioConfig::from_json(r#"{"transfer": "nope"}"#).unwrap();
    assert!(run_scenario(&cfg).is_err());
}
