use std::collections::BTreeSet;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;

fn q(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn iv(a: Rat, b: Rat) -> BaseElement {
    BaseElement::Interval(Interval::bounded(a, b).unwrap())
}

fn rq(n: i64, d: i64) -> Point {
    Point::Rational(q(n, d))
}

fn space(name: &str) -> Space {
    name.parse().unwrap()
}

#[test]
fn contains_rational_intervals() {
    let s = Space::Rationals;
    assert!(s.contains(&iv(q(1, 4), q(1, 2)), &iv(q(0, 1), q(1, 1))).unwrap());
    assert!(!s.contains(&iv(q(0, 1), q(1, 1)), &iv(q(1, 4), q(1, 2))).unwrap());
    let u = iv(q(-3, 7), q(2, 5));
    assert!(s.contains(&u, &u).unwrap());
}

#[test]
fn contains_rejects_mismatched_spaces() {
    let err = Space::Rationals.contains(&BaseElement::Cylinder(vec![1]), &Space::Rationals.whole());
    assert!(matches!(err, Err(Error::Domain(_))));
    let fin = space("finite:sierpinski");
    // {1} alone is not open in the Sierpinski lattice {∅,{0},{0,1}}
    assert!(matches!(fin.validate_element(&BaseElement::Open(FiniteSet(0b10))), Err(Error::Domain(_))));
}

#[test]
fn contains_on_finite_lattice_matches_subset_test() {
    // {∅,{0},{0,1}}: brute-force subset relation over the explicit sets
    let fin = space("finite:sierpinski");
    let sets: Vec<Vec<usize>> = vec![vec![0], vec![0, 1]];
    for a in &sets {
        for b in &sets {
            let brute = a.iter().all(|p| b.contains(p));
            let got = fin
                .contains(
                    &BaseElement::Open(FiniteSet::from_points(a.iter().copied())),
                    &BaseElement::Open(FiniteSet::from_points(b.iter().copied())),
                )
                .unwrap();
            assert_eq!(got, brute, "{a:?} ⊆ {b:?}");
        }
    }
}

#[test]
fn pick_point_examples() {
    assert_eq!(Space::Rationals.pick_point(&iv(q(0, 1), q(1, 1))).unwrap(), rq(1, 2));
    assert_eq!(
        Space::BaireOmega.pick_point(&BaseElement::Cylinder(vec![2, 5])).unwrap(),
        Point::Branch(vec![2, 5])
    );
    assert_eq!(
        space("remark-qd:10").pick_point(&BaseElement::Singleton(7)).unwrap(),
        Point::Isolated(7)
    );
    for name in ["rationals", "baire-omega", "cantor", "finite:3:0;0,1", "remark-qd:5"] {
        let s = space(name);
        for k in 0..40 {
            let Some(u) = s.enumerate_base(k) else { break };
            let x = s.pick_point(&u).unwrap();
            assert!(s.member(&x, &u).unwrap(), "{name}: {x} ∉ {u:?}");
        }
    }
}

#[test]
fn refine_examples() {
    let s = Space::Rationals;
    let got = s.refine(&rq(1, 2), &iv(q(0, 1), q(1, 1)), 3).unwrap();
    assert_eq!(got, iv(q(1, 2) - q(1, 16), q(1, 2) + q(1, 16)));

    let x = Point::Branch(vec![4, 1, 7]);
    let got = Space::BaireOmega.refine(&x, &BaseElement::Cylinder(vec![4]), 2).unwrap();
    assert_eq!(got, BaseElement::Cylinder(vec![4, 1, 7]));

    let err = s.refine(&rq(3, 1), &iv(q(0, 1), q(1, 1)), 1);
    assert!(matches!(err, Err(Error::Precondition(_))));
}

#[test]
fn refine_on_finite_spaces_is_minimal_open() {
    // oracle: intersect all opens containing x, by brute force over the lattice
    for t in FiniteTopology::all_on(3) {
        let s = Space::Finite(t.clone());
        for x in 0..3 {
            let brute = t
                .opens()
                .iter()
                .filter(|o| o.contains(x))
                .fold(t.full().0, |acc, o| acc & o.0);
            for v in t.nonempty_opens().filter(|v| v.contains(x)) {
                let got = s.refine(&Point::Finite(x), &BaseElement::Open(v), 1).unwrap();
                assert_eq!(got, BaseElement::Open(FiniteSet(brute)));
            }
        }
    }
}

#[test]
fn neighborhood_base_examples() {
    let s = Space::Rationals;
    let got: Vec<BaseElement> = s.neighborhood_base(&rq(0, 1)).unwrap().take(3).collect();
    assert_eq!(got, vec![iv(q(-1, 1), q(1, 1)), iv(q(-1, 2), q(1, 2)), iv(q(-1, 4), q(1, 4))]);

    let got: Vec<BaseElement> = Space::BaireOmega
        .neighborhood_base(&Point::Branch(vec![3, 1]))
        .unwrap()
        .take(4)
        .collect();
    let cyl = |c: &[u64]| BaseElement::Cylinder(c.to_vec());
    assert_eq!(got, vec![cyl(&[]), cyl(&[3]), cyl(&[3, 1]), cyl(&[3, 1, 0])]);

    let r = space("remark-qd:0");
    let third = r.neighborhood_base_member(&rq(1, 3), 2).unwrap();
    assert_eq!(
        third,
        BaseElement::CoFinite {
            interval: Interval::ball(&q(1, 3), &q(1, 4)),
            excluded: BTreeSet::from([0, 1]),
        }
    );
}

#[test]
fn remark_base_members_contain_all_but_finitely_many_d() {
    let r = space("remark-qd:0");
    for k in 0..20 {
        for qi in 0..5 {
            let qq = crate::rational::enumerate_rational(qi);
            let u = r.neighborhood_base_member(&Point::Rational(qq), k).unwrap();
            let missing = (0..200u64).filter(|&d| !r.member(&Point::Isolated(d), &u).unwrap()).count();
            assert_eq!(missing, k as usize);
        }
    }
}

#[test]
fn gruenhage_responder_examples() {
    let w = gruenhage_w_strategy(&Space::Rationals, &rq(0, 1)).unwrap();
    assert_eq!(w.respond(&[]).unwrap(), iv(q(-1, 1), q(1, 1)));
    assert_eq!(w.respond(&[rq(1, 3)]).unwrap(), iv(q(-1, 2), q(1, 2)));
}

#[test]
fn gruenhage_responder_always_contains_center() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for name in ["rationals", "baire-omega", "cantor", "finite:3:0;0,1", "remark-qd:0"] {
        let s = space(name);
        for _ in 0..200 {
            let x = s.random_point(&s.whole(), &mut rng).unwrap();
            let w = gruenhage_w_strategy(&s, &x).unwrap();
            let n = rand::Rng::gen_range(&mut rng, 0..40);
            let u = w.respond_after(n).unwrap();
            assert!(s.member(&x, &u).unwrap());
        }
    }
}

#[test]
fn compliant_replies_converge_at_zero() {
    // replay: each reply chosen in the current neighborhood, measured against 2^-k+1
    let w = gruenhage_w_strategy(&Space::Rationals, &rq(0, 1)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut replies = Vec::new();
    for k in 0..30u32 {
        let u = w.respond(&replies).unwrap();
        let x = Space::Rationals.random_point(&u, &mut rng).unwrap();
        let Point::Rational(v) = &x else { unreachable!() };
        assert!(v.abs() < &Rat::dyadic(k) * &Rat::integer(2));
        replies.push(x);
    }
}

#[test]
fn puncture_oracle_examples() {
    let (x, y) = (Space::Rationals, Space::Rationals);
    let o = PunctureOracle::single(0, rq(1, 2), rq(1, 2));
    let unit = iv(q(0, 1), q(1, 1));
    let (u, v) = o.refine(&x, &y, &unit, &unit).unwrap();
    assert_eq!((u.clone(), v.clone()), (iv(q(0, 1), q(1, 2)), unit.clone()));
    assert_eq!(o.box_inside(&x, &y, &u, &v), Some(true));

    let far = PunctureOracle::single(0, rq(3, 1), rq(1, 2));
    assert_eq!(far.refine(&x, &y, &unit, &unit).unwrap(), (unit.clone(), unit.clone()));
}

#[test]
fn finite_complement_oracle_avoids_all_points() {
    let (x, y) = (Space::Rationals, Space::Rationals);
    let s: Vec<(Point, Point)> = (1..8).map(|k| (rq(k, 9), rq(9 - k, 9))).collect();
    let o = PunctureOracle::new(0, s.clone());
    let unit = iv(q(0, 1), q(1, 1));
    let (u, v) = o.refine(&x, &y, &unit, &unit).unwrap();
    assert!(x.contains(&u, &unit).unwrap() && y.contains(&v, &unit).unwrap());
    // sampling check against the explicit set
    let xs = x.sample_points(&u, 10).unwrap();
    let ys = y.sample_points(&v, 10).unwrap();
    let mut checked = 0;
    for a in &xs {
        for b in &ys {
            assert!(!s.contains(&(a.clone(), b.clone())));
            assert_eq!(o.member(a, b), Some(true));
            checked += 1;
        }
    }
    assert_eq!(checked, 100);
}

#[test]
fn puncture_of_isolated_point_exhausts_oracle() {
    let fin = space("finite:point");
    let o = PunctureOracle::single(0, Point::Finite(0), Point::Finite(0));
    let w = fin.whole();
    assert!(matches!(o.refine(&fin, &fin, &w, &w), Err(Error::Fuel(_))));
}

#[test]
fn avoid_point_on_each_space() {
    let cases = [
        ("rationals", iv(q(0, 1), q(1, 1)), rq(1, 3)),
        ("baire-omega", BaseElement::Cylinder(vec![1]), Point::Branch(vec![1, 4])),
        ("cantor", BaseElement::Cylinder(vec![1]), Point::Branch(vec![1, 1])),
        ("finite:discrete:3", BaseElement::Open(FiniteSet(0b111)), Point::Finite(1)),
        ("remark-qd:0", space("remark-qd:0").whole(), Point::Isolated(4)),
        ("remark-qd:0", space("remark-qd:0").whole(), rq(0, 1)),
    ];
    for (name, u, p) in cases {
        let s = space(name);
        let a = s.avoid_point(&u, &p).unwrap().unwrap();
        assert!(s.contains(&a, &u).unwrap(), "{name}");
        assert!(!s.member(&p, &a).unwrap(), "{name}");
    }
    let r = space("remark-qd:0");
    assert_eq!(r.avoid_point(&BaseElement::Singleton(2), &Point::Isolated(2)).unwrap(), None);
}

#[test]
fn point_enumerations_are_members_of_whole_space() {
    for name in ["rationals", "baire-omega", "cantor", "finite:3:0;0,1", "remark-qd:4", "remark-qd:0"] {
        let s = space(name);
        let mut seen = Vec::new();
        for k in 0..200 {
            let Some(p) = s.enumerate_point(k) else { break };
            s.validate_point(&p).unwrap();
            assert!(!seen.contains(&p), "{name}: repeated {p}");
            seen.push(p);
        }
    }
}

#[test]
fn names_round_trip() {
    for name in ["rationals", "baire-omega", "cantor", "finite:sierpinski", "remark-qd:7", "remark-qd:0"] {
        assert_eq!(space(name).to_string(), name);
    }
    assert!("hilbert-cube".parse::<Space>().is_err());
}

#[test]
fn ccc_chooser_stays_inside() {
    let fin = space("finite:3:0;0,1");
    let u = BaseElement::Open(FiniteSet(0b111));
    let c = fin.ccc_chooser(&u).unwrap();
    assert_eq!(c, BaseElement::Open(FiniteSet(0b001)));
    let r = space("remark-qd:0");
    assert_eq!(r.ccc_chooser(&r.whole()).unwrap(), r.whole());
}

fn zoo() -> Vec<Space> {
    ["rationals", "baire-omega", "cantor", "finite:3:0;0,1", "finite:discrete:3", "remark-qd:6", "remark-qd:0"]
        .iter()
        .map(|n| space(n))
        .collect()
}

#[test]
fn inclusion_soundness_fuzz() {
    // contains(U,V) ∧ x∈U ⟹ x∈V on 10^4 sampled triples per space
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for s in zoo() {
        for _ in 0..10_000 / 7 + 1 {
            let v = s.random_subelement(&s.whole(), &mut rng).unwrap();
            let u = if rand::Rng::gen_bool(&mut rng, 0.5) {
                s.random_subelement(&v, &mut rng).unwrap()
            } else {
                s.random_subelement(&s.whole(), &mut rng).unwrap()
            };
            let x = s.random_point(&u, &mut rng).unwrap();
            assert!(s.member(&x, &u).unwrap());
            if s.contains(&u, &v).unwrap() {
                assert!(s.member(&x, &v).unwrap(), "{s}: {x} ∈ {u:?} ⊆ {v:?}");
            }
        }
    }
}

#[test]
fn refine_chain_is_decreasing_and_keeps_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for s in zoo() {
        for _ in 0..100 {
            let v = s.random_subelement(&s.whole(), &mut rng).unwrap();
            let x = s.random_point(&v, &mut rng).unwrap();
            let mut prev = v.clone();
            for k in 0..12 {
                let u = s.refine(&x, &v, k).unwrap();
                assert!(s.member(&x, &u).unwrap());
                assert!(s.contains(&u, &prev).unwrap(), "{s}: step {k}");
                prev = u;
            }
        }
    }
}

#[test]
fn meet_at_contains_point_and_lies_in_both() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for s in zoo() {
        for _ in 0..200 {
            let a = s.random_subelement(&s.whole(), &mut rng).unwrap();
            let x = s.random_point(&a, &mut rng).unwrap();
            let b = s.random_neighborhood(&x, &s.whole(), &mut rng).unwrap();
            let m = s.meet_at(&x, &a, &b).unwrap();
            assert!(s.member(&x, &m).unwrap());
            assert!(s.contains(&m, &a).unwrap() && s.contains(&m, &b).unwrap());
        }
    }
}

proptest! {
    #[test]
    fn dense_refine_output_is_nested(
        a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50,
        pn in -60i64..60, qn in -60i64..60, den in 1i64..20,
    ) {
        let (x, y) = (Space::Rationals, Space::Rationals);
        let u = iv(q(a, 7), q(a, 7) + q(b, 7));
        let v = iv(q(c, 7), q(c, 7) + q(d, 7));
        let o = PunctureOracle::single(0, rq(pn, den), rq(qn, den));
        let (u2, v2) = o.refine(&x, &y, &u, &v).unwrap();
        prop_assert!(x.contains(&u2, &u).unwrap());
        prop_assert!(y.contains(&v2, &v).unwrap());
        prop_assert_eq!(o.box_inside(&x, &y, &u2, &v2), Some(true));
    }
}
