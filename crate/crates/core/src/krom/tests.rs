use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;
use crate::topology::{FiniteSet, FiniteTopology, Point};

fn q(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn iv(a: Rat, b: Rat) -> BaseElement {
    BaseElement::Interval(Interval::bounded(a, b).unwrap())
}

fn unit() -> BaseElement {
    iv(q(0, 1), q(1, 1))
}

fn seq(elems: Vec<BaseElement>) -> DecreasingSeq {
    DecreasingSeq::new(&Space::Rationals, elems).unwrap()
}

#[test]
fn extend_examples() {
    let s = Space::Rationals;
    let f = seq(vec![unit()]);
    let g = extend(&s, &f, iv(q(0, 1), q(1, 2))).unwrap();
    assert_eq!(g.elems(), &[unit(), iv(q(0, 1), q(1, 2))]);
    assert_eq!(extend(&s, &f, unit()).unwrap().len(), 2);
    assert!(matches!(extend(&s, &f, iv(q(1, 2), q(2, 1))), Err(Error::Precondition(_))));
    assert!(DecreasingSeq::new(&s, vec![]).is_err());
}

#[test]
fn basic_subset_examples() {
    let f = seq(vec![unit()]);
    let g = seq(vec![unit(), iv(q(0, 1), q(1, 2))]);
    assert!(basic_subset(&f, &f));
    assert!(basic_subset(&g, &f));
    assert!(!basic_subset(&f, &g));
}

/// Every decreasing sequence of length `len` over the nonempty opens.
fn chains(t: &FiniteTopology, len: usize) -> Vec<Vec<FiniteSet>> {
    let opens: Vec<FiniteSet> = t.nonempty_opens().collect();
    let mut out: Vec<Vec<FiniteSet>> = opens.iter().map(|&o| vec![o]).collect();
    for _ in 1..len {
        out = out
            .into_iter()
            .flat_map(|c| {
                let last = *c.last().unwrap();
                opens
                    .iter()
                    .filter(move |o| o.is_subset(last))
                    .map(move |&o| {
                        let mut c2 = c.clone();
                        c2.push(o);
                        c2
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

#[test]
fn basic_subset_against_enumerated_krom_points() {
    // K(X) members that stabilize within 4 steps, i.e. length-4 chains repeated forever
    for n in 1..=3 {
        for t in FiniteTopology::all_on(n) {
            let s = Space::Finite(t.clone());
            let members = chains(&t, 4);
            let stems: Vec<Vec<FiniteSet>> = chains(&t, 1).into_iter().chain(chains(&t, 2)).collect();
            let denote = |stem: &[FiniteSet]| -> Vec<usize> {
                (0..members.len()).filter(|&i| members[i][..stem.len()] == *stem).collect()
            };
            let to_seq = |c: &[FiniteSet]| {
                DecreasingSeq::new(&s, c.iter().map(|&o| BaseElement::Open(o)).collect()).unwrap()
            };
            for g in &stems {
                for f in &stems {
                    let (dg, df) = (denote(g), denote(f));
                    let brute = dg.iter().all(|i| df.contains(i));
                    let (sg, sf) = (to_seq(g), to_seq(f));
                    assert_eq!(basic_subset_in(&s, &sg, &sf).unwrap(), brute, "{g:?} {f:?}");
                    if basic_subset(&sg, &sf) {
                        assert!(brute, "prefix rule unsound for {g:?} {f:?}");
                    }
                    let forced = g.len() < f.len() && s.is_atom(sg.last()).unwrap();
                    if !forced {
                        assert_eq!(basic_subset(&sg, &sf), brute, "{g:?} {f:?}");
                    }
                    let disjoint = dg.iter().all(|i| !df.contains(i));
                    if !forced && !(f.len() < g.len() && s.is_atom(sf.last()).unwrap()) {
                        assert_eq!(basic_disjoint(&sg, &sf), disjoint, "{g:?} {f:?}");
                    }
                }
            }
        }
    }
}

#[test]
fn ultradist_examples() {
    let s = Space::Rationals;
    let f = KromPoint::canonical(&s, seq(vec![unit()])).unwrap();
    assert_eq!(ultradist(&f, &f.clone(), 16).unwrap(), UltraDist::Zero);
    let g = KromPoint::canonical(&s, seq(vec![iv(q(0, 1), q(2, 1))])).unwrap();
    let d = ultradist(&f, &g, 16).unwrap();
    assert_eq!(d, UltraDist::Exact(0));
    assert_eq!(d.bound(), Rat::one());
    // same entries, different tail rule: agreement up to fuel
    let h = KromPoint::repeat(&s, seq(vec![unit(), unit()]), Point::Rational(q(1, 2))).unwrap();
    let c = KromPoint::repeat(&s, seq(vec![unit()]), Point::Rational(q(1, 2))).unwrap();
    assert_eq!(ultradist(&h, &c, 10).unwrap(), UltraDist::AtMost(10));
}

fn random_chain(rng: &mut ChaCha8Rng, base: &[BaseElement], len: usize) -> DecreasingSeq {
    let s = Space::Rationals;
    // share a random-length prefix with `base` to make coincidences likely
    let keep = rng.gen_range(0..=base.len().min(len));
    let mut elems: Vec<BaseElement> = base[..keep].to_vec();
    if elems.is_empty() {
        elems.push(unit());
    }
    while elems.len() < len {
        let next = if rng.gen_bool(0.3) {
            elems.last().unwrap().clone()
        } else {
            s.random_subelement(elems.last().unwrap(), rng).unwrap()
        };
        elems.push(next);
    }
    seq(elems)
}

#[test]
fn ultrametric_laws_on_random_triples() {
    let s = Space::Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut base: Vec<BaseElement> = vec![unit()];
    for _ in 0..7 {
        let next = s.random_subelement(base.last().unwrap(), &mut rng).unwrap();
        base.push(next);
    }
    let point = |c: DecreasingSeq| {
        let w = s.pick_point(c.last()).unwrap();
        KromPoint::repeat(&s, c, w).unwrap()
    };
    for _ in 0..2_000 {
        let f = point(random_chain(&mut rng, &base, 8));
        let g = point(random_chain(&mut rng, &base, 8));
        let h = point(random_chain(&mut rng, &base, 8));
        let (fg, gh, fh) = (ultradist(&f, &g, 8).unwrap(), ultradist(&g, &h, 8).unwrap(), ultradist(&f, &h, 8).unwrap());
        assert_eq!(fg, ultradist(&g, &f, 8).unwrap());
        assert!(fh.bound() <= fg.bound().max(gh.bound()));
    }
}

#[test]
fn ccc_step_examples() {
    let s = Space::Rationals;
    let f = seq(vec![unit()]);
    assert_eq!(ccc_pi_base_step_default(&s, &f).unwrap().elems(), &[unit(), unit()]);

    let r: Space = "remark-qd:0".parse().unwrap();
    let f = DecreasingSeq::singleton(&r, r.whole()).unwrap();
    let g = ccc_pi_base_step_default(&r, &f).unwrap();
    assert!(matches!(g.last(), BaseElement::CoFinite { .. }));

    let bad = ccc_pi_base_step(&s, &seq(vec![unit()]), |_| Ok(iv(q(5, 1), q(6, 1))));
    assert!(matches!(bad, Err(Error::Unsupported(_))));
}

#[test]
fn ccc_step_on_finite_lattices_appends_a_minimal_open() {
    for t in FiniteTopology::all_on(3) {
        let s = Space::Finite(t.clone());
        for o in t.nonempty_opens() {
            let f = DecreasingSeq::singleton(&s, BaseElement::Open(o)).unwrap();
            let g = ccc_pi_base_step_default(&s, &f).unwrap();
            let BaseElement::Open(u) = g.last() else { unreachable!() };
            assert!(u.is_subset(o));
            // brute force: u is the intersection of all opens around one of its points
            let is_minimal = u.points().any(|x| t.opens().iter().filter(|v| v.contains(x)).all(|v| u.is_subset(*v)));
            assert!(is_minimal);
        }
    }
}

#[test]
fn disjoint_projection_examples() {
    let s = Space::Rationals;
    let f0 = seq(vec![unit()]);
    let a = f0.extend(&s, iv(q(0, 1), q(1, 2))).unwrap();
    let b = f0.extend(&s, iv(q(1, 2), q(1, 1))).unwrap();
    assert!(disjoint_family_projection(&s, &f0, &[a.clone(), b]).unwrap());

    let c = f0.extend(&s, iv(q(0, 1), q(2, 3))).unwrap();
    let d = f0.extend(&s, iv(q(1, 3), q(1, 1))).unwrap();
    assert!(!disjoint_family_projection(&s, &f0, &[c, d]).unwrap());

    let outside = seq(vec![iv(q(0, 1), q(2, 1))]);
    assert!(matches!(disjoint_family_projection(&s, &f0, &[outside]), Err(Error::Precondition(_))));
    let deeper = a.extend(&s, iv(q(0, 1), q(1, 4))).unwrap();
    assert!(matches!(disjoint_family_projection(&s, &f0, &[a, deeper]), Err(Error::Precondition(_))));
}

#[test]
fn generated_families_project_disjointly() {
    let s = Space::Rationals;
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let f0 = ccc_pi_base_step_default(&s, &seq(vec![iv(q(-1, 1), q(1, 1))])).unwrap();
    let family = generate_disjoint_family(&f0, 100, &mut rng).unwrap();
    assert_eq!(family.len(), 100);
    assert!(disjoint_family_projection(&s, &f0, &family).unwrap());
    // independent pairwise interval check
    let ends: Vec<(Rat, Rat)> = family
        .iter()
        .map(|g| match g.last() {
            BaseElement::Interval(i) => (i.lo.clone().unwrap(), i.hi.clone().unwrap()),
            _ => unreachable!(),
        })
        .collect();
    for i in 0..ends.len() {
        for j in i + 1..ends.len() {
            assert!(ends[i].1 <= ends[j].0 || ends[j].1 <= ends[i].0);
        }
    }
}

#[test]
fn k0_examples() {
    let s = Space::Rationals;
    let zero = Point::Rational(Rat::zero());
    let f = KromPoint::shrink(&s, seq(vec![iv(q(-1, 1), q(1, 1))]), zero.clone()).unwrap();
    for k in 0..6 {
        assert_eq!(f.get(k).unwrap(), iv(-Rat::dyadic(k as u32), Rat::dyadic(k as u32)));
    }
    let cert = k0_certify(&f, 20, 64).unwrap();
    assert!(cert.evidence.iter().all(|&(k, j)| k == j));
    assert!(k0_verify(&f, &cert).unwrap());

    let stalled = KromPoint::repeat(&s, seq(vec![unit()]), Point::Rational(q(1, 2))).unwrap();
    // (0,1) lies in the base members of radius 1 and 1/2 around 1/2, not in (1/4, 3/4)
    assert_eq!(k0_certify(&stalled, 5, 64).unwrap_err(), Error::NotCertifiedAtDepth(2));

    let h = seq(vec![iv(q(-4, 1), q(4, 1)), iv(q(-2, 1), q(2, 1)), iv(q(-2, 1), q(2, 1))]);
    let spliced = KromPoint::splice(&s, h.clone(), f).unwrap();
    assert!(spliced.in_basic(&h).unwrap());
    let cert = k0_certify(&spliced, 10, 64).unwrap();
    assert!(cert.evidence.iter().all(|&(k, j)| j == k + h.len()));
}

#[test]
fn krom_points_check_their_entries() {
    let s = Space::BaireOmega;
    let f = KromPoint::canonical(&s, DecreasingSeq::singleton(&s, BaseElement::Cylinder(vec![3])).unwrap()).unwrap();
    f.check(12).unwrap();
    assert_eq!(f.get(2).unwrap(), BaseElement::Cylinder(vec![3, 0, 0]));
    let bad = KromPoint::repeat(&Space::Rationals, seq(vec![unit()]), Point::Rational(q(2, 1)));
    assert!(matches!(bad, Err(Error::Precondition(_))));
}

proptest! {
    #[test]
    fn prefix_order_is_a_partial_order(seed in 0u64..10_000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = random_chain(&mut rng, &[unit()], 5);
        let a = { let n = rng.gen_range(1..6); random_chain(&mut rng, base.elems(), n) };
        let b = { let n = rng.gen_range(1..6); random_chain(&mut rng, base.elems(), n) };
        let c = { let n = rng.gen_range(1..6); random_chain(&mut rng, base.elems(), n) };
        prop_assert!(basic_subset(&a, &a));
        if basic_subset(&a, &b) && basic_subset(&b, &a) {
            prop_assert_eq!(&a, &b);
        }
        if basic_subset(&a, &b) && basic_subset(&b, &c) {
            prop_assert!(basic_subset(&a, &c));
        }
        prop_assert_eq!(basic_disjoint(&a, &b), !basic_subset(&a, &b) && !basic_subset(&b, &a));
    }

    #[test]
    fn splicing_certified_points_stays_certified(seed in 0u64..10_000) {
        let s = Space::Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = { let n = rng.gen_range(1..5); random_chain(&mut rng, &[unit()], n) };
        let g0 = s.random_subelement(h.last(), &mut rng).unwrap();
        let w = s.random_point(&g0, &mut rng).unwrap();
        let g = KromPoint::shrink(&s, DecreasingSeq::singleton(&s, g0).unwrap(), w).unwrap();
        let f = KromPoint::splice(&s, h.clone(), g).unwrap();
        prop_assert!(f.in_basic(&h).unwrap());
        let cert = k0_certify(&f, 8, 200).unwrap();
        prop_assert!(k0_verify(&f, &cert).unwrap());
    }
}
