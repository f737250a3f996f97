//! Seeded random choices inside zoo spaces, used by fuzzing strategies.

use rand::Rng;

use super::{BaseElement, FiniteSet, Interval, Point, Space};
use crate::error::{precondition, Result};
use crate::rational::Rat;

const GRID: u64 = 1 << 12;

fn random_fraction<R: Rng>(rng: &mut R) -> (u64, u64) {
    (rng.gen_range(1..GRID), GRID)
}

fn random_subinterval<R: Rng>(i: &Interval, rng: &mut R) -> Interval {
    let a = rng.gen_range(0..GRID);
    let b = rng.gen_range(a + 1..=GRID);
    let (lo, hi) = (i.fraction_point(a, GRID), i.fraction_point(b, GRID));
    Interval::new(Some(lo), Some(hi)).expect("a < b")
}

fn random_ball_in<R: Rng>(i: &Interval, x: &Rat, rng: &mut R) -> Interval {
    let m = i.margin(x);
    let r1 = &m * &Rat::new(rng.gen_range(1..=16), 16);
    let r2 = &m * &Rat::new(rng.gen_range(1..=16), 16);
    Interval { lo: Some(x - &r1), hi: Some(x + &r2) }
}

impl Space {
    /// A random point of `u`.
    pub fn random_point<R: Rng>(&self, u: &BaseElement, rng: &mut R) -> Result<Point> {
        self.validate_element(u)?;
        Ok(match u {
            BaseElement::Interval(i) => {
                let (n, d) = random_fraction(rng);
                Point::Rational(i.fraction_point(n, d))
            }
            BaseElement::Cylinder(c) => {
                let base = if matches!(self, Space::Cantor) { 2 } else { 6 };
                let mut d = c.clone();
                for _ in 0..rng.gen_range(0..4) {
                    d.push(rng.gen_range(0..base));
                }
                Point::branch(d)
            }
            BaseElement::Open(s) => {
                let pts: Vec<usize> = s.points().collect();
                Point::Finite(pts[rng.gen_range(0..pts.len())])
            }
            BaseElement::Singleton(d) => Point::Isolated(*d),
            BaseElement::CoFinite { interval, excluded } => {
                let Space::Remark(r) = self else { unreachable!() };
                if rng.gen_bool(0.3) {
                    let d = (0..64u64)
                        .map(|_| rng.gen_range(0..r.bound.unwrap_or(64)))
                        .find(|d| !excluded.contains(d));
                    if let Some(d) = d {
                        return Ok(Point::Isolated(d));
                    }
                }
                let (n, den) = random_fraction(rng);
                Point::Rational(interval.fraction_point(n, den))
            }
        })
    }

    /// A random base element contained in `u`.
    pub fn random_subelement<R: Rng>(&self, u: &BaseElement, rng: &mut R) -> Result<BaseElement> {
        self.validate_element(u)?;
        Ok(match u {
            BaseElement::Interval(i) => BaseElement::Interval(random_subinterval(i, rng)),
            BaseElement::Cylinder(_) | BaseElement::Singleton(_) | BaseElement::CoFinite { .. } => {
                let x = self.random_point(u, rng)?;
                self.random_neighborhood(&x, u, rng)?
            }
            BaseElement::Open(s) => {
                let Space::Finite(t) = self else { unreachable!() };
                let subs: Vec<FiniteSet> = t.opens_within(*s).collect();
                BaseElement::Open(subs[rng.gen_range(0..subs.len())])
            }
        })
    }

    /// A random base element `w` with `x ∈ w ⊆ u`.
    pub fn random_neighborhood<R: Rng>(&self, x: &Point, u: &BaseElement, rng: &mut R) -> Result<BaseElement> {
        if !self.member(x, u)? {
            return precondition(format!("{x} is not in {u:?}"));
        }
        Ok(match (x, u) {
            (Point::Rational(q), BaseElement::Interval(i)) => BaseElement::Interval(random_ball_in(i, q, rng)),
            (Point::Branch(_), BaseElement::Cylinder(_)) => self.refine(x, u, rng.gen_range(0..4))?,
            (Point::Finite(p), BaseElement::Open(s)) => {
                let Space::Finite(t) = self else { unreachable!() };
                let subs: Vec<FiniteSet> = t.opens_within(*s).filter(|o| o.contains(*p)).collect();
                BaseElement::Open(subs[rng.gen_range(0..subs.len())])
            }
            (Point::Isolated(_), _) => {
                if rng.gen_bool(0.5) {
                    u.clone()
                } else {
                    self.refine(x, u, 0)?
                }
            }
            (Point::Rational(q), BaseElement::CoFinite { interval, .. }) => {
                let mut w = self.refine(x, u, rng.gen_range(0..4))?;
                if let BaseElement::CoFinite { interval: ref mut iw, .. } = w {
                    *iw = random_ball_in(interval, q, rng);
                }
                w
            }
            _ => unreachable!("membership checked"),
        })
    }
}
