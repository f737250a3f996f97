//! Countably-based spaces presented through decidable base relations.
//!
//! Every space in the zoo plays with single base elements (never unions), so
//! inclusion, membership and intersection are all decidable on descriptors.
//! The zoo:
//!
//! - `rationals`: open intervals with rational (or infinite) endpoints.
//! - `baire-omega`: cylinders `[c]` of finite integer sequences in ω^ω.
//! - `cantor`: binary cylinders in 2^ω.
//! - `finite:<lattice>`: a finite space with every nonempty open set in the base.
//! - `remark-qd:<n>`: rationals plus isolated points `d_0, d_1, ...`; a basic
//!   neighborhood of a rational is `I ∪ D∖C` for an interval `I` and finite `C`.
//!   `n` bounds the enumerated part of `D` (0 means unbounded).

mod finite;
mod gruenhage;
mod interval;
mod oracle;
mod random;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use finite::{FiniteSet, FiniteTopology, MAX_POINTS};
pub use gruenhage::{gruenhage_w_strategy, NeighborhoodBase, WPointStrategy};
pub use interval::Interval;
pub use oracle::{DenseOpenOracle, PunctureOracle, WholeSpaceOracle};

use crate::error::{domain, precondition, Error, Result};
use crate::rational::{enumerate_rational, Rat};

/// A point of a zoo space.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Point {
    Rational(Rat),
    /// An eventually-zero sequence: the listed digits followed by zeros.
    /// Stored without trailing zeros.
    Branch(Vec<u64>),
    Finite(usize),
    /// The isolated point `d_i` of the remark space.
    Isolated(u64),
}

impl Point {
    pub fn branch(mut digits: Vec<u64>) -> Point {
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Point::Branch(digits)
    }

    pub fn rational(q: Rat) -> Point {
        Point::Rational(q)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Rational(q) => write!(f, "{q}"),
            Point::Branch(d) => write!(f, "{d:?}+0^ω"),
            Point::Finite(i) => write!(f, "#{i}"),
            Point::Isolated(i) => write!(f, "d{i}"),
        }
    }
}

/// A descriptor of a nonempty basic open set. Descriptors are canonical: two
/// descriptors of the same space denote the same set iff they are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseElement {
    Interval(Interval),
    Cylinder(Vec<u64>),
    Open(FiniteSet),
    Singleton(u64),
    /// `I ∪ (D ∖ C)` in the remark space.
    CoFinite { interval: Interval, excluded: BTreeSet<u64> },
}

/// A point together with a basic open containing it: a move of β in the strong
/// Choquet game.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointedOpen {
    pub point: Point,
    pub open: BaseElement,
}

impl PointedOpen {
    pub fn new(space: &Space, point: Point, open: BaseElement) -> Result<PointedOpen> {
        if !space.member(&point, &open)? {
            return precondition(format!("{point} does not lie in {open:?}"));
        }
        Ok(PointedOpen { point, open })
    }
}

/// The remark space `ℚ ∪ D`, with `D` replaced by the enumerated surrogate
/// `{d_0, .., d_{bound-1}}` (or all `d_i` when `bound` is `None`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RemarkSpace {
    pub bound: Option<u64>,
}

impl RemarkSpace {
    fn in_d(&self, d: u64) -> bool {
        self.bound.is_none_or(|n| d < n)
    }

    fn normalize(&self, excluded: BTreeSet<u64>) -> BTreeSet<u64> {
        excluded.into_iter().filter(|&d| self.in_d(d)).collect()
    }

    /// Whether `D ∖ excluded` is empty.
    fn d_exhausted(&self, excluded: &BTreeSet<u64>) -> bool {
        self.bound.is_some_and(|n| excluded.len() as u64 >= n)
    }

    /// `I ∪ D ∖ {d_0, .., d_{k-1}}` with `I` the ball of radius `2^-k` around `q`.
    fn basic_at(&self, q: &Rat, k: u32) -> BaseElement {
        let excluded = self.normalize((0..k as u64).collect());
        BaseElement::CoFinite { interval: Interval::ball(q, &Rat::dyadic(k)), excluded }
    }
}

/// Flags describing which certificate procedures a space provides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SpaceFlags {
    /// `neighborhood_base` and `refine` give decreasing local bases.
    pub first_countable: bool,
    /// `ccc_chooser` returns ccc subopens.
    pub ccc: bool,
    /// The zoo base is a base of countable order.
    pub has_bco: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Rationals,
    BaireOmega,
    Cantor,
    Finite(FiniteTopology),
    Remark(RemarkSpace),
}

/// Names accepted by [`Space::from_str`], with a short description.
pub const ZOO: &[(&str, &str)] = &[
    ("rationals", "ℚ with rational open intervals"),
    ("baire-omega", "ω^ω with cylinder base"),
    ("cantor", "2^ω with cylinder base"),
    (
        "finite:<lattice>",
        "finite space: point | sierpinski | discrete:<n> | indiscrete:<n> | <n>:<open>;<open>;..",
    ),
    ("remark-qd:<n>", "ℚ ∪ D with D isolated, |D| surrogate bound n (0 = unbounded)"),
];

impl FromStr for Space {
    type Err = Error;

    fn from_str(name: &str) -> Result<Space> {
        let name = name.trim();
        match name {
            "rationals" => return Ok(Space::Rationals),
            "baire-omega" => return Ok(Space::BaireOmega),
            "cantor" => return Ok(Space::Cantor),
            _ => {}
        }
        if let Some(spec) = name.strip_prefix("finite:") {
            return FiniteTopology::parse(spec).map(Space::Finite);
        }
        if let Some(n) = name.strip_prefix("remark-qd:") {
            let n: u64 = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad bound in {name:?}")))?;
            return Ok(Space::Remark(RemarkSpace { bound: (n > 0).then_some(n) }));
        }
        Err(Error::Parse(format!("unknown space {name:?}")))
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Rationals => f.write_str("rationals"),
            Space::BaireOmega => f.write_str("baire-omega"),
            Space::Cantor => f.write_str("cantor"),
            Space::Finite(t) => write!(f, "finite:{}", t.label()),
            Space::Remark(r) => write!(f, "remark-qd:{}", r.bound.unwrap_or(0)),
        }
    }
}

fn digit(digits: &[u64], i: usize) -> u64 {
    digits.get(i).copied().unwrap_or(0)
}

fn is_prefix(prefix: &[u64], of: &[u64]) -> bool {
    prefix.len() <= of.len() && of[..prefix.len()] == *prefix
}

/// Decodes `n` into a finite sequence of naturals (bijectively).
fn decode_sequence(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    while n > 0 {
        let run = n.trailing_zeros() as u64;
        out.push(run);
        n >>= run + 1;
    }
    out
}

impl Space {
    pub fn name(&self) -> String {
        self.to_string()
    }

    pub fn flags(&self) -> SpaceFlags {
        SpaceFlags {
            first_countable: true,
            ccc: true,
            has_bco: matches!(self, Space::BaireOmega | Space::Cantor | Space::Finite(_)),
        }
    }

    fn digit_bound(&self) -> Option<u64> {
        match self {
            Space::Cantor => Some(2),
            _ => None,
        }
    }

    pub fn validate_element(&self, u: &BaseElement) -> Result<()> {
        let ok = match (self, u) {
            (Space::Rationals, BaseElement::Interval(i)) => Interval::new(i.lo.clone(), i.hi.clone()).is_some(),
            (Space::BaireOmega, BaseElement::Cylinder(_)) => true,
            (Space::Cantor, BaseElement::Cylinder(c)) => c.iter().all(|&d| d < 2),
            (Space::Finite(t), BaseElement::Open(s)) => !s.is_empty() && t.is_open(*s),
            (Space::Remark(r), BaseElement::Singleton(d)) => r.in_d(*d),
            (Space::Remark(r), BaseElement::CoFinite { interval, excluded }) => {
                Interval::new(interval.lo.clone(), interval.hi.clone()).is_some()
                    && excluded.iter().all(|&d| r.in_d(d))
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            domain(format!("{u:?} is not a base element of {self}"))
        }
    }

    pub fn validate_point(&self, x: &Point) -> Result<()> {
        let ok = match (self, x) {
            (Space::Rationals, Point::Rational(_)) => true,
            (Space::BaireOmega, Point::Branch(d)) => d.last() != Some(&0),
            (Space::Cantor, Point::Branch(d)) => d.last() != Some(&0) && d.iter().all(|&b| b < 2),
            (Space::Finite(t), Point::Finite(i)) => *i < t.num_points(),
            (Space::Remark(_), Point::Rational(_)) => true,
            (Space::Remark(r), Point::Isolated(d)) => r.in_d(*d),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            domain(format!("{x:?} is not a point of {self}"))
        }
    }

    /// The whole space as a base element.
    pub fn whole(&self) -> BaseElement {
        match self {
            Space::Rationals => BaseElement::Interval(Interval::whole()),
            Space::BaireOmega | Space::Cantor => BaseElement::Cylinder(Vec::new()),
            Space::Finite(t) => BaseElement::Open(t.full()),
            Space::Remark(_) => BaseElement::CoFinite { interval: Interval::whole(), excluded: BTreeSet::new() },
        }
    }

    /// Decidable inclusion of the denoted sets.
    pub fn contains(&self, inner: &BaseElement, outer: &BaseElement) -> Result<bool> {
        self.validate_element(inner)?;
        self.validate_element(outer)?;
        Ok(self.contains_unchecked(inner, outer))
    }

    fn contains_unchecked(&self, inner: &BaseElement, outer: &BaseElement) -> bool {
        use BaseElement::*;
        match (inner, outer) {
            (Interval(a), Interval(b)) => a.is_subset(b),
            (Cylinder(a), Cylinder(b)) => is_prefix(b, a),
            (Open(a), Open(b)) => a.is_subset(*b),
            (Singleton(a), Singleton(b)) => a == b,
            (Singleton(d), CoFinite { excluded, .. }) => !excluded.contains(d),
            (CoFinite { .. }, Singleton(_)) => false,
            (CoFinite { interval: i1, excluded: c1 }, CoFinite { interval: i2, excluded: c2 }) => {
                let Space::Remark(r) = self else { return false };
                i1.is_subset(i2) && (r.d_exhausted(c1) || c2.is_subset(c1))
            }
            _ => false,
        }
    }

    pub fn member(&self, x: &Point, u: &BaseElement) -> Result<bool> {
        self.validate_point(x)?;
        self.validate_element(u)?;
        Ok(self.member_unchecked(x, u))
    }

    fn member_unchecked(&self, x: &Point, u: &BaseElement) -> bool {
        match (x, u) {
            (Point::Rational(q), BaseElement::Interval(i)) => i.contains_point(q),
            (Point::Branch(d), BaseElement::Cylinder(c)) => c.iter().enumerate().all(|(i, &ci)| digit(d, i) == ci),
            (Point::Finite(i), BaseElement::Open(s)) => s.contains(*i),
            (Point::Isolated(d), BaseElement::Singleton(e)) => d == e,
            (Point::Isolated(d), BaseElement::CoFinite { excluded, .. }) => !excluded.contains(d),
            (Point::Rational(q), BaseElement::CoFinite { interval, .. }) => interval.contains_point(q),
            _ => false,
        }
    }

    /// Canonical deterministic point of `u`.
    pub fn pick_point(&self, u: &BaseElement) -> Result<Point> {
        self.validate_element(u)?;
        Ok(match u {
            BaseElement::Interval(i) => Point::Rational(i.canonical_point()),
            BaseElement::Cylinder(c) => Point::branch(c.clone()),
            BaseElement::Open(s) => Point::Finite(s.first().expect("nonempty open")),
            BaseElement::Singleton(d) => Point::Isolated(*d),
            BaseElement::CoFinite { interval, .. } => Point::Rational(interval.canonical_point()),
        })
    }

    /// A basic neighborhood `U` of `x` with `U ⊆ v`, shrinking as `step` grows.
    pub fn refine(&self, x: &Point, v: &BaseElement, step: u32) -> Result<BaseElement> {
        if !self.member(x, v)? {
            return precondition(format!("{x} is not in {v:?}"));
        }
        Ok(match (x, v) {
            (Point::Rational(q), BaseElement::Interval(i)) => BaseElement::Interval(i.shrink_around(q, step)),
            (Point::Branch(d), BaseElement::Cylinder(c)) => {
                BaseElement::Cylinder((0..c.len() + step as usize).map(|i| digit(d, i)).collect())
            }
            (Point::Finite(i), BaseElement::Open(_)) => {
                let Space::Finite(t) = self else { unreachable!() };
                BaseElement::Open(t.minimal_open(*i))
            }
            (Point::Isolated(d), _) => BaseElement::Singleton(*d),
            (Point::Rational(q), BaseElement::CoFinite { interval, excluded }) => {
                let Space::Remark(r) = self else { unreachable!() };
                let mut excluded = excluded.clone();
                excluded.extend(0..step as u64);
                BaseElement::CoFinite { interval: interval.shrink_around(q, step), excluded: r.normalize(excluded) }
            }
            _ => unreachable!("membership checked"),
        })
    }

    /// The `k`-th member of the canonical decreasing neighborhood base at `x`.
    pub fn neighborhood_base_member(&self, x: &Point, k: u32) -> Result<BaseElement> {
        if !self.flags().first_countable {
            return Err(Error::Unsupported(format!("{self} is not first countable")));
        }
        self.validate_point(x)?;
        Ok(match (self, x) {
            (Space::Rationals, Point::Rational(q)) => BaseElement::Interval(Interval::ball(q, &Rat::dyadic(k))),
            (Space::BaireOmega | Space::Cantor, Point::Branch(d)) => {
                BaseElement::Cylinder((0..k as usize).map(|i| digit(d, i)).collect())
            }
            (Space::Finite(t), Point::Finite(i)) => BaseElement::Open(t.minimal_open(*i)),
            (Space::Remark(_), Point::Isolated(d)) => BaseElement::Singleton(*d),
            (Space::Remark(r), Point::Rational(q)) => r.basic_at(q, k),
            _ => unreachable!("point validated"),
        })
    }

    /// The neighborhood base at `x` as a stream.
    pub fn neighborhood_base(&self, x: &Point) -> Result<NeighborhoodBase> {
        NeighborhoodBase::new(self.clone(), x.clone())
    }

    /// Exact intersection, or `None` when it is empty or not a single base element.
    pub fn intersect(&self, a: &BaseElement, b: &BaseElement) -> Result<Option<BaseElement>> {
        self.validate_element(a)?;
        self.validate_element(b)?;
        use BaseElement::*;
        Ok(match (a, b) {
            (Interval(x), Interval(y)) => x.intersect(y).map(Interval),
            (Cylinder(x), Cylinder(y)) => {
                if is_prefix(x, y) {
                    Some(Cylinder(y.clone()))
                } else if is_prefix(y, x) {
                    Some(Cylinder(x.clone()))
                } else {
                    None
                }
            }
            (Open(x), Open(y)) => {
                let s = FiniteSet(x.0 & y.0);
                (!s.is_empty()).then_some(Open(s))
            }
            (Singleton(d), other) | (other, Singleton(d)) => {
                self.member_unchecked(&Point::Isolated(*d), other).then_some(Singleton(*d))
            }
            (CoFinite { interval: i1, excluded: c1 }, CoFinite { interval: i2, excluded: c2 }) => {
                i1.intersect(i2).map(|interval| CoFinite { interval, excluded: c1.union(c2).copied().collect() })
            }
            _ => None,
        })
    }

    /// Whether `a` and `b` denote disjoint sets (decided exactly).
    pub fn disjoint(&self, a: &BaseElement, b: &BaseElement) -> Result<bool> {
        self.validate_element(a)?;
        self.validate_element(b)?;
        use BaseElement::*;
        Ok(match (a, b) {
            (Singleton(d), other) | (other, Singleton(d)) => !self.member_unchecked(&Point::Isolated(*d), other),
            (CoFinite { interval: i1, excluded: c1 }, CoFinite { interval: i2, excluded: c2 }) => {
                let Space::Remark(r) = self else { unreachable!() };
                let union: BTreeSet<u64> = c1.union(c2).copied().collect();
                i1.intersect(i2).is_none() && r.d_exhausted(&union)
            }
            _ => self.intersect(a, b)?.is_none(),
        })
    }

    /// A base element containing `x` inside `a ∩ b`; exactly `a ∩ b` whenever that
    /// intersection is itself a base element.
    pub fn meet_at(&self, x: &Point, a: &BaseElement, b: &BaseElement) -> Result<BaseElement> {
        if !self.member(x, a)? || !self.member(x, b)? {
            return precondition(format!("{x} is not in both {a:?} and {b:?}"));
        }
        match self.intersect(a, b)? {
            Some(m) => Ok(m),
            None => match x {
                Point::Isolated(d) => Ok(BaseElement::Singleton(*d)),
                _ => Err(Error::InvariantViolation(format!("{a:?} ∩ {b:?} contains {x} but is not basic"))),
            },
        }
    }

    /// A base element inside `u` not containing `p`, or `None` if there is none.
    pub fn avoid_point(&self, u: &BaseElement, p: &Point) -> Result<Option<BaseElement>> {
        if !self.member(p, u)? {
            return Ok(Some(u.clone()));
        }
        Ok(match (u, p) {
            (BaseElement::Interval(i), Point::Rational(q)) => Some(BaseElement::Interval(i.avoid(q))),
            (BaseElement::Cylinder(c), Point::Branch(d)) => {
                let next = digit(d, c.len());
                let other = match self.digit_bound() {
                    Some(2) => 1 - next,
                    _ => next + 1,
                };
                let mut c = c.clone();
                c.push(other);
                Some(BaseElement::Cylinder(c))
            }
            (BaseElement::Open(s), Point::Finite(i)) => {
                let Space::Finite(t) = self else { unreachable!() };
                let rest = t.interior(FiniteSet(s.0 & !(1 << i)));
                (!rest.is_empty()).then_some(BaseElement::Open(rest))
            }
            (BaseElement::Singleton(_), _) => None,
            (BaseElement::CoFinite { interval, excluded }, Point::Rational(q)) => {
                Some(BaseElement::CoFinite { interval: interval.avoid(q), excluded: excluded.clone() })
            }
            (BaseElement::CoFinite { interval, excluded }, Point::Isolated(d)) => {
                let mut excluded = excluded.clone();
                excluded.insert(*d);
                Some(BaseElement::CoFinite { interval: interval.clone(), excluded })
            }
            _ => unreachable!("membership checked"),
        })
    }

    /// Whether `u` denotes exactly one point.
    pub fn is_singleton(&self, u: &BaseElement) -> Result<bool> {
        self.validate_element(u)?;
        Ok(match u {
            BaseElement::Open(s) => s.len() == 1,
            BaseElement::Singleton(_) => true,
            _ => false,
        })
    }

    /// Whether `u` has no proper nonempty basic subset, so a play reaching it is stuck there.
    pub fn is_atom(&self, u: &BaseElement) -> Result<bool> {
        self.validate_element(u)?;
        Ok(match (self, u) {
            (Space::Finite(t), BaseElement::Open(s)) => t.opens_within(*s).all(|o| o == *s),
            (_, BaseElement::Singleton(_)) => true,
            _ => false,
        })
    }

    /// The `k`-th point of the space's fixed point enumeration (`None` past its end).
    pub fn enumerate_point(&self, k: usize) -> Option<Point> {
        match self {
            Space::Rationals => Some(Point::Rational(enumerate_rational(k))),
            Space::BaireOmega => {
                // nonempty sequences s <-> points s[..-1] ++ [last + 1]
                let mut s = decode_sequence(k as u64);
                if let Some(last) = s.last_mut() {
                    *last += 1;
                }
                Some(Point::Branch(s))
            }
            Space::Cantor => {
                let bits = (0..64 - (k as u64).leading_zeros()).map(|i| (k as u64) >> i & 1).collect();
                Some(Point::Branch(bits))
            }
            Space::Finite(t) => (k < t.num_points()).then_some(Point::Finite(k)),
            Space::Remark(r) => {
                let k = k as u64;
                match r.bound {
                    Some(n) if k >= 2 * n => Some(Point::Rational(enumerate_rational((k - n) as usize))),
                    _ if k % 2 == 1 => Some(Point::Rational(enumerate_rational((k / 2) as usize))),
                    _ => Some(Point::Isolated(k / 2)),
                }
            }
        }
    }

    /// The `k`-th base element of a fixed enumeration of the base (with repetitions allowed).
    pub fn enumerate_base(&self, k: usize) -> Option<BaseElement> {
        let pair = |k: usize| {
            // Cantor pairing inverse
            let w = (((8 * k + 1) as f64).sqrt() as usize - 1) / 2;
            let t = w * (w + 1) / 2;
            let j = k - t;
            (w - j, j)
        };
        match self {
            Space::Rationals => {
                let (i, j) = pair(k);
                let (a, b) = (enumerate_rational(i), enumerate_rational(j));
                let (lo, hi) = if a < b { (a, b) } else if b < a { (b, a) } else { (a.clone(), &a + &Rat::one()) };
                Some(BaseElement::Interval(Interval { lo: Some(lo), hi: Some(hi) }))
            }
            Space::BaireOmega => Some(BaseElement::Cylinder(decode_sequence(k as u64))),
            Space::Cantor => {
                let n = k as u64 + 1;
                let bits = 63 - n.leading_zeros() as u64;
                Some(BaseElement::Cylinder((0..bits).map(|i| n >> i & 1).collect()))
            }
            Space::Finite(t) => t.nonempty_opens().nth(k).map(BaseElement::Open),
            Space::Remark(r) => {
                if k.is_multiple_of(2) {
                    let d = (k / 2) as u64;
                    if r.in_d(d) {
                        return Some(BaseElement::Singleton(d));
                    }
                }
                let (i, c) = pair(k / 2);
                let q = enumerate_rational(i);
                Some(r.basic_at(&q, c as u32 % 8))
            }
        }
    }

    /// `count` deterministic sample points of `u`, for spot checks.
    pub fn sample_points(&self, u: &BaseElement, count: usize) -> Result<Vec<Point>> {
        self.validate_element(u)?;
        let den = count as u64 + 1;
        let mut out = Vec::with_capacity(count);
        match u {
            BaseElement::Interval(i) => {
                out.extend((1..=count as u64).map(|j| Point::Rational(i.fraction_point(j, den))));
            }
            BaseElement::Cylinder(c) => {
                let base = if self.digit_bound() == Some(2) { 2 } else { 5 };
                for j in 0..count as u64 {
                    let mut d = c.clone();
                    let mut m = j;
                    while m > 0 {
                        d.push(m % base);
                        m /= base;
                    }
                    out.push(Point::branch(d));
                }
            }
            BaseElement::Open(s) => {
                let pts: Vec<usize> = s.points().collect();
                out.extend((0..count).map(|j| Point::Finite(pts[j % pts.len()])));
            }
            BaseElement::Singleton(d) => out.extend((0..count).map(|_| Point::Isolated(*d))),
            BaseElement::CoFinite { interval, excluded } => {
                let Space::Remark(r) = self else { unreachable!() };
                let mut ds = (0u64..).filter(|d| !excluded.contains(d));
                for j in 0..count as u64 {
                    if j % 2 == 1 {
                        if let Some(d) = ds.next().filter(|&d| r.in_d(d)) {
                            out.push(Point::Isolated(d));
                            continue;
                        }
                    }
                    out.push(Point::Rational(interval.fraction_point(j + 1, den + 1)));
                }
            }
        }
        Ok(out)
    }

    /// The open ccc subspace chosen inside `u`.
    pub fn ccc_chooser(&self, u: &BaseElement) -> Result<BaseElement> {
        if !self.flags().ccc {
            return Err(Error::Unsupported(format!("{self} provides no ccc chooser")));
        }
        match (self, u) {
            (Space::Finite(t), BaseElement::Open(s)) => {
                self.validate_element(u)?;
                Ok(BaseElement::Open(t.minimal_open(s.first().expect("nonempty"))))
            }
            _ => {
                self.validate_element(u)?;
                Ok(u.clone())
            }
        }
    }
}

#[cfg(test)]
mod tests;
