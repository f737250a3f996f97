//! Open rational intervals with optional (infinite) endpoints.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::rational::Rat;

/// The open interval `(lo, hi)`; a missing endpoint is infinite. Always nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Option<Rat>,
    pub hi: Option<Rat>,
}

fn cmp_lo(a: &Option<Rat>, b: &Option<Rat>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

fn cmp_hi(a: &Option<Rat>, b: &Option<Rat>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(x), Some(y)) => x.cmp(y),
    }
}

impl Interval {
    /// `None` when `lo >= hi`.
    pub fn new(lo: Option<Rat>, hi: Option<Rat>) -> Option<Interval> {
        match (&lo, &hi) {
            (Some(a), Some(b)) if a >= b => None,
            _ => Some(Interval { lo, hi }),
        }
    }

    pub fn bounded(lo: Rat, hi: Rat) -> Option<Interval> {
        Interval::new(Some(lo), Some(hi))
    }

    pub fn whole() -> Interval {
        Interval { lo: None, hi: None }
    }

    /// `(c - r, c + r)` for `r > 0`.
    pub fn ball(c: &Rat, r: &Rat) -> Interval {
        Interval { lo: Some(c - r), hi: Some(c + r) }
    }

    pub fn contains_point(&self, x: &Rat) -> bool {
        self.lo.as_ref().is_none_or(|a| a < x) && self.hi.as_ref().is_none_or(|b| x < b)
    }

    /// Whether `x` lies in the closure `[lo, hi]`.
    pub fn closure_contains(&self, x: &Rat) -> bool {
        self.lo.as_ref().is_none_or(|a| a <= x) && self.hi.as_ref().is_none_or(|b| x <= b)
    }

    pub fn is_subset(&self, outer: &Interval) -> bool {
        cmp_lo(&outer.lo, &self.lo) != Ordering::Greater && cmp_hi(&self.hi, &outer.hi) != Ordering::Greater
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = if cmp_lo(&self.lo, &other.lo) == Ordering::Less { &other.lo } else { &self.lo };
        let hi = if cmp_hi(&self.hi, &other.hi) == Ordering::Greater { &other.hi } else { &self.hi };
        Interval::new(lo.clone(), hi.clone())
    }

    /// `hi - lo`, or `None` when unbounded.
    pub fn length(&self) -> Option<Rat> {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => Some(b - a),
            _ => None,
        }
    }

    /// Canonical point: the midpoint, or one unit inside the finite endpoint, or 0.
    pub fn canonical_point(&self) -> Rat {
        match (&self.lo, &self.hi) {
            (Some(a), Some(b)) => Rat::midpoint(a, b),
            (Some(a), None) => a + &Rat::one(),
            (None, Some(b)) => b - &Rat::one(),
            (None, None) => Rat::zero(),
        }
    }

    /// Distance from `x` to the nearer finite endpoint, or 1 when both are infinite.
    pub fn margin(&self, x: &Rat) -> Rat {
        let d_lo = self.lo.as_ref().map(|a| x - a);
        let d_hi = self.hi.as_ref().map(|b| b - x);
        match (d_lo, d_hi) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => Rat::one(),
        }
    }

    /// `(x - 2^-step * m, x + 2^-step * m)` with `m` the margin of `x`; decreasing in `step`.
    pub fn shrink_around(&self, x: &Rat, step: u32) -> Interval {
        Interval::ball(x, &(&self.margin(x) * &Rat::dyadic(step)))
    }

    /// A subinterval avoiding `x`: the larger of the two pieces left after removing `x`
    /// (the left one on ties). Returns `self` when `x` is outside.
    pub fn avoid(&self, x: &Rat) -> Interval {
        if !self.contains_point(x) {
            return self.clone();
        }
        let left = Interval { lo: self.lo.clone(), hi: Some(x.clone()) };
        let right = Interval { lo: Some(x.clone()), hi: self.hi.clone() };
        let take_left = match (left.length(), right.length()) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(l), Some(r)) => l >= r,
        };
        if take_left {
            left
        } else {
            right
        }
    }

    /// A bounded subinterval (identity on bounded intervals).
    pub fn bounded_part(&self) -> Interval {
        match (&self.lo, &self.hi) {
            (Some(_), Some(_)) => self.clone(),
            (Some(a), None) => Interval { lo: Some(a.clone()), hi: Some(a + &Rat::one()) },
            (None, Some(b)) => Interval { lo: Some(b - &Rat::one()), hi: Some(b.clone()) },
            (None, None) => Interval { lo: Some(-Rat::one()), hi: Some(Rat::one()) },
        }
    }

    /// Point at fraction `num/den` of a bounded part of the interval, `0 < num < den`.
    pub fn fraction_point(&self, num: u64, den: u64) -> Rat {
        let b = self.bounded_part();
        let (lo, hi) = (b.lo.unwrap(), b.hi.unwrap());
        &lo + &(&(&hi - &lo) * &Rat::new(num as i64, den as i64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: (i64, i64), b: (i64, i64)) -> Interval {
        Interval::bounded(Rat::new(a.0, a.1), Rat::new(b.0, b.1)).unwrap()
    }

    #[test]
    fn subset_by_endpoints() {
        assert!(iv((1, 4), (1, 2)).is_subset(&iv((0, 1), (1, 1))));
        assert!(!iv((0, 1), (3, 4)).is_subset(&iv((0, 1), (1, 2))));
        assert!(iv((0, 1), (1, 1)).is_subset(&Interval::whole()));
        assert!(!Interval::whole().is_subset(&iv((0, 1), (1, 1))));
    }

    #[test]
    fn avoid_takes_larger_piece() {
        let u = iv((0, 1), (1, 1));
        assert_eq!(u.avoid(&Rat::new(1, 2)), iv((0, 1), (1, 2)));
        assert_eq!(u.avoid(&Rat::new(1, 4)), iv((1, 4), (1, 1)));
        assert_eq!(u.avoid(&Rat::new(3, 1)), u);
    }

    #[test]
    fn shrink_example() {
        // x = 1/2 in (0,1), step 3: margin 1/2, radius 1/16
        let got = iv((0, 1), (1, 1)).shrink_around(&Rat::new(1, 2), 3);
        assert_eq!(got, iv((7, 16), (9, 16)));
    }

    #[test]
    fn empty_intervals_rejected() {
        assert!(Interval::bounded(Rat::one(), Rat::one()).is_none());
        assert!(iv((0, 1), (1, 2)).intersect(&iv((1, 2), (1, 1))).is_none());
    }
}
