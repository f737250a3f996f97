//! Dense open subsets of a product `X × Y`, presented by box refinement.

use std::fmt;

use serde_json::{json, Value};

use super::{BaseElement, Point, Space};
use crate::error::{Error, Result};

/// A dense open set `O ⊆ X × Y`, known only through its ability to shrink any
/// basic box into a sub-box lying inside `O`.
pub trait DenseOpenOracle: fmt::Debug + Send + Sync {
    /// Position of this set in its schedule `O_0, O_1, ...`.
    fn schedule_index(&self) -> usize;

    /// A box `u' × v'` with `u' ⊆ u`, `v' ⊆ v` and `u' × v' ⊆ O`.
    fn refine(&self, x: &Space, y: &Space, u: &BaseElement, v: &BaseElement) -> Result<(BaseElement, BaseElement)>;

    /// Membership test for spot checks, when the oracle has one.
    fn member(&self, _x: &Point, _y: &Point) -> Option<bool> {
        None
    }

    /// Exact decision of `u × v ⊆ O`, when the oracle has one.
    fn box_inside(&self, _x: &Space, _y: &Space, _u: &BaseElement, _v: &BaseElement) -> Option<bool> {
        None
    }

    fn describe(&self) -> Value;
}

/// `O = X × Y`.
#[derive(Clone, Debug, Default)]
pub struct WholeSpaceOracle {
    pub index: usize,
}

impl DenseOpenOracle for WholeSpaceOracle {
    fn schedule_index(&self) -> usize {
        self.index
    }

    fn refine(&self, _x: &Space, _y: &Space, u: &BaseElement, v: &BaseElement) -> Result<(BaseElement, BaseElement)> {
        Ok((u.clone(), v.clone()))
    }

    fn member(&self, _x: &Point, _y: &Point) -> Option<bool> {
        Some(true)
    }

    fn box_inside(&self, _x: &Space, _y: &Space, _u: &BaseElement, _v: &BaseElement) -> Option<bool> {
        Some(true)
    }

    fn describe(&self) -> Value {
        json!({ "index": self.index, "kind": "whole" })
    }
}

/// `O = X × Y ∖ S` for a finite set `S` of punctures. Dense whenever no puncture
/// is an isolated point of the product.
#[derive(Clone, Debug)]
pub struct PunctureOracle {
    pub index: usize,
    pub punctures: Vec<(Point, Point)>,
    /// Maximum number of avoidance steps per refinement.
    pub fuel: usize,
}

impl PunctureOracle {
    pub fn new(index: usize, punctures: Vec<(Point, Point)>) -> PunctureOracle {
        let fuel = punctures.len().max(1);
        PunctureOracle { index, punctures, fuel }
    }

    pub fn single(index: usize, p: Point, q: Point) -> PunctureOracle {
        PunctureOracle::new(index, vec![(p, q)])
    }
}

impl DenseOpenOracle for PunctureOracle {
    fn schedule_index(&self) -> usize {
        self.index
    }

    fn refine(&self, x: &Space, y: &Space, u: &BaseElement, v: &BaseElement) -> Result<(BaseElement, BaseElement)> {
        let (mut u, mut v) = (u.clone(), v.clone());
        let mut steps = 0;
        for (p, q) in &self.punctures {
            if !(x.member(p, &u)? && y.member(q, &v)?) {
                continue;
            }
            steps += 1;
            if steps > self.fuel {
                return Err(Error::Fuel(format!("O_{}: more than {} punctures to avoid", self.index, self.fuel)));
            }
            if let Some(u2) = x.avoid_point(&u, p)? {
                u = u2;
            } else if let Some(v2) = y.avoid_point(&v, q)? {
                v = v2;
            } else {
                return Err(Error::Fuel(format!(
                    "O_{}: no sub-box of {u:?} × {v:?} avoids ({p}, {q})",
                    self.index
                )));
            }
        }
        Ok((u, v))
    }

    fn member(&self, x: &Point, y: &Point) -> Option<bool> {
        Some(!self.punctures.iter().any(|(p, q)| p == x && q == y))
    }

    fn box_inside(&self, x: &Space, y: &Space, u: &BaseElement, v: &BaseElement) -> Option<bool> {
        let mut inside = true;
        for (p, q) in &self.punctures {
            let hit = x.member(p, u).ok()? && y.member(q, v).ok()?;
            inside &= !hit;
        }
        Some(inside)
    }

    fn describe(&self) -> Value {
        json!({
            "index": self.index,
            "kind": "puncture",
            "punctures": self.punctures.iter().map(|(p, q)| json!([p, q])).collect::<Vec<_>>(),
        })
    }
}
