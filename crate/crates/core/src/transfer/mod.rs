//! Executable strategy transfers.
//!
//! - [`product`]: from a Baire `X` and a β-unfavorable strong Choquet `Y`, the
//!   strategies σ_X on `X` and σ_Y on `Y` whose losing plays assemble a point of
//!   `U × V ∩ ⋂ Oₙ`.
//! - [`krom_product`]: β strategies moved between `BM(∏ Xᵢ)` and `BM(∏ K(Xᵢ))`, with
//!   counterplay extraction in both directions.
//! - [`lowering`]: a Ch strategy on `K⁰_B(X)` lowered to `Ch(X)`, with the glued
//!   Krom point of a surviving play.
//! - [`projection`]: the disjoint-projection check behind the countable π-base of `K(Y)`.
//! - [`scenario`]: JSON-configured runs of the above, producing reports.
//!
//! Products use finite-support boxes: an index missing from the support stands
//! for the whole factor.

pub mod scenario;
pub mod projection;
pub mod product;
pub mod krom_product;
pub mod lowering;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::game::Arena;
use crate::krom::{basic_subset_in, DecreasingSeq, KromPoint};
use crate::topology::{BaseElement, Point, Space};

pub use scenario::{run_scenario, ScenarioConfig, ScenarioReport};

/// `∏_{i ∈ support} Bᵢ × ∏_{i ∉ support} Xᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSupportBox<T> {
    pub support: BTreeMap<usize, T>,
}

impl<T> Default for FiniteSupportBox<T> {
    fn default() -> Self {
        FiniteSupportBox { support: BTreeMap::new() }
    }
}

impl<T> FiniteSupportBox<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, i: usize) -> Option<&T> {
        self.support.get(&i)
    }

    pub fn insert(&mut self, i: usize, t: T) {
        self.support.insert(i, t);
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.support.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

impl<T> FromIterator<(usize, T)> for FiniteSupportBox<T> {
    fn from_iter<I: IntoIterator<Item = (usize, T)>>(iter: I) -> Self {
        FiniteSupportBox { support: iter.into_iter().collect() }
    }
}

pub type ProductBox = FiniteSupportBox<BaseElement>;
pub type KromBox = FiniteSupportBox<DecreasingSeq>;

fn check_indices<T>(n: usize, b: &FiniteSupportBox<T>) -> Result<()> {
    match b.indices().find(|&i| i >= n) {
        Some(i) => domain(format!("index {i} outside a product of {n} factors")),
        None => Ok(()),
    }
}

/// `∏ Xᵢ` over finitely many enumerated indices.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductArena {
    pub factors: Vec<Space>,
}

impl ProductArena {
    pub fn new(factors: Vec<Space>) -> Self {
        ProductArena { factors }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// The factor of `b` at `i`, whole off support.
    pub fn coord(&self, b: &ProductBox, i: usize) -> BaseElement {
        b.get(i).cloned().unwrap_or_else(|| self.factors[i].whole())
    }
}

impl Arena for ProductArena {
    type Point = Vec<Point>;
    type Open = ProductBox;

    fn label(&self) -> String {
        let names: Vec<String> = self.factors.iter().map(Space::name).collect();
        format!("prod({})", names.join(","))
    }

    fn whole(&self) -> ProductBox {
        ProductBox::new()
    }

    fn contains(&self, inner: &ProductBox, outer: &ProductBox) -> Result<bool> {
        check_indices(self.len(), inner)?;
        check_indices(self.len(), outer)?;
        for (i, u) in &inner.support {
            self.factors[*i].validate_element(u)?;
        }
        for (i, o) in &outer.support {
            if !self.factors[*i].contains(&self.coord(inner, *i), o)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn member(&self, x: &Vec<Point>, u: &ProductBox) -> Result<bool> {
        if x.len() != self.len() {
            return domain(format!("a point of {} has {} coordinates, got {}", self.label(), self.len(), x.len()));
        }
        check_indices(self.len(), u)?;
        for (i, o) in &u.support {
            if !self.factors[*i].member(&x[*i], o)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn pick_point(&self, u: &ProductBox) -> Result<Vec<Point>> {
        check_indices(self.len(), u)?;
        (0..self.len()).map(|i| self.factors[i].pick_point(&self.coord(u, i))).collect()
    }

    fn is_atom(&self, u: &ProductBox) -> Result<bool> {
        for i in 0..self.len() {
            if !self.factors[i].is_atom(&self.coord(u, i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `∏ K(Xᵢ)` with basic opens given by stems, over finitely many indices.
#[derive(Clone, Debug, PartialEq)]
pub struct KromProductArena {
    pub factors: Vec<Space>,
}

impl KromProductArena {
    pub fn new(factors: Vec<Space>) -> Self {
        KromProductArena { factors }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn base(&self) -> ProductArena {
        ProductArena::new(self.factors.clone())
    }

    /// Whether `K(Xᵢ)` is itself a single basic open: `Xᵢ` has no proper nonempty open.
    fn factor_is_one_basic(&self, i: usize) -> Result<bool> {
        let s = &self.factors[i];
        s.is_atom(&s.whole())
    }

    /// The box of final stem entries, `∏ Uᵢ(mᵢ)`.
    pub fn project(&self, b: &KromBox) -> ProductBox {
        b.support.iter().map(|(i, s)| (*i, s.last().clone())).collect()
    }
}

impl Arena for KromProductArena {
    type Point = Vec<KromPoint>;
    type Open = KromBox;

    fn label(&self) -> String {
        let names: Vec<String> = self.factors.iter().map(|s| format!("K({s})")).collect();
        format!("prod({})", names.join(","))
    }

    fn whole(&self) -> KromBox {
        KromBox::new()
    }

    fn contains(&self, inner: &KromBox, outer: &KromBox) -> Result<bool> {
        check_indices(self.len(), inner)?;
        check_indices(self.len(), outer)?;
        for (i, f) in &outer.support {
            let space = &self.factors[*i];
            let inside = match inner.get(*i) {
                Some(g) => basic_subset_in(space, g, f)?,
                None => self.factor_is_one_basic(*i)? && f.elems().iter().all(|e| *e == space.whole()),
            };
            if !inside {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn member(&self, x: &Vec<KromPoint>, u: &KromBox) -> Result<bool> {
        if x.len() != self.len() {
            return domain(format!("a point of {} has {} coordinates, got {}", self.label(), self.len(), x.len()));
        }
        check_indices(self.len(), u)?;
        for (i, f) in &u.support {
            if *x[*i].space() != self.factors[*i] {
                return domain(format!("coordinate {i} is a Krom point of another space"));
            }
            if !x[*i].in_basic(f)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn pick_point(&self, u: &KromBox) -> Result<Vec<KromPoint>> {
        check_indices(self.len(), u)?;
        (0..self.len())
            .map(|i| match u.get(i) {
                Some(s) => KromPoint::canonical(&self.factors[i], s.clone()),
                None => Ok(KromPoint::whole(&self.factors[i])),
            })
            .collect()
    }

    fn is_atom(&self, u: &KromBox) -> Result<bool> {
        for i in 0..self.len() {
            let atom = match u.get(i) {
                Some(s) => self.factors[i].is_atom(s.last())?,
                None => self.factor_is_one_basic(i)?,
            };
            if !atom {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests;
