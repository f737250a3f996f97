//! Krom spaces: decreasing sequences of opens, topologized by finite prefixes.
//!
//! Indexing convention: a stem of length `n` has entries `0..n`, and the basic
//! open `[f]` is the set of Krom points whose first `|f|` entries equal `f`.

mod point;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use point::{k0_certify, k0_verify, ultradist, K0Certificate, KromPoint, Tail, UltraDist};

use crate::error::{precondition, Error, Result};
use crate::rational::Rat;
use crate::topology::{BaseElement, Interval, Space};

/// A nonempty finite chain `f(0) ⊇ f(1) ⊇ ...` of base elements (non-strict).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DecreasingSeq {
    elems: Vec<BaseElement>,
}

impl DecreasingSeq {
    pub fn new(space: &Space, elems: Vec<BaseElement>) -> Result<Self> {
        if elems.is_empty() {
            return precondition("a decreasing sequence needs at least one element");
        }
        for e in &elems {
            space.validate_element(e)?;
        }
        for (k, w) in elems.windows(2).enumerate() {
            if !space.contains(&w[1], &w[0])? {
                return precondition(format!("entry {} is not inside entry {k}", k + 1));
            }
        }
        Ok(DecreasingSeq { elems })
    }

    pub fn singleton(space: &Space, u: BaseElement) -> Result<Self> {
        DecreasingSeq::new(space, vec![u])
    }

    pub fn elems(&self) -> &[BaseElement] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> &BaseElement {
        self.elems.last().expect("nonempty")
    }

    pub fn get(&self, k: usize) -> Option<&BaseElement> {
        self.elems.get(k)
    }

    /// `f ⌢ u`.
    pub fn extend(&self, space: &Space, u: BaseElement) -> Result<DecreasingSeq> {
        if !space.contains(&u, self.last())? {
            return precondition(format!("{u:?} is not inside the last entry {:?}", self.last()));
        }
        let mut elems = self.elems.clone();
        elems.push(u);
        Ok(DecreasingSeq { elems })
    }

    /// `f↾k` for `1 ≤ k ≤ |f|`.
    pub fn restrict(&self, k: usize) -> Result<DecreasingSeq> {
        if k == 0 || k > self.len() {
            return precondition(format!("cannot restrict a length-{} stem to {k}", self.len()));
        }
        Ok(DecreasingSeq { elems: self.elems[..k].to_vec() })
    }

    /// Whether `self` is an initial segment of `other`.
    pub fn is_prefix_of(&self, other: &DecreasingSeq) -> bool {
        self.len() <= other.len() && other.elems[..self.len()] == self.elems[..]
    }

    /// Builds without validation; callers guarantee the chain property.
    pub(crate) fn from_vec_unchecked(elems: Vec<BaseElement>) -> DecreasingSeq {
        debug_assert!(!elems.is_empty());
        DecreasingSeq { elems }
    }
}

/// `f ⌢ u`, checked.
pub fn extend(space: &Space, f: &DecreasingSeq, u: BaseElement) -> Result<DecreasingSeq> {
    f.extend(space, u)
}

/// The prefix rule for basic opens: `[g] ⊆ [f]` when `g` extends `f`.
///
/// This is always sound. It is also complete unless `g` ends in an atom (a base
/// element with no proper basic subset, as in finite spaces): then every Krom
/// point of `[g]` repeats that atom forever, and [`basic_subset_in`] is exact.
pub fn basic_subset(g: &DecreasingSeq, f: &DecreasingSeq) -> bool {
    f.is_prefix_of(g)
}

/// Exact inclusion `[g] ⊆ [f]` of basic opens of `K(X)`.
pub fn basic_subset_in(space: &Space, g: &DecreasingSeq, f: &DecreasingSeq) -> Result<bool> {
    if g.len() >= f.len() || !space.is_atom(g.last())? {
        return Ok(basic_subset(g, f));
    }
    // the atom is forced from here on
    let mut padded = g.elems.clone();
    padded.resize(f.len(), g.last().clone());
    Ok(padded == f.elems)
}

/// Whether `[a]` and `[b]` are disjoint: the stems differ within their common length.
pub fn basic_disjoint(a: &DecreasingSeq, b: &DecreasingSeq) -> bool {
    !a.is_prefix_of(b) && !b.is_prefix_of(a)
}

/// `f ⌢ U` with `U` an open ccc subspace of `f`'s last entry, chosen by `chooser`.
pub fn ccc_pi_base_step(
    space: &Space,
    f: &DecreasingSeq,
    chooser: impl Fn(&BaseElement) -> Result<BaseElement>,
) -> Result<DecreasingSeq> {
    let u = chooser(f.last())?;
    if !space.contains(&u, f.last())? {
        return Err(Error::Unsupported(format!("ccc chooser left the last entry: {u:?}")));
    }
    f.extend(space, u)
}

/// [`ccc_pi_base_step`] with the space's own chooser.
pub fn ccc_pi_base_step_default(space: &Space, f: &DecreasingSeq) -> Result<DecreasingSeq> {
    ccc_pi_base_step(space, f, |u| space.ccc_chooser(u))
}

/// For a pairwise-disjoint family of basic opens below `[f0]`, whether their
/// final entries are pairwise disjoint opens inside `f0`'s last entry.
pub fn disjoint_family_projection(space: &Space, f0: &DecreasingSeq, family: &[DecreasingSeq]) -> Result<bool> {
    for (i, g) in family.iter().enumerate() {
        if !basic_subset(g, f0) {
            return precondition(format!("family member {i} does not extend f0"));
        }
    }
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            if !basic_disjoint(a, b) {
                return precondition(format!("family member {i} meets another member"));
            }
        }
    }
    for (i, a) in family.iter().enumerate() {
        if !space.contains(a.last(), f0.last())? {
            return Ok(false);
        }
        for b in &family[i + 1..] {
            if !space.disjoint(a.last(), b.last())? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `n` stems below `f0` on ℚ: `f0`'s last interval cut into `n` equal pieces,
/// each followed by up to three random nested subintervals.
pub fn generate_disjoint_family<R: Rng>(f0: &DecreasingSeq, n: usize, rng: &mut R) -> Result<Vec<DecreasingSeq>> {
    let space = Space::Rationals;
    let BaseElement::Interval(u) = f0.last() else {
        return Err(Error::Unsupported("disjoint families are generated on rationals only".into()));
    };
    let u = u.bounded_part();
    let (lo, hi) = (u.lo.clone().expect("bounded"), u.hi.clone().expect("bounded"));
    let width = &(&hi - &lo) / &Rat::integer(n as i64);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let a = &lo + &(&width * &Rat::integer(i as i64));
        let piece = Interval::bounded(a.clone(), &a + &width).expect("positive width");
        let mut g = f0.extend(&space, BaseElement::Interval(piece))?;
        for _ in 0..rng.gen_range(0..4) {
            let sub = space.random_subelement(g.last(), rng)?;
            g = g.extend(&space, sub)?;
        }
        out.push(g);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
