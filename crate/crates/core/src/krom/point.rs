//! Lazily materialized Krom points, the first-difference ultrametric and
//! neighborhood-base certificates.

use std::cell::RefCell;
use std::fmt;
use std::sync::Arc;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::DecreasingSeq;
use crate::error::{domain, precondition, Error, Result};
use crate::rational::Rat;
use crate::topology::{BaseElement, Point, Space};

/// How a Krom point continues past its prefix.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// Repeat the last prefix entry forever.
    Repeat,
    /// Entry `|prefix| + j` is `refine(witness, last, j + 1)`.
    ShrinkToWitness,
    /// Continue with the entries of another Krom point.
    Splice(Box<KromPoint>),
}

/// A point of `K(X)`: a decreasing sequence given by a finite prefix and a tail
/// rule, carrying a witness that lies in every entry.
///
/// Materialized entries are memoized; a `KromPoint` is meant to be used from one
/// thread at a time.
#[derive(Clone)]
pub struct KromPoint {
    space: Arc<Space>,
    prefix: DecreasingSeq,
    tail: Tail,
    witness: Point,
    memo: RefCell<Vec<BaseElement>>,
}

impl PartialEq for KromPoint {
    fn eq(&self, other: &KromPoint) -> bool {
        self.space == other.space && self.prefix == other.prefix && self.tail == other.tail && self.witness == other.witness
    }
}

impl fmt::Debug for KromPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KromPoint")
            .field("prefix", &self.prefix)
            .field("tail", &self.tail)
            .field("witness", &self.witness)
            .finish()
    }
}

impl Serialize for KromPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("KromPoint", 3)?;
        s.serialize_field("prefix", &self.prefix)?;
        s.serialize_field("tail", &self.tail)?;
        s.serialize_field("witness", &self.witness)?;
        s.end()
    }
}

impl KromPoint {
    fn checked(space: &Space, prefix: DecreasingSeq, tail: Tail, witness: Point) -> Result<KromPoint> {
        for (k, e) in prefix.elems().iter().enumerate() {
            if !space.member(&witness, e)? {
                return precondition(format!("witness {witness} is not in entry {k}"));
            }
        }
        Ok(KromPoint { space: Arc::new(space.clone()), prefix, tail, witness, memo: RefCell::new(Vec::new()) })
    }

    pub fn repeat(space: &Space, prefix: DecreasingSeq, witness: Point) -> Result<KromPoint> {
        KromPoint::checked(space, prefix, Tail::Repeat, witness)
    }

    pub fn shrink(space: &Space, prefix: DecreasingSeq, witness: Point) -> Result<KromPoint> {
        KromPoint::checked(space, prefix, Tail::ShrinkToWitness, witness)
    }

    /// `prefix ⌢ inner`; needs `inner(0) ⊆ last(prefix)`.
    pub fn splice(space: &Space, prefix: DecreasingSeq, inner: KromPoint) -> Result<KromPoint> {
        if *inner.space != *space {
            return domain("spliced point lives in another space");
        }
        if !space.contains(&inner.get(0)?, prefix.last())? {
            return precondition("spliced tail does not start inside the prefix");
        }
        let witness = inner.witness.clone();
        KromPoint::checked(space, prefix, Tail::Splice(Box::new(inner)), witness)
    }

    /// The stem followed by shrinking neighborhoods of its canonical point.
    pub fn canonical(space: &Space, stem: DecreasingSeq) -> Result<KromPoint> {
        let w = space.pick_point(stem.last())?;
        KromPoint::shrink(space, stem, w)
    }

    /// The constant sequence of the whole space.
    pub fn whole(space: &Space) -> KromPoint {
        let w = space.pick_point(&space.whole()).expect("whole space is a base element");
        KromPoint::repeat(space, DecreasingSeq::from_vec_unchecked(vec![space.whole()]), w).expect("witness in whole")
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn prefix(&self) -> &DecreasingSeq {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn witness(&self) -> &Point {
        &self.witness
    }

    /// Entry `n` of the sequence.
    pub fn get(&self, n: usize) -> Result<BaseElement> {
        let p = self.prefix.len();
        if n < p {
            return Ok(self.prefix.elems()[n].clone());
        }
        let j = n - p;
        match &self.tail {
            Tail::Repeat => Ok(self.prefix.last().clone()),
            Tail::Splice(inner) => inner.get(j),
            Tail::ShrinkToWitness => {
                let mut memo = self.memo.borrow_mut();
                while memo.len() <= j {
                    let step = memo.len() as u32 + 1;
                    memo.push(self.space.refine(&self.witness, self.prefix.last(), step)?);
                }
                Ok(memo[j].clone())
            }
        }
    }

    /// The first `n` entries, as a stem (`n ≥ 1`).
    pub fn restrict(&self, n: usize) -> Result<DecreasingSeq> {
        if n == 0 {
            return precondition("stems have length at least 1");
        }
        let elems = (0..n).map(|k| self.get(k)).collect::<Result<Vec<_>>>()?;
        Ok(DecreasingSeq::from_vec_unchecked(elems))
    }

    /// Whether this point lies in the basic open `[stem]`.
    pub fn in_basic(&self, stem: &DecreasingSeq) -> Result<bool> {
        for (k, e) in stem.elems().iter().enumerate() {
            if self.get(k)? != *e {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Re-checks the first `n` entries: decreasing, and all containing the witness.
    pub fn check(&self, n: usize) -> Result<()> {
        let mut prev: Option<BaseElement> = None;
        for k in 0..n {
            let e = self.get(k)?;
            if !self.space.member(&self.witness, &e)? {
                return Err(Error::InvariantViolation(format!("witness {} left entry {k}", self.witness)));
            }
            if let Some(p) = &prev {
                if !self.space.contains(&e, p)? {
                    return Err(Error::InvariantViolation(format!("entry {k} is not inside entry {}", k - 1)));
                }
            }
            prev = Some(e);
        }
        Ok(())
    }
}

/// The distance `2^-m` for the first index `m` where two Krom points differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UltraDist {
    /// Structurally identical points.
    Zero,
    /// `2^-m`.
    Exact(u32),
    /// No difference within the fuel: at most `2^-fuel`.
    AtMost(u32),
}

impl UltraDist {
    /// The exact value, or the upper bound when undecided.
    pub fn bound(self) -> Rat {
        match self {
            UltraDist::Zero => Rat::zero(),
            UltraDist::Exact(m) | UltraDist::AtMost(m) => Rat::dyadic(m),
        }
    }
}

pub fn ultradist(f: &KromPoint, g: &KromPoint, fuel: u32) -> Result<UltraDist> {
    if f.space != g.space {
        return domain("Krom points from different spaces");
    }
    if f == g {
        return Ok(UltraDist::Zero);
    }
    for m in 0..fuel {
        if f.get(m as usize)? != g.get(m as usize)? {
            return Ok(UltraDist::Exact(m));
        }
    }
    Ok(UltraDist::AtMost(fuel))
}

/// Evidence that a Krom point shrinks onto its witness: for each `k`, an index
/// `j(k)` (strictly increasing) with entry `j(k)` inside the `k`-th basic
/// neighborhood of the witness.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct K0Certificate {
    pub witness: Point,
    pub evidence: Vec<(usize, usize)>,
}

/// Certifies the first `depth` neighborhood-base members, searching entries
/// below `fuel`. A spliced tail reuses the inner certificate, shifted.
pub fn k0_certify(f: &KromPoint, depth: usize, fuel: usize) -> Result<K0Certificate> {
    let space = f.space();
    if !space.flags().first_countable {
        return Err(Error::Unsupported(format!("{space} is not first countable")));
    }
    if let Tail::Splice(inner) = f.tail() {
        let shift = f.prefix().len();
        let inner_cert = k0_certify(inner, depth, fuel.saturating_sub(shift))?;
        let cert = K0Certificate {
            witness: f.witness().clone(),
            evidence: inner_cert.evidence.iter().map(|&(k, j)| (k, j + shift)).collect(),
        };
        if !k0_verify(f, &cert)? {
            return Err(Error::InvariantViolation("shifted certificate failed its re-check".into()));
        }
        return Ok(cert);
    }
    let mut evidence = Vec::with_capacity(depth);
    let mut next = 0;
    for k in 0..depth {
        let n_k = space.neighborhood_base_member(f.witness(), k as u32)?;
        let mut found = None;
        for j in next..fuel {
            if space.contains(&f.get(j)?, &n_k)? {
                found = Some(j);
                break;
            }
        }
        match found {
            Some(j) => {
                evidence.push((k, j));
                next = j + 1;
            }
            None => return Err(Error::NotCertifiedAtDepth(k)),
        }
    }
    Ok(K0Certificate { witness: f.witness().clone(), evidence })
}

/// Independent re-check of a certificate.
pub fn k0_verify(f: &KromPoint, cert: &K0Certificate) -> Result<bool> {
    if cert.witness != *f.witness() {
        return Ok(false);
    }
    let mut last: Option<usize> = None;
    for (i, &(k, j)) in cert.evidence.iter().enumerate() {
        if k != i || last.is_some_and(|l| j <= l) {
            return Ok(false);
        }
        let n_k = f.space().neighborhood_base_member(f.witness(), k as u32)?;
        if !f.space().contains(&f.get(j)?, &n_k)? {
            return Ok(false);
        }
        last = Some(j);
    }
    Ok(true)
}
