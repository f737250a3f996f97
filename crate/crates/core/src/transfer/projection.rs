//! The countability mechanism for `K(Y)` with `Y` locally ccc: pairwise-disjoint
//! basic opens below `f ⌢ U` project to pairwise-disjoint opens inside `U`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::krom::{basic_disjoint, ccc_pi_base_step_default, disjoint_family_projection, generate_disjoint_family, DecreasingSeq};
use crate::rational::Rat;
use crate::topology::{BaseElement, Interval, Space};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProjectionReport {
    pub f0: DecreasingSeq,
    pub family: usize,
    /// Every pair of generated stems is incomparable.
    pub stems_disjoint: bool,
    /// The final entries are pairwise disjoint inside `f0`'s last entry.
    pub projection_disjoint: bool,
}

impl ProjectionReport {
    pub fn ok(&self) -> bool {
        self.stems_disjoint && self.projection_disjoint
    }
}

/// Generates `n` disjoint basic opens below `((-1,1)) ⌢ U` on ℚ and checks their projection.
pub fn projection_demo(n: usize, seed: u64) -> Result<ProjectionReport> {
    let space = Space::Rationals;
    let start = Interval::bounded(Rat::integer(-1), Rat::one()).expect("nonempty");
    let f = DecreasingSeq::singleton(&space, BaseElement::Interval(start))?;
    let f0 = ccc_pi_base_step_default(&space, &f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = generate_disjoint_family(&f0, n, &mut rng)?;
    let stems_disjoint = family
        .iter()
        .enumerate()
        .all(|(i, a)| family[i + 1..].iter().all(|b| basic_disjoint(a, b)));
    let projection_disjoint = disjoint_family_projection(&space, &f0, &family)?;
    Ok(ProjectionReport { f0, family: family.len(), stems_disjoint, projection_disjoint })
}
