//! Decreasing neighborhood bases and the Gruenhage W-point strategy built on them.

use super::{BaseElement, Point, Space};
use crate::error::{Error, Result};

/// The canonical decreasing neighborhood base at a point, as an unbounded stream.
#[derive(Clone, Debug)]
pub struct NeighborhoodBase {
    space: Space,
    center: Point,
    next: u32,
}

impl NeighborhoodBase {
    pub(super) fn new(space: Space, center: Point) -> Result<NeighborhoodBase> {
        if !space.flags().first_countable {
            return Err(Error::Unsupported(format!("{space} is not first countable")));
        }
        space.validate_point(&center)?;
        Ok(NeighborhoodBase { space, center, next: 0 })
    }
}

impl Iterator for NeighborhoodBase {
    type Item = BaseElement;

    fn next(&mut self) -> Option<BaseElement> {
        let k = self.next;
        self.next += 1;
        Some(
            self.space
                .neighborhood_base_member(&self.center, k)
                .expect("center validated"),
        )
    }
}

/// Player I's strategy in the Gruenhage game at `center`: after `k` replies it
/// plays the `k`-th member of the neighborhood base, which forces any compliant
/// reply sequence to converge to the center.
#[derive(Clone, Debug, PartialEq)]
pub struct WPointStrategy {
    space: Space,
    center: Point,
}

impl WPointStrategy {
    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    /// The neighborhood played after the given replies.
    pub fn respond(&self, replies: &[Point]) -> Result<BaseElement> {
        self.space.neighborhood_base_member(&self.center, replies.len() as u32)
    }

    /// Same as [`respond`](Self::respond), by reply count.
    pub fn respond_after(&self, count: usize) -> Result<BaseElement> {
        self.space.neighborhood_base_member(&self.center, count as u32)
    }
}

pub fn gruenhage_w_strategy(space: &Space, center: &Point) -> Result<WPointStrategy> {
    if !space.flags().first_countable {
        return Err(Error::Unsupported(format!("{space} is not first countable")));
    }
    space.validate_point(center)?;
    Ok(WPointStrategy { space: space.clone(), center: center.clone() })
}
