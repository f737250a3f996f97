//! Stock strategies by name.

use super::{
    CanonicalBeta, CenterReplier, DiagonalBeta, EchoAlpha, EdgeReplier, RandomAlpha, RandomBeta, RandomReplier,
    RationalWalkBeta, RefineAlpha, RemarkTactic, Strategy,
};
use crate::error::{Error, Result};
use crate::topology::Space;

pub type BoxedStrategy = Box<dyn Strategy<Space> + Send>;

pub const BETA_NAMES: &[(&str, &str)] = &[
    ("canonical", "canonical point, one refinement step around it"),
    ("diagonal", "ℚ only: excludes the n-th enumerated rational at round n"),
    ("rational-walk", "keeps α's open, moves a rational point inside it"),
    ("random[:seed]", "seeded random legal moves"),
];

pub const ALPHA_NAMES: &[(&str, &str)] = &[
    ("halver", "one refinement step around β's point (halves intervals)"),
    ("cylinder", "one refinement step around β's point (extends cylinders)"),
    ("identity", "repeats β's open"),
    ("remark", "Ch on remark-qd: {x} for x in D, else β's open"),
    ("random[:seed]", "seeded random legal replies"),
];

pub const REPLIER_NAMES: &[(&str, &str)] = &[
    ("center", "always the center"),
    ("edge", "a point near the edge of the neighborhood"),
    ("random[:seed]", "seeded random points"),
];

fn seeded(name: &str, default_seed: u64) -> Result<Option<u64>> {
    match name.strip_prefix("random") {
        Some("") => Ok(Some(default_seed)),
        Some(rest) => rest
            .strip_prefix(':')
            .and_then(|s| s.parse().ok())
            .map(Some)
            .ok_or_else(|| Error::Parse(format!("bad strategy name {name:?}"))),
        None => Ok(None),
    }
}

pub fn beta(name: &str, seed: u64) -> Result<BoxedStrategy> {
    if let Some(s) = seeded(name, seed)? {
        return Ok(Box::new(RandomBeta::new(s)));
    }
    Ok(match name {
        "canonical" => Box::new(CanonicalBeta),
        "diagonal" => Box::new(DiagonalBeta::default()),
        "rational-walk" => Box::new(RationalWalkBeta),
        _ => return Err(Error::Parse(format!("unknown β strategy {name:?}"))),
    })
}

pub fn alpha(name: &str, seed: u64) -> Result<BoxedStrategy> {
    if let Some(s) = seeded(name, seed)? {
        return Ok(Box::new(RandomAlpha::new(s)));
    }
    Ok(match name {
        "halver" | "cylinder" | "refine" => Box::new(RefineAlpha::new(name)),
        "identity" => Box::new(EchoAlpha),
        "remark" => Box::new(RemarkTactic),
        _ => return Err(Error::Parse(format!("unknown α strategy {name:?}"))),
    })
}

pub fn replier(name: &str, seed: u64) -> Result<BoxedStrategy> {
    if let Some(s) = seeded(name, seed)? {
        return Ok(Box::new(RandomReplier::new(s)));
    }
    Ok(match name {
        "center" => Box::new(CenterReplier),
        "edge" => Box::new(EdgeReplier),
        _ => return Err(Error::Parse(format!("unknown Player II strategy {name:?}"))),
    })
}
