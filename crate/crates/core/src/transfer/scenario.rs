//! JSON-configured transfer runs.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::krom_product::{run_krom_product, KromChecks};
use super::lowering::run_lowering;
use super::product::{puncture_schedule, run_product, whole_schedule};
use super::projection::projection_demo;
use crate::error::{Error, Result};
use crate::game::registry;
use crate::topology::Space;

pub const TRANSFERS: &[(&str, &str)] = &[
    ("projection", "disjoint basic opens of K(ℚ) project to disjoint opens"),
    ("product", "σ_X and σ_Y assemble a point of U × V inside every Oₙ"),
    ("krom-lift", "β strategies on ∏ Xᵢ lifted to ∏ K(Xᵢ)"),
    ("krom-lower", "β strategies on ∏ K(Xᵢ) lowered to ∏ Xᵢ"),
    ("krom-roundtrip", "lift then lower stays inside the original moves"),
    ("lowering", "a Ch strategy on K⁰(X) lowered to Ch(X), then glued"),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub transfer: String,
    /// Factor spaces for the product transfers; the first one for `lowering`.
    pub spaces: Vec<String>,
    pub depth: usize,
    pub fuel: usize,
    /// `puncture` or `whole`.
    pub oracles: String,
    /// Number of copies of `spaces[0]` when `spaces` has one entry.
    pub indices: usize,
    pub family: usize,
    pub alpha: String,
    pub seed: u64,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            transfer: "product".into(),
            spaces: vec![],
            depth: 4,
            fuel: 4096,
            oracles: "puncture".into(),
            indices: 1,
            family: 100,
            alpha: "cylinder".into(),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub transfer: String,
    pub ok: bool,
    pub report: Value,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("scenario config: {e}")))
    }

    fn factors(&self, default: &str) -> Result<Vec<Space>> {
        let names: Vec<&str> = if self.spaces.is_empty() { vec![default] } else { self.spaces.iter().map(String::as_str).collect() };
        let spaces = names.iter().map(|n| n.parse()).collect::<Result<Vec<Space>>>()?;
        if spaces.len() == 1 {
            Ok(vec![spaces[0].clone(); self.indices.max(1)])
        } else {
            Ok(spaces)
        }
    }
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    let (ok, report) = match cfg.transfer.as_str() {
        "projection" => {
            let r = projection_demo(cfg.family, cfg.seed)?;
            (r.ok(), json!(r))
        }
        "product" => {
            let schedule = match cfg.oracles.as_str() {
                "puncture" => puncture_schedule(cfg.depth),
                "whole" => whole_schedule(cfg.depth),
                o => return Err(Error::Parse(format!("unknown oracle schedule {o:?}"))),
            };
            let r = run_product(cfg.depth, schedule, cfg.fuel)?;
            (r.ok(), json!(r))
        }
        t @ ("krom-lift" | "krom-lower" | "krom-roundtrip") => {
            let checks = KromChecks { lift: t == "krom-lift", lower: t == "krom-lower", roundtrip: t == "krom-roundtrip" };
            let r = run_krom_product(&cfg.factors("finite:sierpinski")?, cfg.depth, checks)?;
            (r.ok(), json!(r))
        }
        "lowering" => {
            let space = cfg.factors("baire-omega")?.swap_remove(0);
            let mut alpha = registry::alpha(&cfg.alpha, cfg.seed)?;
            let r = run_lowering(space, cfg.depth, cfg.fuel, &mut *alpha)?;
            (r.ok(), json!(r))
        }
        t => return Err(Error::Parse(format!("unknown transfer {t:?}"))),
    };
    Ok(ScenarioReport { transfer: cfg.transfer.clone(), ok, report })
}
