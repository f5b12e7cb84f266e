//! JSON scenario files.
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "bounds": { "min": [0, 0], "max": [1, 1] },
//!   "obstacles": [{ "min": [0.4, 0.4], "max": [0.6, 0.6] }],
//!   "zones": [{ "min": [0, 0], "max": [1, 0.2], "coefficient": 2.0 }],
//!   "x_init": [0.1, 0.1],
//!   "goal": { "min": [0.9, 0.9], "max": [1, 1] }
//! }
//! ```
//!
//! `obstacles`, `zones`, `default_coefficient` (1 if absent), `name` and
//! `metadata` are optional. Unknown fields are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use rrtsharp_core::{AxisBox, CostZone, Point, Scenario, ScenarioError};
use serde::{Deserialize, Serialize};

use crate::bundled;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed scenario: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] ScenarioError),
    #[error("unknown bundled scenario `{0}`; available: {list}", list = bundled::NAMES.join(", "))]
    UnknownBundled(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxSpec {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZoneSpec {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    pub coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
    pub dimension: usize,
    pub bounds: BoxSpec,
    #[serde(default)]
    pub obstacles: Vec<BoxSpec>,
    #[serde(default)]
    pub zones: Vec<ZoneSpec>,
    pub x_init: Vec<f64>,
    pub goal: BoxSpec,
    #[serde(default = "unit", skip_serializing_if = "is_unit")]
    pub default_coefficient: f64,
}

fn unit() -> f64 {
    1.0
}

fn is_unit(x: &f64) -> bool {
    *x == 1.0
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, LoadError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Checks dimensions against `dimension`, then builds and validates.
    pub fn to_scenario(&self) -> Result<Scenario, ScenarioError> {
        let d = self.dimension;
        let bounds = make_box("bounds", &self.bounds, d)?;
        let obstacles = self
            .obstacles
            .iter()
            .enumerate()
            .map(|(i, b)| make_box(&format!("obstacles[{i}]"), b, d))
            .collect::<Result<Vec<_>, _>>()?;
        let zones = self
            .zones
            .iter()
            .enumerate()
            .map(|(i, z)| {
                let field = format!("zones[{i}]");
                let region = make_box(&field, &BoxSpec { min: z.min.clone(), max: z.max.clone() }, d)?;
                CostZone::new(region, z.coefficient).map_err(|e| prefixed(&field, e))
            })
            .collect::<Result<Vec<_>, _>>()?;
        check_len("x_init", &self.x_init, d)?;
        let goal = make_box("goal", &self.goal, d)?;
        Scenario::with_default_coefficient(
            bounds,
            obstacles,
            zones,
            Point::from(self.x_init.clone()),
            goal,
            self.default_coefficient,
        )
    }
}

fn prefixed(parent: &str, e: ScenarioError) -> ScenarioError {
    ScenarioError::new(format!("{parent}.{}", e.field), e.message)
}

fn check_len(field: &str, coords: &[f64], d: usize) -> Result<(), ScenarioError> {
    if coords.len() != d {
        return Err(ScenarioError::new(
            field,
            format!("has {} coordinates, dimension is {d}", coords.len()),
        ));
    }
    Ok(())
}

fn make_box(field: &str, spec: &BoxSpec, d: usize) -> Result<AxisBox, ScenarioError> {
    check_len(&format!("{field}.min"), &spec.min, d)?;
    check_len(&format!("{field}.max"), &spec.max, d)?;
    AxisBox::new(Point::from(spec.min.clone()), Point::from(spec.max.clone())).map_err(|e| prefixed(field, e))
}

/// Parses and validates scenario text.
pub fn parse_scenario(text: &str) -> Result<Scenario, LoadError> {
    Ok(ScenarioFile::parse(text)?.to_scenario()?)
}

/// Loads a scenario from a path, or a bundled one named `bundled:<name>`.
/// Returns the scenario and the exact bytes it was parsed from.
pub fn load(location: &str) -> Result<(Scenario, String), LoadError> {
    let text = match location.strip_prefix("bundled:") {
        Some(name) => bundled::source(name)
            .ok_or_else(|| LoadError::UnknownBundled(name.to_string()))?
            .to_string(),
        None => std::fs::read_to_string(Path::new(location)).map_err(|source| LoadError::Io {
            path: location.to_string(),
            source,
        })?,
    };
    Ok((parse_scenario(&text)?, text))
}
