//! JSON run configuration.
//!
//! Top-level keys (all optional except `transform`):
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `transform` | `power2`, `square`, `cube`, `exp`, `exp(<alpha>)`, `identity` | required |
//! | `dimensions` | 1 or 2 | inferred from `groups`, else 1 |
//! | `groups` | `{"a": {"bases": [...], "n": N}, "b": {...}}` | see below |
//! | `comparators` | subset of `["euclidean", "dissimilarity"]` | both |
//! | `k_values` | positive integers | `1..=100` |
//! | `realizations` | positive integer | 1000 |
//! | `seed` | unsigned integer | 0 |
//! | `d_exponent`, `e_exponent` | dissimilarity exponents | 3, 1 |
//! | `experiment_id` | label written to result tables | derived |
//! | `profile` | `{"reference", "from", "to", "points"}` | 4, 0.5, 8, 7501 |
//! | `levelsets` | `{"reference", "rect", "resolution", "levels", "ranks"}` | derived from data |
//!
//! Bases are written `{"uniform": {"low": 2, "high": 4}}` or
//! `{"normal": {"mean": 2.8, "sd": 0.333}}`, one per axis. Without `groups`,
//! 1D runs use `U(2,4)` against `U(4,6)` with 100 points each and 2D runs use
//! unit-sd normals centered at (7, 9) and (10.6, 12.6) with 1000 points each.
//!
//! Unknown keys are rejected, and every validation error names its key.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::densities::{BaseDensity, TransformKind};
use crate::error::{Error, Result};
use crate::experiment::{reference_point, ExperimentConfig, GroupConfig};
use crate::sensitivity::{Rect, DEFAULT_RESOLUTION};
use crate::similarity::{ComparatorKind, DEFAULT_D, DEFAULT_E};

const KEYS: &[&str] = &[
    "experiment_id",
    "groups",
    "transform",
    "comparators",
    "k_values",
    "realizations",
    "seed",
    "dimensions",
    "d_exponent",
    "e_exponent",
    "profile",
    "levelsets",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupEntry {
    pub bases: Vec<BaseDensity>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupsEntry {
    pub a: GroupEntry,
    pub b: GroupEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSettings {
    #[serde(default = "ProfileSettings::default_reference")]
    pub reference: f64,
    #[serde(default = "ProfileSettings::default_from")]
    pub from: f64,
    #[serde(default = "ProfileSettings::default_to")]
    pub to: f64,
    #[serde(default = "ProfileSettings::default_points")]
    pub points: usize,
}

impl ProfileSettings {
    fn default_reference() -> f64 {
        4.0
    }
    fn default_from() -> f64 {
        0.5
    }
    fn default_to() -> f64 {
        8.0
    }
    fn default_points() -> usize {
        7501
    }
}

impl Default for ProfileSettings {
    fn default() -> Self {
        ProfileSettings {
            reference: Self::default_reference(),
            from: Self::default_from(),
            to: Self::default_to(),
            points: Self::default_points(),
        }
    }
}

/// Explicit iso-levels per comparator.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelValues {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub euclidean: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dissimilarity: Option<Vec<f64>>,
}

impl LevelValues {
    pub fn for_comparator(&self, kind: &ComparatorKind) -> Option<&Vec<f64>> {
        match kind {
            ComparatorKind::Euclidean => self.euclidean.as_ref(),
            ComparatorKind::CoincidenceDissimilarity { .. } => self.dissimilarity.as_ref(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSetSettings {
    /// Defaults to the experiment's transformed decision point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<[f64; 2]>,
    /// `[x_min, x_max, y_min, y_max]`; defaults to the bounding box of the
    /// first realization's samples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rect: Option<[f64; 4]>,
    #[serde(default = "LevelSetSettings::default_resolution")]
    pub resolution: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<LevelValues>,
    /// Without explicit levels, each comparator gets one contour per rank:
    /// the comparison value of its `rank`-th nearest sample. Defaults to 5%,
    /// 12.5% and 50% of the pooled sample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ranks: Option<Vec<usize>>,
}

impl LevelSetSettings {
    fn default_resolution() -> usize {
        DEFAULT_RESOLUTION
    }

    pub fn ranks(&self, total: usize) -> Vec<usize> {
        self.ranks
            .clone()
            .unwrap_or_else(|| [total / 20, total / 8, total / 2].map(|r| r.max(1)).to_vec())
    }

    pub fn rect(&self) -> Result<Option<Rect>> {
        self.rect.map(|[x0, x1, y0, y1]| Rect::new(x0, x1, y0, y1)).transpose()
    }
}

impl Default for LevelSetSettings {
    fn default() -> Self {
        LevelSetSettings {
            reference: None,
            rect: None,
            resolution: Self::default_resolution(),
            levels: None,
            ranks: None,
        }
    }
}

/// A fully resolved run: experiment plus profile and level-set settings.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment_id: String,
    pub experiment: ExperimentConfig,
    pub d_exponent: f64,
    pub e_exponent: f64,
    pub profile: ProfileSettings,
    pub levelsets: LevelSetSettings,
}

impl RunConfig {
    /// Every resolved parameter as a config document; parsing it back yields
    /// an equal `RunConfig`.
    pub fn to_json(&self) -> Value {
        let exp = &self.experiment;
        let group = |g: &GroupConfig| GroupEntry {
            bases: g.bases.clone(),
            n: Some(g.n),
        };
        let groups = GroupsEntry {
            a: group(&exp.group_a),
            b: group(&exp.group_b),
        };
        let comparators: Vec<&str> = exp.comparators.iter().map(|c| c.name()).collect();
        serde_json::json!({
            "experiment_id": self.experiment_id,
            "transform": exp.transform,
            "dimensions": exp.dimensions(),
            "groups": groups,
            "comparators": comparators,
            "k_values": exp.k_values,
            "realizations": exp.realizations,
            "seed": exp.master_seed,
            "d_exponent": self.d_exponent,
            "e_exponent": self.e_exponent,
            "profile": self.profile,
            "levelsets": self.levelsets,
        })
    }

    pub fn dissimilarity(&self) -> ComparatorKind {
        ComparatorKind::CoincidenceDissimilarity {
            d: self.d_exponent,
            e: self.e_exponent,
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        self.experiment.master_seed = seed;
    }
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::MalformedConfig(e.to_string()))?;
    let Value::Object(map) = value else {
        return Err(Error::MalformedConfig("top level must be a JSON object".into()));
    };
    resolve(&map)
}

fn field<T: DeserializeOwned>(map: &Map<String, Value>, key: &str) -> Result<Option<T>> {
    map.get(key)
        .map(|v| serde_json::from_value(v.clone()).map_err(|e| Error::config(key, e.to_string())))
        .transpose()
}

fn default_groups(dims: usize) -> (GroupConfig, GroupConfig) {
    let template = if dims == 2 {
        ExperimentConfig::normal_2d(TransformKind::Identity)
    } else {
        ExperimentConfig::uniform_1d(TransformKind::Identity)
    };
    (template.group_a, template.group_b)
}

fn resolve(map: &Map<String, Value>) -> Result<RunConfig> {
    if let Some(unknown) = map.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(Error::config(unknown.clone(), "unknown key"));
    }

    let transform_name: String =
        field(map, "transform")?.ok_or_else(|| Error::config("transform", "missing required key"))?;
    let transform: TransformKind = transform_name
        .parse()
        .map_err(|e: Error| Error::config("transform", e.to_string()))?;

    let groups: Option<GroupsEntry> = field(map, "groups")?;
    let dims_key: Option<i64> = field(map, "dimensions")?;
    let dims = match (dims_key, &groups) {
        (Some(d), _) if !(1..=2).contains(&d) => {
            return Err(Error::UnsupportedConfig(format!(
                "`dimensions` must be 1 or 2, got {d}"
            )));
        }
        (Some(d), _) => d as usize,
        (None, Some(g)) => g.a.bases.len(),
        (None, None) => 1,
    };
    if !(1..=2).contains(&dims) {
        return Err(Error::UnsupportedConfig(format!(
            "`dimensions` must be 1 or 2, groups have {dims} axes"
        )));
    }

    let (default_a, default_b) = default_groups(dims);
    let (group_a, group_b) = match groups {
        None => (default_a, default_b),
        Some(g) => {
            let resolve_group = |entry: GroupEntry, name: &str, default_n: usize| -> Result<GroupConfig> {
                let key = format!("groups.{name}");
                if entry.bases.len() != dims {
                    return Err(Error::config(
                        format!("{key}.bases"),
                        format!("expected {dims} base densities, got {}", entry.bases.len()),
                    ));
                }
                for (i, b) in entry.bases.iter().enumerate() {
                    b.validate()
                        .map_err(|e| Error::config(format!("{key}.bases[{i}]"), e.to_string()))?;
                }
                let n = entry.n.unwrap_or(default_n);
                if n == 0 {
                    return Err(Error::config(format!("{key}.n"), "must be at least 1"));
                }
                Ok(GroupConfig::new(entry.bases, n))
            };
            (
                resolve_group(g.a, "a", default_a.n)?,
                resolve_group(g.b, "b", default_b.n)?,
            )
        }
    };

    let d_exponent: f64 = field(map, "d_exponent")?.unwrap_or(DEFAULT_D);
    if !(d_exponent.is_finite() && d_exponent > 0.0) {
        return Err(Error::config(
            "d_exponent",
            format!("must be positive, got {d_exponent}"),
        ));
    }
    let e_exponent: f64 = field(map, "e_exponent")?.unwrap_or(DEFAULT_E);
    if !(e_exponent.is_finite() && e_exponent >= 0.0) {
        return Err(Error::config(
            "e_exponent",
            format!("must be non-negative, got {e_exponent}"),
        ));
    }

    let comparator_names: Vec<String> =
        field(map, "comparators")?.unwrap_or_else(|| vec!["euclidean".into(), "dissimilarity".into()]);
    if comparator_names.is_empty() {
        return Err(Error::config("comparators", "at least one comparator is required"));
    }
    let mut comparators = Vec::new();
    for name in &comparator_names {
        let kind = match name.as_str() {
            "euclidean" => ComparatorKind::Euclidean,
            "dissimilarity" => ComparatorKind::CoincidenceDissimilarity {
                d: d_exponent,
                e: e_exponent,
            },
            other => return Err(Error::config("comparators", format!("unknown comparator `{other}`"))),
        };
        if comparators.contains(&kind) {
            return Err(Error::config("comparators", format!("duplicate comparator `{name}`")));
        }
        comparators.push(kind);
    }

    let total = group_a.n + group_b.n;
    let k_values: Vec<i64> = field(map, "k_values")?.unwrap_or_else(|| (1..=100).collect());
    if k_values.is_empty() {
        return Err(Error::config("k_values", "at least one k is required"));
    }
    if let Some(bad) = k_values.iter().find(|&&k| k < 1 || k as usize > total) {
        return Err(Error::config("k_values", format!("k = {bad} outside 1..={total}")));
    }
    let k_values: Vec<usize> = k_values.into_iter().map(|k| k as usize).collect();

    let realizations: i64 = field(map, "realizations")?.unwrap_or(1000);
    if realizations < 1 {
        return Err(Error::config(
            "realizations",
            format!("must be at least 1, got {realizations}"),
        ));
    }
    let seed: u64 = field(map, "seed")?.unwrap_or(0);

    let experiment = ExperimentConfig {
        transform,
        group_a,
        group_b,
        comparators,
        k_values,
        realizations: realizations as usize,
        master_seed: seed,
    };
    experiment
        .validate()
        .map_err(|e| Error::config("groups", e.to_string()))?;
    reference_point(&experiment).map_err(|e| Error::config("groups", e.to_string()))?;

    let experiment_id: String = field(map, "experiment_id")?.unwrap_or_else(|| default_id(&experiment));
    if experiment_id.is_empty() {
        return Err(Error::config("experiment_id", "must not be empty"));
    }

    let profile: ProfileSettings = field(map, "profile")?.unwrap_or_default();
    if !(profile.from < profile.to && profile.from.is_finite() && profile.to.is_finite()) {
        return Err(Error::config("profile", "needs finite from < to"));
    }
    if profile.points < 3 {
        return Err(Error::config("profile.points", "needs at least 3 points"));
    }
    if !profile.reference.is_finite() {
        return Err(Error::config("profile.reference", "must be finite"));
    }

    let levelsets: LevelSetSettings = field(map, "levelsets")?.unwrap_or_default();
    if levelsets.resolution < 2 {
        return Err(Error::config("levelsets.resolution", "must be at least 2"));
    }
    levelsets
        .rect()
        .map_err(|e| Error::config("levelsets.rect", e.to_string()))?;
    if let Some(bad) = levelsets.ranks(total).iter().find(|&&r| r == 0 || r > total) {
        return Err(Error::config(
            "levelsets.ranks",
            format!("rank {bad} outside 1..={total}"),
        ));
    }

    Ok(RunConfig {
        experiment_id,
        experiment,
        d_exponent,
        e_exponent,
        profile,
        levelsets,
    })
}

fn default_id(exp: &ExperimentConfig) -> String {
    let family = match exp.group_a.bases[0] {
        BaseDensity::Uniform { .. } => "uniform",
        BaseDensity::Normal { .. } => "normal",
    };
    format!("{}-{family}-{}d", exp.transform, exp.dimensions())
}
