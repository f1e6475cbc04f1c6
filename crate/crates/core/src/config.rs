//! JSON problem descriptions. Rationals are written as integers or `"p/q"`
//! strings; unknown fields are rejected everywhere.

use serde::{Deserialize, Serialize};

use crate::desing::CenterSpec;
use crate::error::{Error, Result};
use crate::grouprep::{GroupCatalog, GroupDesc};
use crate::hkkn::{HAction, StratificationProblem};
use crate::weightlat::{ChamberDesc, WeightSystem, DEFAULT_INDEX_STRATEGY};

pub const GENUS4: &str = include_str!("../configs/genus4.json");
pub const BINARY_CUBICS: &str = include_str!("../configs/binary_cubics.json");
pub const EMPTY_SEMISTABLE: &str = include_str!("../configs/empty_semistable.json");

pub const GOLDEN_GENUS4: &str = "genus4";

/// The shipped configurations by name.
pub fn builtin(name: &str) -> Result<&'static str> {
    match name {
        "genus4" => Ok(GENUS4),
        "binary_cubics" => Ok(BINARY_CUBICS),
        "empty_semistable" => Ok(EMPTY_SEMISTABLE),
        _ => Err(Error::Config(format!(
            "no built-in configuration {name:?}; have genus4, binary_cubics, empty_semistable"
        ))),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Markdown,
}

/// Inclusive even-degree ranges where intersection and ordinary Betti
/// numbers are known to agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrdinaryRanges {
    /// Degrees where `H^i` of the GIT quotient equals `IH^i`.
    pub quotient: [u32; 2],
    /// Degrees where `H^i` of the stable part equals `IH^i`.
    pub stable: [u32; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub name: String,
    pub weight_system: WeightSystem,
    #[serde(default)]
    pub chamber: ChamberDesc,
    pub group: String,
    #[serde(default, skip_serializing_if = "is_trivial")]
    pub h_action: HAction,
    /// Extra or replacement catalog entries.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub groups: Vec<GroupDesc>,
    #[serde(default = "default_index_strategy")]
    pub index_strategy: String,
    /// Centers in blow-up order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub centers: Vec<CenterSpec>,
    #[serde(default = "default_truncate")]
    pub truncate: usize,
    #[serde(default)]
    pub format: OutputFormat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordinary_ranges: Option<OrdinaryRanges>,
    /// Built-in sheet of known values to compare against in check mode.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golden: Option<String>,
}

fn is_trivial(h: &HAction) -> bool {
    *h == HAction::Trivial
}

fn default_index_strategy() -> String {
    DEFAULT_INDEX_STRATEGY.to_string()
}

fn default_truncate() -> usize {
    19
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let c: Config = serde_json::from_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn builtin(name: &str) -> Result<Self> {
        Self::parse(builtin(name)?)
    }

    /// Canonical serialization; parsing it back gives an equal config.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialization cannot fail")
    }

    pub fn validate(&self) -> Result<()> {
        self.weight_system.validate()?;
        let cat = self.catalog()?;
        cat.get(&self.group)?;
        if self.truncate == 0 {
            return Err(Error::Config("truncate must be positive".into()));
        }
        for c in &self.centers {
            for g in [&c.group, &c.normaliser, &c.fiber.group] {
                cat.get(g)?;
            }
            if self.centers.iter().filter(|d| d.name == c.name).count() > 1 {
                return Err(Error::Config(format!("center {} is listed twice", c.name)));
            }
        }
        if let Some(g) = &self.golden {
            if g != GOLDEN_GENUS4 {
                return Err(Error::Config(format!("unknown golden sheet {g:?}; have {GOLDEN_GENUS4}")));
            }
        }
        if let Some(r) = &self.ordinary_ranges {
            for [lo, hi] in [r.quotient, r.stable] {
                if lo > hi {
                    return Err(Error::Config(format!("empty degree range {lo}..{hi}")));
                }
            }
        }
        Ok(())
    }

    pub fn catalog(&self) -> Result<GroupCatalog> {
        GroupCatalog::builtin().with_overrides(&self.groups)
    }

    pub fn problem(&self, catalog: &GroupCatalog) -> Result<StratificationProblem> {
        let mut p = StratificationProblem::new(
            self.weight_system.clone(),
            catalog.get(&self.group)?.clone(),
            self.chamber.clone(),
        );
        p.h_action = self.h_action.clone();
        Ok(p)
    }
}
