use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fingroup::{preset_library, CrossedModule, XmodJson};
use crate::gerbe::classify::tuple_key;
use crate::gerbe::cocycle::{CechLayout, GerbeCocycle};
use crate::simplicial::{CoverComplex, CoverJson};

/// A cover given by preset name or inline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoverRef {
    Preset(String),
    Inline(CoverJson),
}

impl CoverRef {
    pub fn resolve(&self) -> Result<CoverComplex> {
        match self {
            CoverRef::Preset(expr) => CoverComplex::preset(expr),
            CoverRef::Inline(json) => Ok(CoverComplex::from_json(json)?.0),
        }
    }
}

/// A crossed module given by preset expression or inline tables.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum XmodRef {
    Preset(String),
    Inline(Box<XmodJson>),
}

impl XmodRef {
    pub fn resolve(&self) -> Result<CrossedModule> {
        match self {
            XmodRef::Preset(expr) => preset_library(expr)?.into_xmod(),
            XmodRef::Inline(json) => CrossedModule::from_json(json),
        }
    }
}

/// A cocycle file: values keyed by comma-separated increasing chart tuples.
/// Missing keys default to the identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleJson {
    pub cover: CoverRef,
    pub xmod: XmodRef,
    #[serde(default)]
    pub d: BTreeMap<String, usize>,
    #[serde(default)]
    pub h: BTreeMap<String, usize>,
}

impl CocycleJson {
    pub fn from_cocycle(c: &GerbeCocycle, cover: CoverRef, xmod: XmodRef) -> Self {
        let values = c.values();
        Self {
            cover,
            xmod,
            d: values.d,
            h: values.h,
        }
    }

    /// Builds the cocycle without validating the cocycle conditions.
    pub fn to_cocycle(&self) -> Result<GerbeCocycle> {
        let layout = Arc::new(CechLayout::new(self.cover.resolve()?));
        let xm = Arc::new(self.xmod.resolve()?);
        let read = |map: &BTreeMap<String, usize>, keys: Vec<String>, identity: usize| -> Result<Vec<usize>> {
            if let Some(extra) = map.keys().find(|k| !keys.contains(&normalize(k))) {
                return Err(Error::BadParameter(format!("`{extra}` is not an increasing overlap of the cover")));
            }
            let normalized: BTreeMap<String, usize> = map.iter().map(|(k, &v)| (normalize(k), v)).collect();
            Ok(keys.iter().map(|k| normalized.get(k).copied().unwrap_or(identity)).collect())
        };
        let d = read(
            &self.d,
            layout.pairs().iter().map(|p| tuple_key(p)).collect(),
            xm.d().identity(),
        )?;
        let h = read(
            &self.h,
            layout.triples().iter().map(|t| tuple_key(t)).collect(),
            xm.h().identity(),
        )?;
        GerbeCocycle::new(layout, xm, d, h)
    }
}

fn normalize(key: &str) -> String {
    key.split(',').map(str::trim).collect::<Vec<_>>().join(",")
}
