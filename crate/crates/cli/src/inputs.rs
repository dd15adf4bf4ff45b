//! Resolution of command-line inputs: each one is either a preset
//! expression or a path to a JSON file.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use gerbe_core::fingroup::{preset_library, CrossedModule, FiniteGroup, GroupJson, XmodJson};
use gerbe_core::simplicial::{circle, minimal_sphere, point, standard_simplex, CoverComplex, CoverJson, SimplicialSet, SsetJson};
use gerbe_core::Error;
use serde::de::DeserializeOwned;

pub const COVER_PRESETS: &[&str] = &["single", "circle(k)", "sphere2", "sphere3", "boundary(k)", "simplex(k)"];
pub const BASE_PRESETS: &[&str] = &["point", "circle", "sphere(k)", "simplex(k)"];

/// Reads and parses a JSON file; parse errors keep serde's line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value = serde_json::from_str(&text)
        .map_err(Error::from)
        .with_context(|| format!("parsing {}", path.display()))?;
    Ok(value)
}

fn is_file(arg: &str) -> bool {
    arg.ends_with(".json") || Path::new(arg).is_file()
}

/// Raw crossed-module tables, before any axiom is checked.
pub fn xmod_tables(arg: &str) -> Result<XmodJson> {
    if is_file(arg) {
        read_json(Path::new(arg))
    } else {
        Ok(preset_library(arg)?.into_xmod()?.to_json())
    }
}

pub fn xmod(arg: &str) -> Result<CrossedModule> {
    if is_file(arg) {
        let json: XmodJson = read_json(Path::new(arg))?;
        Ok(CrossedModule::from_json(&json).with_context(|| format!("building crossed module from {arg}"))?)
    } else {
        Ok(preset_library(arg)?.into_xmod()?)
    }
}

pub fn group(arg: &str) -> Result<FiniteGroup> {
    if is_file(arg) {
        let json: GroupJson = read_json(Path::new(arg))?;
        Ok(FiniteGroup::from_json(&json).with_context(|| format!("building group from {arg}"))?)
    } else {
        Ok(preset_library(arg)?.into_group()?)
    }
}

pub fn cover(arg: &str) -> Result<CoverComplex> {
    if is_file(arg) {
        let json: CoverJson = read_json(Path::new(arg))?;
        Ok(CoverComplex::from_json(&json)?.0)
    } else {
        Ok(CoverComplex::preset(arg)?)
    }
}

fn parse_arg(expr: &str, name: &str) -> Option<Result<usize>> {
    let inner = expr.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
    Some(
        inner
            .trim()
            .parse()
            .with_context(|| format!("`{inner}` is not a dimension")),
    )
}

/// A base simplicial set truncated at `truncation`.
pub fn base(arg: &str, truncation: usize) -> Result<SimplicialSet> {
    if is_file(arg) {
        let json: SsetJson = read_json(Path::new(arg))?;
        let x = SimplicialSet::from_json(&json)?;
        if x.truncation() < truncation {
            return Err(Error::BadParameter(format!(
                "{arg} is truncated at {}, below the requested {truncation}",
                x.truncation()
            ))
            .into());
        }
        return Ok(x.truncate(truncation)?);
    }
    let expr: String = arg.chars().filter(|c| !c.is_whitespace()).collect();
    let x = match expr.as_str() {
        "point" => point(truncation),
        "circle" => circle(truncation),
        _ => {
            if let Some(k) = parse_arg(&expr, "sphere") {
                let k = k?;
                if !(1..=4).contains(&k) {
                    bail!(Error::BadParameter(format!("sphere dimension {k} is outside 1..=4")));
                }
                minimal_sphere(k, truncation)
            } else if let Some(k) = parse_arg(&expr, "simplex") {
                let k = k?;
                if k > 4 {
                    bail!(Error::BadParameter(format!("simplex dimension {k} is above 4")));
                }
                standard_simplex(k, truncation)
            } else {
                bail!(Error::UnknownPreset(format!("base `{arg}`")));
            }
        }
    };
    Ok(x)
}
