//! Reading and validating input files.

use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde_json::Value;
use tfg_core::fullgroup::ElementJson;
use tfg_core::towers::BratteliDiagram;
use tfg_core::{Element, Space, SpaceSpec, ThompsonTable};

use crate::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io { path: path.to_path_buf(), source: e })
}

fn parse<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn lib(path: &Path) -> impl FnOnce(tfg_core::Error) -> CliError + '_ {
    move |source| CliError::Library { path: Some(path.to_path_buf()), source }
}

pub fn space(path: &Path) -> Result<Space, CliError> {
    let spec: SpaceSpec = parse(path)?;
    Space::new(spec).map_err(lib(path))
}

/// An element file is either `{"shift": k}` or a list of atoms, with the
/// `space` field optional.
pub fn element(space: &Space, path: &Path) -> Result<Element, CliError> {
    let mut value: Value = parse(path)?;
    if let Some(k) = value.get("shift").and_then(Value::as_i64) {
        return Ok(Element::shift(space, k));
    }
    if let Value::Object(map) = &mut value {
        map.entry("space").or_insert_with(|| Value::String(space.id().to_string()));
    }
    let j: ElementJson = serde_json::from_value(value).map_err(|e| CliError::Parse {
        path: path.to_path_buf(),
        line: 0,
        column: 0,
        message: e.to_string(),
    })?;
    Element::from_json(space, &j).map_err(lib(path))
}

pub fn elements(space: &Space, paths: &[PathBuf]) -> Result<Vec<Element>, CliError> {
    paths.iter().map(|p| element(space, p)).collect()
}

pub fn table(path: &Path) -> Result<ThompsonTable, CliError> {
    let value: Value = parse(path)?;
    ThompsonTable::from_json(&value).map_err(lib(path))
}

pub fn diagram(path: &Path) -> Result<BratteliDiagram, CliError> {
    let d: BratteliDiagram = parse(path)?;
    d.validated().map_err(lib(path))
}
