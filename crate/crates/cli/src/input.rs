//! Loading JSON arguments: file paths, `-` for stdin, or inline JSON.

use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use ctxlab::rational::serde_str;
use ctxlab::{EdgeDistribution, Graph, LinearInequality, Rational, Scenario};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::CliError;

pub struct Loaded {
    pub value: Value,
    /// Directory used to resolve relative paths found inside the document.
    pub base: Option<PathBuf>,
}

pub fn load(arg: &str) -> Result<Loaded, CliError> {
    let trimmed = arg.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let value = serde_json::from_str(arg).map_err(|e| CliError::Input(format!("inline JSON: {e}")))?;
        return Ok(Loaded {
            value: unwrap_envelope(value),
            base: None,
        });
    }
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(arg).map_err(|e| CliError::Io(format!("{arg}: {e}")))?
    };
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
    let value = unwrap_envelope(value);
    let base = (arg != "-").then(|| Path::new(arg).parent().map(Path::to_path_buf).unwrap_or_default());
    Ok(Loaded { value, base })
}

/// Output of this tool can be fed back in: the payload is taken from the envelope.
fn unwrap_envelope(value: Value) -> Value {
    match value {
        Value::Object(mut m) if m.contains_key("schema") && m.contains_key("payload") => m.remove("payload").unwrap(),
        v => v,
    }
}

fn decode<T: DeserializeOwned>(value: Value, what: &str) -> Result<T, CliError> {
    serde_json::from_value(value).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

pub fn graph(arg: &str) -> Result<Graph, CliError> {
    let loaded = load(arg)?;
    // a cone scenario file also names its graph
    let value = match loaded.value.get("cone_of") {
        Some(g) => g.clone(),
        None => loaded.value,
    };
    decode(value, "graph")
}

pub fn scenario(arg: &str) -> Result<Arc<Scenario>, CliError> {
    let loaded = load(arg)?;
    scenario_value(loaded.value, loaded.base.as_deref())
}

fn scenario_value(value: Value, base: Option<&Path>) -> Result<Arc<Scenario>, CliError> {
    match value {
        Value::String(path) => {
            let full = match base {
                Some(b) if Path::new(&path).is_relative() => b.join(&path),
                _ => PathBuf::from(&path),
            };
            scenario(&full.to_string_lossy())
        }
        // a distribution file stands in for its scenario
        Value::Object(ref m) if m.contains_key("values") => match m.get("scenario") {
            Some(s) => scenario_value(s.clone(), base),
            None => Err(CliError::Input("distribution has no scenario".into())),
        },
        // a disk or other wrapper carrying its scenario
        Value::Object(ref m) if m.contains_key("scenario") && !m.contains_key("triangles") && !m.contains_key("cone_of") => {
            scenario_value(m["scenario"].clone(), base)
        }
        // a bare graph is read as the measurement space of its cone
        Value::Object(ref m) if m.contains_key("vertices") => {
            let g: Graph = decode(value, "graph")?;
            Ok(Arc::new(ctxlab::scenario::cone(&g)))
        }
        other => Ok(Arc::new(decode(other, "scenario")?)),
    }
}

pub fn values(value: &Value) -> Result<BTreeMap<String, Rational>, CliError> {
    let Some(map) = value.as_object() else {
        return Err(CliError::Input("`values` must be an object".into()));
    };
    map.iter()
        .map(|(k, v)| {
            serde_str::from_json(v)
                .map(|r| (k.clone(), r))
                .map_err(|e| CliError::Input(format!("value of `{k}`: {e}")))
        })
        .collect()
}

/// A distribution file; `scenario` overrides or supplies the scenario it names.
pub fn distribution(arg: &str, scenario: Option<Arc<Scenario>>) -> Result<EdgeDistribution, CliError> {
    let loaded = load(arg)?;
    let s = match (scenario, loaded.value.get("scenario")) {
        (Some(s), _) => s,
        (None, Some(v)) => scenario_value(v.clone(), loaded.base.as_deref())?,
        (None, None) => return Err(CliError::Input(format!("{arg}: no scenario given"))),
    };
    let raw = loaded
        .value
        .get("values")
        .ok_or_else(|| CliError::Input(format!("{arg}: missing `values`")))?;
    Ok(EdgeDistribution::from_map(s, &values(raw)?)?)
}

/// One inequality or a list of them.
pub fn inequalities(arg: &str) -> Result<Vec<LinearInequality>, CliError> {
    let loaded = load(arg)?;
    match loaded.value {
        Value::Array(items) => items.into_iter().map(|v| decode(v, "inequality")).collect(),
        Value::Object(ref m) if m.contains_key("rows") => {
            decode(m["rows"].clone(), "inequality list")
        }
        v => Ok(vec![decode(v, "inequality")?]),
    }
}

pub fn system(arg: &str) -> Result<ctxlab::fm::InequalitySystem, CliError> {
    decode(load(arg)?.value, "inequality system")
}

pub fn list(arg: &str) -> Vec<String> {
    arg.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}
