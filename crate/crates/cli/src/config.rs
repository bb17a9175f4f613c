//! Layered run configuration: defaults, then the JSON file, then flags.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::CliError;

const TOP_LEVEL_KEYS: [&str; 4] = ["subcommand", "out", "seed", "params"];

/// Contents of a `--config` document.
#[derive(Debug, Default)]
pub struct RunFile {
    pub subcommand: Option<String>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub params: Map<String, Value>,
}

impl RunFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config { key: None, message: format!("{}: {e}", path.display()) })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let doc: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Config { key: None, message: format!("config is not valid JSON: {e}") })?;
        let Value::Object(mut top) = doc else {
            return Err(CliError::Config { key: None, message: "config must be a JSON object".into() });
        };
        if let Some(k) = top.keys().find(|k| !TOP_LEVEL_KEYS.contains(&k.as_str())) {
            return Err(CliError::config(k, format!("unknown key `{k}`, expected one of {TOP_LEVEL_KEYS:?}")));
        }
        let subcommand = match top.remove("subcommand") {
            None => None,
            Some(Value::String(s)) => Some(s),
            Some(_) => return Err(CliError::config("subcommand", "must be a string")),
        };
        let out = match top.remove("out") {
            None => None,
            Some(Value::String(s)) => Some(PathBuf::from(s)),
            Some(_) => return Err(CliError::config("out", "must be a string")),
        };
        let seed = match top.remove("seed") {
            None => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| CliError::config("seed", "must be a non-negative integer"))?),
        };
        let params = match top.remove("params") {
            None => Map::new(),
            Some(Value::Object(m)) => m,
            Some(_) => return Err(CliError::config("params", "must be a JSON object")),
        };
        Ok(Self { subcommand, out, seed, params })
    }
}

/// Overlay `file` and then `overrides` onto the defaults of `P`.
///
/// Keys absent from the serialized defaults are rejected by name, and type
/// errors report the offending path.
pub fn resolve<P, O>(file: &Map<String, Value>, overrides: &O) -> Result<P, CliError>
where
    P: Serialize + DeserializeOwned + Default,
    O: Serialize,
{
    let Value::Object(mut merged) = serde_json::to_value(P::default()).expect("defaults serialize") else {
        unreachable!("parameter blocks are structs")
    };
    for (k, v) in file {
        if !merged.contains_key(k) {
            let mut known: Vec<&String> = merged.keys().collect();
            known.sort();
            return Err(CliError::config(k, format!("unknown parameter `{k}`, expected one of {known:?}")));
        }
        merged.insert(k.clone(), v.clone());
    }
    if let Value::Object(o) = serde_json::to_value(overrides).expect("overrides serialize") {
        merged.extend(o);
    }
    serde_path_to_error::deserialize(Value::Object(merged)).map_err(|e| {
        let key = e.path().to_string();
        CliError::config(key.clone(), format!("`{key}`: {}", e.inner()))
    })
}

#[cfg(test)]
mod tests {
    use serde::Deserialize;
    use serde_json::json;

    use super::*;

    #[derive(Debug, Serialize, Deserialize, PartialEq)]
    #[serde(deny_unknown_fields, default)]
    struct P {
        alpha: f64,
        n: usize,
    }

    impl Default for P {
        fn default() -> Self {
            Self { alpha: 0.5, n: 8 }
        }
    }

    #[derive(Serialize)]
    struct O {
        #[serde(skip_serializing_if = "Option::is_none")]
        n: Option<usize>,
    }

    fn map(v: Value) -> Map<String, Value> {
        v.as_object().unwrap().clone()
    }

    #[test]
    fn layers_apply_in_order() {
        let p: P = resolve(&map(json!({"alpha": 0.25, "n": 4})), &O { n: Some(16) }).unwrap();
        assert_eq!(p, P { alpha: 0.25, n: 16 });
        let p: P = resolve(&Map::new(), &O { n: None }).unwrap();
        assert_eq!(p, P::default());
    }

    #[test]
    fn unknown_and_mistyped_keys_are_named() {
        let e = resolve::<P, _>(&map(json!({"gama": 1})), &O { n: None }).unwrap_err();
        assert!(matches!(e, CliError::Config { key: Some(ref k), .. } if k == "gama"));
        let e = resolve::<P, _>(&map(json!({"n": "many"})), &O { n: None }).unwrap_err();
        assert!(matches!(e, CliError::Config { key: Some(ref k), .. } if k == "n"));
        let e = RunFile::parse(r#"{"sead": 3}"#).unwrap_err();
        assert!(matches!(e, CliError::Config { key: Some(ref k), .. } if k == "sead"));
    }
}
