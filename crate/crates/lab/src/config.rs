//! TOML experiment configs and their merge with command-line flags.
//!
//! A config file names its command and holds that command's parameters as
//! top-level keys spelled like the long flags:
//!
//! ```toml
//! command = "union-stress"
//! out = "results/union.json"
//! s = 8
//! delta = 0.3
//! seed = 7
//! ```
//!
//! Flags given on the command line override keys from the file.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{LabError, LabResult};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigFile {
    pub command: Option<String>,
    pub out: Option<PathBuf>,
    pub params: toml::Table,
}

pub fn parse_config(text: &str) -> LabResult<ConfigFile> {
    let mut table: toml::Table = text.parse().map_err(|e| LabError::Config(format!("config: {e}")))?;
    let command = match table.remove("command") {
        None => None,
        Some(toml::Value::String(s)) => Some(s),
        Some(_) => return Err(LabError::Config("`command` must be a string".into())),
    };
    let out = match table.remove("out") {
        None => None,
        Some(toml::Value::String(s)) => Some(PathBuf::from(s)),
        Some(_) => return Err(LabError::Config("`out` must be a string".into())),
    };
    Ok(ConfigFile {
        command,
        out,
        params: table,
    })
}

pub fn load_config(path: &Path) -> LabResult<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LabError::Config(format!("cannot read config {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| LabError::Config(format!("{}: {e}", path.display())))
}

/// Overlays the flags set in `cli` on the file parameters and re-reads the
/// result as `T`, so unknown or mistyped keys are rejected.
pub fn merge<T: Serialize + DeserializeOwned>(file: &toml::Table, cli: &T) -> LabResult<T> {
    let mut table = file.clone();
    let given = toml::Table::try_from(cli).map_err(|e| LabError::Config(e.to_string()))?;
    for (k, v) in given {
        table.insert(k, v);
    }
    table.try_into().map_err(|e: toml::de::Error| LabError::Config(e.message().to_string()))
}

/// Value of a parameter that has no default.
pub fn need<T: Clone>(value: &Option<T>, name: &str) -> LabResult<T> {
    value
        .clone()
        .ok_or_else(|| LabError::Config(format!("missing required parameter `{name}`")))
}

/// Checks `0 < x < 1`.
pub fn open_unit(value: f64, name: &str) -> LabResult<f64> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(LabError::Config(format!("`{name}` = {value} must lie in (0, 1)")))
    }
}

/// Checks `lo <= x <= hi` for counts and dimensions.
pub fn in_range(value: usize, lo: usize, hi: usize, name: &str) -> LabResult<usize> {
    if (lo..=hi).contains(&value) {
        Ok(value)
    } else {
        Err(LabError::Config(format!("`{name}` = {value} must lie in [{lo}, {hi}]")))
    }
}
