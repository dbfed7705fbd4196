//! Flat key=value configuration files. Flags always override file values;
//! unknown keys are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use crate::CliError;

pub struct ConfigMap {
    values: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn empty() -> Self {
        ConfigMap {
            values: BTreeMap::new(),
        }
    }

    /// Parse a config file: one `key=value` per line, `#` comments and blank
    /// lines allowed. Keys use the long flag spelling without the dashes.
    pub fn load(path: &Path, allowed: &[&str]) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(CliError::Io)?;
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Parse(format!(
                    "{}:{}: expected key=value, got {line:?}",
                    path.display(),
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if !allowed.contains(&key.as_str()) {
                return Err(CliError::Parse(format!(
                    "{}:{}: unknown configuration key {key:?} (allowed: {})",
                    path.display(),
                    lineno + 1,
                    allowed.join(", ")
                )));
            }
            if values
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(CliError::Parse(format!(
                    "{}:{}: duplicate key {key:?}",
                    path.display(),
                    lineno + 1
                )));
            }
        }
        Ok(ConfigMap { values })
    }

    /// Fill `slot` from the config value for `key` when the flag was absent.
    pub fn fill<T: std::str::FromStr>(
        &self,
        key: &str,
        slot: &mut Option<T>,
    ) -> Result<(), CliError>
    where
        T::Err: std::fmt::Display,
    {
        if slot.is_none() {
            if let Some(raw) = self.values.get(key) {
                let parsed = raw.parse::<T>().map_err(|e| {
                    CliError::Parse(format!("config key {key:?}: cannot parse {raw:?}: {e}"))
                })?;
                *slot = Some(parsed);
            }
        }
        Ok(())
    }
}
