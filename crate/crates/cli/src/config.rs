//! Flat `key = value` configuration files.
//!
//! Keys are the long flag names without dashes in front (`ea-ev`,
//! `theta-deg`, ...). Blank lines and lines starting with `#` are ignored.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};

pub const KEYS: [&str; 7] = [
    "ea-ev",
    "a-angstrom",
    "mu-e-angstrom",
    "theta-deg",
    "neighbor-cutoff",
    "mode",
    "format",
];

#[derive(Debug, Default, Clone, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config file {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("line {}: expected key=value, got `{line}`", n + 1);
            };
            let key = key.trim();
            if !KEYS.contains(&key) {
                bail!("line {}: unknown key `{key}`", n + 1);
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    /// Parses `key` if present.
    pub fn get<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| anyhow::anyhow!("config key `{key}`: {e}"))
            })
            .transpose()
    }

    pub fn get_finite(&self, key: &str) -> Result<Option<f64>> {
        match self.get::<f64>(key)? {
            Some(v) if !v.is_finite() => bail!("config key `{key}`: {v} is not finite"),
            other => Ok(other),
        }
    }
}
