//! `key = value` configuration files and the `eN` shorthand for B.

use crate::error::{CliError, CliResult};
use std::collections::BTreeMap;
use std::path::Path;

/// Parses `B`; `eN` means `e^N`.
pub fn parse_b(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.strip_prefix(['e', 'E']) {
        Some(x) => x.parse::<f64>().map_err(|e| format!("bad exponent in {s:?}: {e}"))?.exp(),
        None => s.parse::<f64>().map_err(|e| format!("bad number {s:?}: {e}"))?,
    };
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("B must be finite and positive, got {s:?}"))
    }
}

/// Comma-separated list of `B` values.
pub fn parse_b_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',').filter(|p| !p.trim().is_empty()).map(parse_b).collect()
}

pub fn parse_num<T: std::str::FromStr>(s: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    s.trim().parse::<T>().map_err(|e| format!("{s:?}: {e}"))
}

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut entries = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", i + 1)))?;
            entries.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Flag value if given, else the config entry, else `None`.
    pub fn pick<T>(&self, flag: Option<T>, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> CliResult<Option<T>> {
        match (flag, self.get(key)) {
            (Some(v), _) => Ok(Some(v)),
            (None, Some(s)) => parse(s).map(Some).map_err(|e| CliError::Config(format!("{key}: {e}"))),
            (None, None) => Ok(None),
        }
    }

    pub fn require<T>(&self, flag: Option<T>, key: &str, parse: impl Fn(&str) -> Result<T, String>) -> CliResult<T> {
        self.pick(flag, key, parse)?.ok_or_else(|| CliError::Config(format!("missing required value `{key}`")))
    }
}
