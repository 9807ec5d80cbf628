//! Plain-text key-value configuration with flag overrides.
//!
//! Schema: one `key = value` per line, `#` starts a comment. Values use the
//! same syntax as the corresponding CLI flags (`law = uniform(0,0,4)`,
//! `r_grid = 0.5,2,8`, `z = 2,0`). Flags override file values; defaults fill
//! the rest. Every run writes the fully resolved configuration back out as
//! `config.resolved`, which parses to a semantically identical config.

use std::collections::BTreeMap;
use std::path::Path;

use crate::{CliError, Result};

/// Parsed key-value configuration, keys sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    entries: BTreeMap<String, String>,
}

impl Config {
    pub fn parse(text: &str, path: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| CliError::ConfigLine {
                path: path.into(),
                line: idx + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return Err(CliError::ConfigLine {
                    path: path.into(),
                    line: idx + 1,
                    message: "empty key".into(),
                });
            }
            if entries.insert(key.clone(), value).is_some() {
                return Err(CliError::ConfigLine {
                    path: path.into(),
                    line: idx + 1,
                    message: format!("duplicate key `{key}`"),
                });
            }
        }
        Ok(Config { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.into(), value.into());
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }

    /// Serialize as sorted `key = value` lines (LF endings).
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.entries {
            out.push_str(key);
            out.push_str(" = ");
            out.push_str(value);
            out.push('\n');
        }
        out
    }
}

/// One typed knob lookup: flag value wins, then the config file, then the
/// default. The resolved value is echoed back into `resolved`.
pub struct Resolver<'a> {
    file: &'a Config,
    pub resolved: Config,
}

impl<'a> Resolver<'a> {
    pub fn new(file: &'a Config) -> Self {
        Resolver {
            file,
            resolved: Config::default(),
        }
    }

    pub fn string(&mut self, key: &str, flag: Option<&str>, default: &str) -> String {
        let value = flag
            .map(str::to_string)
            .or_else(|| self.file.get(key).map(str::to_string))
            .unwrap_or_else(|| default.to_string());
        self.resolved.set(key, value.clone());
        value
    }

    pub fn parsed<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: std::str::FromStr + std::fmt::Display,
        T::Err: std::fmt::Display,
    {
        let value = match flag {
            Some(v) => v,
            None => match self.file.get(key) {
                Some(text) => text
                    .parse::<T>()
                    .map_err(|e| CliError::field(key, format!("cannot parse `{text}`: {e}")))?,
                None => default,
            },
        };
        self.resolved.set(key, value.to_string());
        Ok(value)
    }

    pub fn float_list(&mut self, key: &str, flag: Option<&[f64]>, default: &[f64]) -> Result<Vec<f64>> {
        let values = match flag {
            Some(v) => v.to_vec(),
            None => match self.file.get(key) {
                Some(text) => parse_float_list(text)
                    .map_err(|e| CliError::field(key, e))?,
                None => default.to_vec(),
            },
        };
        self.resolved.set(key, join_floats(&values));
        Ok(values)
    }

    pub fn complex(
        &mut self,
        key: &str,
        flag: Option<(f64, f64)>,
        default: (f64, f64),
    ) -> Result<(f64, f64)> {
        let value = match flag {
            Some(v) => v,
            None => match self.file.get(key) {
                Some(text) => parse_complex_pair(text).map_err(|e| CliError::field(key, e))?,
                None => default,
            },
        };
        self.resolved.set(key, format!("{},{}", value.0, value.1));
        Ok(value)
    }

    /// Reject config keys that neither this command nor the global layer
    /// understands, and hand back the resolved configuration.
    pub fn finish(&mut self, known_extra: &[&str]) -> Result<Config> {
        for key in self.file.entries().keys() {
            if !self.resolved.entries().contains_key(key)
                && !known_extra.contains(&key.as_str())
            {
                return Err(CliError::field(key, "unknown configuration key"));
            }
        }
        Ok(std::mem::take(&mut self.resolved))
    }
}

/// `re,im` pair.
pub fn parse_complex_pair(text: &str) -> std::result::Result<(f64, f64), String> {
    let mut parts = text.split(',').map(str::trim);
    let mut next = |name: &str| -> std::result::Result<f64, String> {
        parts
            .next()
            .ok_or_else(|| format!("missing {name} component in `{text}`"))?
            .parse::<f64>()
            .map_err(|e| format!("bad {name} component in `{text}`: {e}"))
    };
    let re = next("real")?;
    let im = next("imaginary")?;
    if parts.next().is_some() {
        return Err(format!("expected `re,im`, got `{text}`"));
    }
    Ok((re, im))
}

/// Comma-separated float list.
pub fn parse_float_list(text: &str) -> std::result::Result<Vec<f64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<f64>().map_err(|e| format!("bad number `{p}`: {e}")))
        .collect()
}

pub fn join_floats(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}
