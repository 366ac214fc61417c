//! Flat `key = value` parameters: config file first, command-line flags on top.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use ymscalar::{Error, Result};

fn config_err(key: &str, message: impl Into<String>) -> Error {
    Error::Config {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Keys are stored in `snake_case`; `-` in file keys is accepted as `_`.
#[derive(Debug, Default, Clone)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    /// Parses a config file: one `key = value` per line, `#` starts a comment.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| config_err("config", format!("line {}: expected `key = value`", n + 1)))?;
            let key = k.trim().replace('-', "_");
            if key.is_empty() {
                return Err(config_err("config", format!("line {}: empty key", n + 1)));
            }
            if values.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(config_err(&key, format!("line {}: key given twice", n + 1)));
            }
        }
        Ok(Params { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_err("config", format!("cannot read `{}`: {e}", path.display())))?;
        Params::parse_file(&text)
    }

    /// Flags win over file entries.
    pub fn overlay(&mut self, flags: Vec<(&'static str, Option<String>)>) {
        for (k, v) in flags {
            if let Some(v) = v {
                self.values.insert(k.to_string(), v);
            }
        }
    }

    /// Rejects keys the command does not understand.
    pub fn restrict(&self, allowed: &[&str]) -> Result<()> {
        match self.values.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(config_err(k, format!("not a parameter of this command (expected one of {})", allowed.join(", ")))),
            None => Ok(()),
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn opt<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|s| s.parse::<T>().map_err(|e| config_err(key, format!("cannot parse `{s}`: {e}"))))
            .transpose()
    }

    pub fn get<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.opt(key)?.unwrap_or(default))
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.opt(key)?.ok_or_else(|| config_err(key, "missing required parameter"))
    }

    /// Comma-separated list of finite floats.
    pub fn list(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.raw(key)
            .map(|s| {
                s.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .ok()
                            .filter(|v| v.is_finite())
                            .ok_or_else(|| config_err(key, format!("`{}` is not a finite number", t.trim())))
                    })
                    .collect()
            })
            .transpose()
    }
}
