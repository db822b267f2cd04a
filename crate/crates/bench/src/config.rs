use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::PathBuf;
use std::str::FromStr;

use randproj::Seed;

use crate::error::{BenchError, Result};

pub const DEFAULT_SEED: u64 = 42;

/// String key/value settings for one experiment run.
///
/// Values are parsed lazily by the typed getters; lists are comma separated.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Config {
    values: BTreeMap<String, String>,
}

impl Config {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.values.insert(key.into(), value.to_string());
        self
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.set(key, value);
        self
    }

    /// Parses `key=value`.
    pub fn set_pair(&mut self, pair: &str) -> Result<()> {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| BenchError::Usage(format!("expected key=value, got '{pair}'")))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(BenchError::Usage(format!("empty key in '{pair}'")));
        }
        self.set(k, v.trim());
        Ok(())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    /// Fails with every key not in `allowed`.
    pub fn check_keys(&self, experiment: &str, allowed: &[&str]) -> Result<()> {
        let unknown: Vec<&str> = self
            .values
            .keys()
            .map(String::as_str)
            .filter(|k| !allowed.contains(k))
            .collect();
        if unknown.is_empty() {
            return Ok(());
        }
        Err(BenchError::Usage(format!(
            "invalid config keys for '{experiment}': {} (accepted: {})",
            unknown.join(", "),
            allowed.join(", ")
        )))
    }

    pub fn get<T>(&self, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.raw(key) {
            None => Ok(default),
            Some(s) => parse_value(key, s),
        }
    }

    pub fn get_opt<T>(&self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.raw(key).map(|s| parse_value(key, s)).transpose()
    }

    pub fn get_list<T>(&self, key: &str, default: &[T]) -> Result<Vec<T>>
    where
        T: FromStr + Clone,
        T::Err: Display,
    {
        match self.raw(key) {
            None => Ok(default.to_vec()),
            Some(s) => {
                let items: Vec<T> = s
                    .split(',')
                    .map(str::trim)
                    .filter(|p| !p.is_empty())
                    .map(|p| parse_value(key, p))
                    .collect::<Result<_>>()?;
                if items.is_empty() {
                    return Err(BenchError::Usage(format!("'{key}' is an empty list")));
                }
                Ok(items)
            }
        }
    }

    pub fn seed(&self) -> Result<Seed> {
        Ok(Seed(self.get("seed", DEFAULT_SEED)?))
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.raw(key).map(PathBuf::from)
    }

    /// A pair `lo,hi`.
    pub fn get_range(&self, key: &str) -> Result<Option<(f64, f64)>> {
        let Some(raw) = self.raw(key) else {
            return Ok(None);
        };
        let parts: Vec<f64> = raw
            .split(',')
            .map(|p| parse_value(key, p.trim()))
            .collect::<Result<_>>()?;
        match parts[..] {
            [lo, hi] => Ok(Some((lo, hi))),
            _ => Err(BenchError::Usage(format!("'{key}' needs two values LO,HI, got '{raw}'"))),
        }
    }
}

fn parse_value<T>(key: &str, raw: &str) -> Result<T>
where
    T: FromStr,
    T::Err: Display,
{
    raw.parse()
        .map_err(|e| BenchError::Usage(format!("invalid value '{raw}' for '{key}': {e}")))
}
