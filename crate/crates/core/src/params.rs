//! Component specifications: a component name plus a free-form parameter bag.
//!
//! Specs serialize as flat JSON objects, e.g. `{"name": "sbx", "eta": 20, "prob": 1}`.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub name: String,
    #[serde(flatten)]
    pub params: Map<String, Value>,
}

impl ComponentSpec {
    pub fn new(name: impl Into<String>) -> Self {
        ComponentSpec {
            name: name.into(),
            params: Map::new(),
        }
    }

    /// Builder-style parameter setter.
    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Typed view over the parameters; `context` prefixes keys in error messages.
    pub fn params<'a>(&'a self, context: &str) -> Params<'a> {
        Params {
            context: format!("{context}.{}", self.name),
            map: &self.params,
        }
    }
}

/// Read-only accessor over a parameter map that reports the full key path on error.
pub struct Params<'a> {
    context: String,
    map: &'a Map<String, Value>,
}

impl<'a> Params<'a> {
    pub fn new(context: impl Into<String>, map: &'a Map<String, Value>) -> Self {
        Params {
            context: context.into(),
            map,
        }
    }

    pub fn key(&self, key: &str) -> String {
        format!("{}.{}", self.context, key)
    }

    pub fn contains(&self, key: &str) -> bool {
        self.map.get(key).is_some_and(|v| !v.is_null())
    }

    /// Rejects any key not in `allowed`.
    pub fn allow_only(&self, allowed: &[&str]) -> Result<()> {
        for k in self.map.keys() {
            if !allowed.contains(&k.as_str()) {
                return Err(Error::param(
                    self.key(k),
                    format!("unrecognized parameter (accepted: {})", allowed.join(", ")),
                ));
            }
        }
        Ok(())
    }

    pub fn opt_f64(&self, key: &str) -> Result<Option<f64>> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => v
                .as_f64()
                .filter(|x| x.is_finite())
                .map(Some)
                .ok_or_else(|| Error::param(self.key(key), format!("expected a number, got {v}"))),
        }
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.opt_f64(key)?.unwrap_or(default))
    }

    pub fn req_f64(&self, key: &str) -> Result<f64> {
        self.opt_f64(key)?
            .ok_or_else(|| Error::param(self.key(key), "required parameter is missing"))
    }

    pub fn opt_usize(&self, key: &str) -> Result<Option<usize>> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => v.as_u64().map(|x| Some(x as usize)).ok_or_else(|| {
                Error::param(
                    self.key(key),
                    format!("expected a non-negative integer, got {v}"),
                )
            }),
        }
    }

    pub fn req_usize(&self, key: &str) -> Result<usize> {
        self.opt_usize(key)?
            .ok_or_else(|| Error::param(self.key(key), "required parameter is missing"))
    }

    pub fn opt_str(&self, key: &str) -> Result<Option<&'a str>> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.as_str())),
            Some(v) => Err(Error::param(
                self.key(key),
                format!("expected a string, got {v}"),
            )),
        }
    }

    pub fn opt_f64_vec(&self, key: &str) -> Result<Option<Vec<f64>>> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| {
                        Error::param(self.key(key), format!("expected numbers, got {v}"))
                    })
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(v) => Err(Error::param(
                self.key(key),
                format!("expected an array, got {v}"),
            )),
        }
    }

    pub fn opt_usize_vec(&self, key: &str) -> Result<Option<Vec<usize>>> {
        match self.map.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(Value::Array(items)) => items
                .iter()
                .map(|v| {
                    v.as_u64().map(|x| x as usize).ok_or_else(|| {
                        Error::param(self.key(key), format!("expected integers, got {v}"))
                    })
                })
                .collect::<Result<Vec<_>>>()
                .map(Some),
            Some(v) => Err(Error::param(
                self.key(key),
                format!("expected an array, got {v}"),
            )),
        }
    }

    /// Checks `lo <= value <= hi`.
    pub fn in_range(&self, key: &str, value: f64, lo: f64, hi: f64) -> Result<f64> {
        if value < lo || value > hi {
            return Err(Error::param(
                self.key(key),
                format!("{value} is outside [{lo}, {hi}]"),
            ));
        }
        Ok(value)
    }

    pub fn positive(&self, key: &str, value: f64) -> Result<f64> {
        if value <= 0.0 {
            return Err(Error::param(self.key(key), format!("{value} must be > 0")));
        }
        Ok(value)
    }
}
