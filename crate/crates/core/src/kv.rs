//! Flat `key = value` text format.
//!
//! One entry per line, `#` starts a comment, blank lines are ignored. Keys are
//! case-sensitive. Floats are written with Rust's shortest round-trip form, so
//! `parse(&to_string(x))` reproduces `x` bit-exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{ModelCoefficients, ModelParams};
use crate::thermistor::PhysicalParams;

fn at(line: &Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

/// Errors carry the source line when the document came from text.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum KvError {
    #[error("line {line}: expected `key = value`, got `{text}`")]
    Syntax { line: usize, text: String },
    #[error("{}duplicate key `{key}`", at(line))]
    Duplicate { line: Option<usize>, key: String },
    #[error("missing required key `{key}`")]
    Missing { key: String },
    #[error("{}key `{key}`: cannot parse `{value}`: {reason}", at(line))]
    Value { line: Option<usize>, key: String, value: String, reason: String },
    #[error("{}unknown key `{key}`", at(line))]
    Unknown { line: Option<usize>, key: String },
    #[error("invalid parameters: {0}")]
    Params(#[from] crate::error::ParamError),
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    value: String,
    line: Option<usize>,
}

/// Parsed document; remembers the source line of every key.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KvDoc {
    entries: BTreeMap<String, Entry>,
}

impl KvDoc {
    pub fn parse(text: &str) -> Result<Self, KvError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                return Err(KvError::Syntax { line, text: raw.trim().to_string() });
            };
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || k.contains(char::is_whitespace) {
                return Err(KvError::Syntax { line, text: raw.trim().to_string() });
            }
            if entries.insert(k.to_string(), Entry { value: v.to_string(), line: Some(line) }).is_some() {
                return Err(KvError::Duplicate { line: Some(line), key: k.to_string() });
            }
        }
        Ok(Self { entries })
    }

    /// Document from already-split pairs, e.g. a JSON object.
    pub fn from_pairs<K: Into<String>, V: Into<String>>(
        pairs: impl IntoIterator<Item = (K, V)>,
    ) -> Result<Self, KvError> {
        let mut entries = BTreeMap::new();
        for (k, v) in pairs {
            let key = k.into();
            if entries.insert(key.clone(), Entry { value: v.into(), line: None }).is_some() {
                return Err(KvError::Duplicate { line: None, key });
            }
        }
        Ok(Self { entries })
    }

    pub fn contains(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn get<T>(&self, key: &str) -> Result<Option<T>, KvError>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        let Some(e) = self.entries.get(key) else {
            return Ok(None);
        };
        e.value.parse().map(Some).map_err(|err: T::Err| KvError::Value {
            line: e.line,
            key: key.to_string(),
            value: e.value.clone(),
            reason: err.to_string(),
        })
    }

    pub fn require<T>(&self, key: &str) -> Result<T, KvError>
    where
        T: FromStr,
        T::Err: fmt::Display,
    {
        self.get(key)?.ok_or_else(|| KvError::Missing { key: key.to_string() })
    }

    /// Error for a present key whose value is unacceptable for `reason`.
    pub fn invalid(&self, key: &str, reason: impl Into<String>) -> KvError {
        match self.entries.get(key) {
            Some(e) => {
                KvError::Value { line: e.line, key: key.to_string(), value: e.value.clone(), reason: reason.into() }
            }
            None => KvError::Missing { key: key.to_string() },
        }
    }

    /// Fails on the first key (in line order) not in `allowed`.
    pub fn reject_unknown(&self, allowed: &[&str]) -> Result<(), KvError> {
        let mut unknown: Vec<(&String, &Entry)> =
            self.entries.iter().filter(|(k, _)| !allowed.contains(&k.as_str())).collect();
        unknown.sort_by_key(|(_, e)| e.line);
        match unknown.first() {
            Some((k, e)) => Err(KvError::Unknown { line: e.line, key: (*k).clone() }),
            None => Ok(()),
        }
    }
}

/// Writes `key = value` lines in the given order.
pub fn to_string<V: fmt::Display>(pairs: &[(&str, V)]) -> String {
    pairs.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
}

impl ModelParams {
    pub fn from_kv(doc: &KvDoc) -> Result<Self, KvError> {
        let c = ModelCoefficients {
            alpha: doc.require("alpha")?,
            eta: doc.require("eta")?,
            a: doc.require("a")?,
            b: doc.require("b")?,
            mu: doc.require("mu")?,
            gamma: doc.require("gamma")?,
            theta: doc.require("theta")?,
            epsilon: doc.require("epsilon")?,
        };
        Ok(ModelParams::new(c)?)
    }

    pub fn kv_pairs(&self) -> [(&'static str, f64); 8] {
        let c = self.coefficients();
        [
            ("alpha", c.alpha),
            ("eta", c.eta),
            ("a", c.a),
            ("b", c.b),
            ("mu", c.mu),
            ("gamma", c.gamma),
            ("theta", c.theta),
            ("epsilon", c.epsilon),
        ]
    }

    pub fn to_kv(&self) -> String {
        to_string(&self.kv_pairs())
    }
}

impl PhysicalParams {
    /// `T0` is optional and defaults to [`PhysicalParams::DEFAULT_T0`].
    pub fn from_kv(doc: &KvDoc) -> Result<Self, KvError> {
        let ph = PhysicalParams {
            capacitance: doc.require("C")?,
            inductance: doc.require("L")?,
            r0: doc.require("R0")?,
            beta: doc.require("beta")?,
            t0: doc.get("T0")?.unwrap_or(PhysicalParams::DEFAULT_T0),
            heat_capacitance: doc.require("c")?,
            dissipation: doc.require("delta")?,
            a: doc.require("a")?,
            b: doc.require("b")?,
        };
        ph.validate()?;
        Ok(ph)
    }

    pub fn kv_pairs(&self) -> [(&'static str, f64); 9] {
        [
            ("C", self.capacitance),
            ("L", self.inductance),
            ("R0", self.r0),
            ("beta", self.beta),
            ("T0", self.t0),
            ("c", self.heat_capacitance),
            ("delta", self.dissipation),
            ("a", self.a),
            ("b", self.b),
        ]
    }

    pub fn to_kv(&self) -> String {
        to_string(&self.kv_pairs())
    }
}
