use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::numerics::{parse_rational, Rational, Scalar};

/// Named parameter values in a fixed order.
#[derive(Clone, Debug, PartialEq)]
pub struct Params<S> {
    entries: Vec<(String, S)>,
}

impl<S: Scalar> Params<S> {
    pub fn new<K: Into<String>>(entries: impl IntoIterator<Item = (K, S)>) -> Self {
        Params { entries: entries.into_iter().map(|(k, v)| (k.into(), v)).collect() }
    }

    pub fn get(&self, name: &str) -> Result<S> {
        self.entries
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| Error::Domain(format!("missing parameter {name}")))
    }

    pub fn entries(&self) -> &[(String, S)] {
        &self.entries
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.iter().map(|(k, _)| k.as_str()).collect()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Params<T> {
        Params { entries: self.entries.iter().map(|(k, v)| (k.clone(), f(v))).collect() }
    }

    pub fn to_f64(&self) -> Params<f64> {
        self.map(|v| v.to_f64())
    }

    /// Replaces or inserts one value.
    pub fn with(mut self, name: &str, v: S) -> Self {
        match self.entries.iter_mut().find(|(k, _)| k == name) {
            Some(e) => e.1 = v,
            None => self.entries.push((name.to_string(), v)),
        }
        self
    }

    /// Reorders to `names`, rejecting unknown and missing keys.
    pub fn conform(&self, names: &[&str]) -> Result<Self> {
        for (k, _) in &self.entries {
            if !names.contains(&k.as_str()) {
                return Err(Error::Domain(format!("unknown parameter {k}")));
            }
        }
        let entries = names
            .iter()
            .map(|n| Ok((n.to_string(), self.get(n)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Params { entries })
    }
}

impl Params<Rational> {
    /// Parses `k=v` pairs.
    pub fn parse<'a>(pairs: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut seen = BTreeMap::new();
        let mut entries = Vec::new();
        for pair in pairs {
            let (k, v) = pair
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {pair:?}")))?;
            let k = k.trim().to_string();
            if seen.insert(k.clone(), ()).is_some() {
                return Err(Error::Parse(format!("parameter {k} given twice")));
            }
            entries.push((k, parse_rational(v)?));
        }
        Ok(Params { entries })
    }
}

impl<S: Scalar> std::fmt::Display for Params<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(k, v)| format!("{k}={v}")).collect();
        f.write_str(&parts.join(" "))
    }
}
