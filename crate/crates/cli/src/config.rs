//! Scenario configs: TOML flattened to dotted keys.
//!
//! Complex numbers are written `[re, im]` (a bare number is real). Every key
//! must be consumed by the scenario's schema; leftovers are rejected.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};

use stabforge_core::Complex64;
use toml::Value;

use crate::error::{CliError, CliResult};

#[derive(Debug)]
pub struct Config {
    entries: BTreeMap<String, Value>,
    used: RefCell<BTreeSet<String>>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::ConfigInvalid(msg.into())
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

fn as_f64(key: &str, v: &Value) -> CliResult<f64> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        _ => Err(invalid(format!("{key}: expected a number, got {v}"))),
    }
}

fn as_complex(key: &str, v: &Value) -> CliResult<Complex64> {
    match v {
        Value::Array(a) if a.len() == 2 => Ok(Complex64::new(as_f64(key, &a[0])?, as_f64(key, &a[1])?)),
        Value::Float(_) | Value::Integer(_) => Ok(Complex64::new(as_f64(key, v)?, 0.0)),
        _ => Err(invalid(format!("{key}: expected [re, im], got {v}"))),
    }
}

impl Config {
    pub fn parse(text: &str) -> CliResult<Self> {
        let table: toml::Table = text.parse().map_err(|e: toml::de::Error| invalid(e.message().to_string()))?;
        let mut entries = BTreeMap::new();
        flatten("", &table, &mut entries);
        Ok(Self {
            entries,
            used: RefCell::new(BTreeSet::new()),
        })
    }

    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
            used: RefCell::new(BTreeSet::new()),
        }
    }

    fn get(&self, key: &str) -> Option<&Value> {
        let v = self.entries.get(key);
        if v.is_some() {
            self.used.borrow_mut().insert(key.to_string());
        }
        v
    }

    pub fn has_prefix(&self, prefix: &str) -> bool {
        let p = format!("{prefix}.");
        self.entries.keys().any(|k| k.starts_with(&p))
    }

    pub fn string(&self, key: &str) -> CliResult<Option<String>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(v) => Err(invalid(format!("{key}: expected a string, got {v}"))),
        }
    }

    pub fn f64_opt(&self, key: &str) -> CliResult<Option<f64>> {
        self.get(key).map(|v| as_f64(key, v)).transpose()
    }

    pub fn f64_or(&self, key: &str, default: f64) -> CliResult<f64> {
        self.get(key).map_or(Ok(default), |v| as_f64(key, v))
    }

    pub fn f64_req(&self, key: &str) -> CliResult<f64> {
        self.get(key)
            .ok_or_else(|| invalid(format!("missing key {key}")))
            .and_then(|v| as_f64(key, v))
    }

    pub fn positive_or(&self, key: &str, default: f64) -> CliResult<f64> {
        let v = self.f64_or(key, default)?;
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(invalid(format!("{key}: must be positive, got {v}")))
        }
    }

    pub fn int_or(&self, key: &str, default: i64) -> CliResult<i64> {
        match self.get(key) {
            None => Ok(default),
            Some(Value::Integer(i)) => Ok(*i),
            Some(v) => Err(invalid(format!("{key}: expected an integer, got {v}"))),
        }
    }

    pub fn count_or(&self, key: &str, default: usize) -> CliResult<usize> {
        let v = self.int_or(key, default as i64)?;
        usize::try_from(v).map_err(|_| invalid(format!("{key}: must be non-negative, got {v}")))
    }

    pub fn bool_or(&self, key: &str, default: bool) -> CliResult<bool> {
        match self.get(key) {
            None => Ok(default),
            Some(Value::Boolean(b)) => Ok(*b),
            Some(v) => Err(invalid(format!("{key}: expected true or false, got {v}"))),
        }
    }

    pub fn complex_or(&self, key: &str, default: Complex64) -> CliResult<Complex64> {
        self.get(key).map_or(Ok(default), |v| as_complex(key, v))
    }

    pub fn complex_req(&self, key: &str) -> CliResult<Complex64> {
        self.get(key)
            .ok_or_else(|| invalid(format!("missing key {key}")))
            .and_then(|v| as_complex(key, v))
    }

    /// A list of complex numbers: `[[re, im], ...]`.
    pub fn complex_list_or(&self, key: &str, default: &[Complex64]) -> CliResult<Vec<Complex64>> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(Value::Array(a)) => a.iter().map(|v| as_complex(key, v)).collect(),
            Some(v) => Err(invalid(format!("{key}: expected a list, got {v}"))),
        }
    }

    pub fn f64_list_or(&self, key: &str, default: &[f64]) -> CliResult<Vec<f64>> {
        match self.get(key) {
            None => Ok(default.to_vec()),
            Some(Value::Array(a)) => a.iter().map(|v| as_f64(key, v)).collect(),
            Some(v) => Err(invalid(format!("{key}: expected a list, got {v}"))),
        }
    }

    pub fn pair_or(&self, key: &str, default: [f64; 2]) -> CliResult<[f64; 2]> {
        let v = self.f64_list_or(key, &default)?;
        <[f64; 2]>::try_from(v).map_err(|_| invalid(format!("{key}: expected two numbers")))
    }

    /// Indices `i` with some key `prefix.i.*`, ascending.
    pub fn indices(&self, prefix: &str) -> CliResult<Vec<usize>> {
        let p = format!("{prefix}.");
        let mut out = BTreeSet::new();
        for k in self.entries.keys() {
            if let Some(rest) = k.strip_prefix(&p) {
                let head = rest.split('.').next().unwrap_or_default();
                let i: usize = head
                    .parse()
                    .map_err(|_| invalid(format!("{k}: expected {prefix}.<index>.<field>")))?;
                out.insert(i);
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Reject keys the schema did not read.
    pub fn finish(&self) -> CliResult<()> {
        let used = self.used.borrow();
        match self.entries.keys().find(|k| !used.contains(*k)) {
            Some(k) => Err(invalid(format!("unknown key {k}"))),
            None => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dotted_sections_flatten() {
        let c = Config::parse(
            "kind = \"mirror\"\n[mirror]\na = [[0, 0], [1, 1]]\nk.min = -2\n[factor.1]\nphi = 1.5\n",
        )
        .unwrap();
        assert_eq!(c.string("kind").unwrap().as_deref(), Some("mirror"));
        assert_eq!(
            c.complex_list_or("mirror.a", &[]).unwrap(),
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 1.0)]
        );
        assert_eq!(c.int_or("mirror.k.min", 0).unwrap(), -2);
        assert_eq!(c.indices("factor").unwrap(), vec![1]);
        assert!(c.finish().is_err());
        assert_eq!(c.f64_req("factor.1.phi").unwrap(), 1.5);
        c.finish().unwrap();
    }

    #[test]
    fn type_errors_are_config_errors() {
        let c = Config::parse("x = \"a\"\ny = [1, 2, 3]\n").unwrap();
        assert!(matches!(c.f64_or("x", 0.0), Err(CliError::ConfigInvalid(_))));
        assert!(matches!(c.complex_req("y"), Err(CliError::ConfigInvalid(_))));
        assert!(matches!(Config::parse("x = ="), Err(CliError::ConfigInvalid(_))));
    }
}
