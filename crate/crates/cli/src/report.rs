//! Report records and the line-delimited JSON stream.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub module: String,
    pub operation: String,
    /// Inputs of the check, enough to re-run it.
    pub params: Value,
    pub params_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub values: BTreeMap<String, Value>,
    pub tolerances: BTreeMap<String, f64>,
    pub provenance: Provenance,
}

/// SHA-256 of the compact JSON encoding. `serde_json` maps keep their keys
/// sorted, so equal parameters hash equally.
pub fn params_hash(params: &Value) -> String {
    let text = serde_json::to_string(params).expect("json values serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl ReportRecord {
    pub fn new(check: impl Into<String>, module: &str, operation: &str, params: Value) -> Self {
        let params_hash = params_hash(&params);
        Self {
            check: check.into(),
            status: Status::Pass,
            witness: None,
            values: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            provenance: Provenance {
                module: module.to_string(),
                operation: operation.to_string(),
                params,
                params_hash,
            },
        }
    }

    pub fn value(mut self, key: &str, v: impl Serialize) -> Self {
        self.values
            .insert(key.to_string(), serde_json::to_value(v).expect("serializable value"));
        self
    }

    pub fn tol(mut self, key: &str, v: f64) -> Self {
        self.tolerances.insert(key.to_string(), v);
        self
    }

    pub fn fail(mut self, witness: impl Into<String>) -> Self {
        self.status = Status::Fail;
        self.witness = Some(witness.into());
        self
    }

    /// Fail with `witness()` unless `ok`.
    pub fn expect(self, ok: bool, witness: impl FnOnce() -> String) -> Self {
        if ok {
            self
        } else {
            self.fail(witness())
        }
    }

    pub fn skip(mut self, reason: impl Into<String>) -> Self {
        self.status = Status::Skipped;
        self.witness = Some(reason.into());
        self
    }
}

/// Canonical order: by check id, then by parameters.
pub fn sort_records(records: &mut [ReportRecord]) {
    records.sort_by(|a, b| {
        a.check
            .cmp(&b.check)
            .then_with(|| a.provenance.params_hash.cmp(&b.provenance.params_hash))
    });
}

pub fn write_stream(records: &[ReportRecord], out: &mut dyn Write) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut *out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// 0 iff every non-skipped record passed.
pub fn exit_code(records: &[ReportRecord]) -> i32 {
    if records.iter().any(|r| r.status == Status::Fail) {
        1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn hash_ignores_key_order() {
        let a: Value = serde_json::from_str(r#"{"x": 1, "y": [1, 2]}"#).unwrap();
        let b: Value = serde_json::from_str(r#"{"y": [1, 2], "x": 1}"#).unwrap();
        assert_eq!(params_hash(&a), params_hash(&b));
        assert_ne!(params_hash(&a), params_hash(&json!({"x": 2, "y": [1, 2]})));
    }

    #[test]
    fn failures_carry_witness_and_set_exit_code() {
        let ok = ReportRecord::new("a", "m", "op", json!({}));
        let bad = ReportRecord::new("b", "m", "op", json!({})).expect(false, || "w".into());
        assert_eq!(bad.witness.as_deref(), Some("w"));
        assert_eq!(exit_code(std::slice::from_ref(&ok)), 0);
        assert_eq!(exit_code(&[ok.clone(), bad]), 1);
        assert_eq!(exit_code(&[ok.skip("n/a")]), 0);
    }

    #[test]
    fn stream_round_trips() {
        let r = ReportRecord::new("c", "m", "op", json!({"k": 3}))
            .value("err", 1e-13)
            .tol("err", 1e-9);
        let mut buf = Vec::new();
        write_stream(std::slice::from_ref(&r), &mut buf).unwrap();
        let back: ReportRecord = serde_json::from_slice(buf.strip_suffix(b"\n").unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
