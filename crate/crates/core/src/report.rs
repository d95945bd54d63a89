//! Claim reports and their serialization.
//!
//! Output is byte-stable: parameters are kept in a sorted map, rationals are
//! written as `num/den` next to a six-digit decimal rendering, and timing is
//! only emitted when explicitly requested.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde_json::{Map, Value};

use crate::bound::{fraction_string, render_decimal};
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    /// A theorem that was checked and held.
    Verified,
    /// A theorem that was checked and failed: a bug or a corrupted input.
    Violated,
    /// An asserted-but-unproven claim that held on the scanned range.
    AuditedPass,
    /// An asserted-but-unproven claim that failed on the scanned range.
    AuditedFail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Verified => "verified",
            Status::Violated => "violated",
            Status::AuditedPass => "audited-pass",
            Status::AuditedFail => "audited-fail",
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Status::Violated | Status::AuditedFail)
    }

    pub fn verified(ok: bool) -> Self {
        if ok {
            Status::Verified
        } else {
            Status::Violated
        }
    }

    pub fn audited(ok: bool) -> Self {
        if ok {
            Status::AuditedPass
        } else {
            Status::AuditedFail
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamValue {
    Int(BigInt),
    Rational(BigRational),
    Text(String),
    Bool(bool),
}

macro_rules! int_param {
    ($($t:ty),*) => {$(
        impl From<$t> for ParamValue {
            fn from(v: $t) -> Self {
                ParamValue::Int(BigInt::from(v))
            }
        }
    )*};
}
int_param!(u32, u64, u128, i64, i128, usize);

impl From<BigInt> for ParamValue {
    fn from(v: BigInt) -> Self {
        ParamValue::Int(v)
    }
}

impl From<BigUint> for ParamValue {
    fn from(v: BigUint) -> Self {
        ParamValue::Int(v.into())
    }
}

impl From<&BigUint> for ParamValue {
    fn from(v: &BigUint) -> Self {
        ParamValue::Int(v.clone().into())
    }
}

impl From<BigRational> for ParamValue {
    fn from(v: BigRational) -> Self {
        ParamValue::Rational(v)
    }
}

impl From<&str> for ParamValue {
    fn from(v: &str) -> Self {
        ParamValue::Text(v.to_string())
    }
}

impl From<String> for ParamValue {
    fn from(v: String) -> Self {
        ParamValue::Text(v)
    }
}

impl From<bool> for ParamValue {
    fn from(v: bool) -> Self {
        ParamValue::Bool(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimReport {
    /// Stable identifier, e.g. `rs.symmetry`.
    pub claim: String,
    pub status: Status,
    pub params: BTreeMap<String, ParamValue>,
    pub evidence: String,
    pub timing_ms: Option<u64>,
}

impl ClaimReport {
    pub fn new(claim: impl Into<String>, status: Status, evidence: impl Into<String>) -> Self {
        ClaimReport {
            claim: claim.into(),
            status,
            params: BTreeMap::new(),
            evidence: evidence.into(),
            timing_ms: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<ParamValue>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Parameters flattened to strings; rationals gain a `_decimal` twin.
    fn flat_params(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for (k, v) in &self.params {
            match v {
                ParamValue::Int(i) => out.push((k.clone(), i.to_string())),
                ParamValue::Text(t) => out.push((k.clone(), t.clone())),
                ParamValue::Bool(b) => out.push((k.clone(), b.to_string())),
                ParamValue::Rational(r) => {
                    out.push((k.clone(), fraction_string(r)));
                    out.push((format!("{k}_decimal"), render_decimal(r, 6)));
                }
            }
        }
        out.sort();
        out
    }

    pub fn to_json(&self) -> Value {
        let mut params = Map::new();
        for (k, v) in &self.params {
            match v {
                ParamValue::Int(i) => {
                    let json = match i64::try_from(i) {
                        Ok(small) => Value::from(small),
                        Err(_) => Value::from(i.to_string()),
                    };
                    params.insert(k.clone(), json);
                }
                ParamValue::Text(t) => {
                    params.insert(k.clone(), Value::from(t.clone()));
                }
                ParamValue::Bool(b) => {
                    params.insert(k.clone(), Value::from(*b));
                }
                ParamValue::Rational(r) => {
                    params.insert(k.clone(), Value::from(fraction_string(r)));
                    params.insert(format!("{k}_decimal"), Value::from(render_decimal(r, 6)));
                }
            }
        }
        let mut obj = Map::new();
        obj.insert("claim".into(), Value::from(self.claim.clone()));
        obj.insert("status".into(), Value::from(self.status.as_str()));
        obj.insert("params".into(), Value::Object(params));
        obj.insert("evidence".into(), Value::from(self.evidence.clone()));
        if let Some(ms) = self.timing_ms {
            obj.insert("timing_ms".into(), Value::from(ms));
        }
        Value::Object(obj)
    }

    pub fn to_text(&self) -> String {
        let params = self
            .flat_params()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ");
        let mut line = format!("[{}] {}", self.status, self.claim);
        if !params.is_empty() {
            line.push(' ');
            line.push_str(&params);
        }
        line.push_str(": ");
        line.push_str(&self.evidence);
        if let Some(ms) = self.timing_ms {
            line.push_str(&format!(" ({ms} ms)"));
        }
        line
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

/// Fixed CSV column order.
pub const CSV_COLUMNS: [&str; 5] = ["claim", "status", "params", "evidence", "timing_ms"];

/// Serializes reports: JSON one object per line, CSV with a header row, or
/// one text line per report.
pub fn emit(reports: &[ClaimReport], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&serde_json::to_string(&r.to_json())?);
                out.push('\n');
            }
            Ok(out)
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(CSV_COLUMNS)?;
            for r in reports {
                let params = r
                    .flat_params()
                    .into_iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(";");
                let timing = r.timing_ms.map(|t| t.to_string()).unwrap_or_default();
                w.write_record([
                    r.claim.as_str(),
                    r.status.as_str(),
                    &params,
                    &r.evidence,
                    &timing,
                ])?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| crate::Error::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv writer emits utf-8"))
        }
        OutputFormat::Text => {
            let mut out = String::new();
            for r in reports {
                out.push_str(&r.to_text());
                out.push('\n');
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ClaimReport {
        ClaimReport::new("bound.c", Status::AuditedFail, "C <= 1")
            .param("x", 3u64)
            .param("c", BigRational::new((-37).into(), 10.into()))
            .param(
                "big",
                BigUint::parse_bytes(b"32589158477190044730", 10).unwrap(),
            )
    }

    #[test]
    fn json_line() {
        let out = emit(&[sample()], OutputFormat::Json).unwrap();
        assert_eq!(
            out,
            "{\"claim\":\"bound.c\",\"status\":\"audited-fail\",\"params\":{\"big\":\"32589158477190044730\",\"c\":\"-37/10\",\"c_decimal\":\"-3.70000\",\"x\":3},\"evidence\":\"C <= 1\"}\n"
        );
    }

    #[test]
    fn csv_rows() {
        let out = emit(&[sample()], OutputFormat::Csv).unwrap();
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("claim,status,params,evidence,timing_ms"));
        assert_eq!(
            lines.next(),
            Some("bound.c,audited-fail,big=32589158477190044730;c=-37/10;c_decimal=-3.70000;x=3,C <= 1,")
        );
    }

    #[test]
    fn text_line() {
        assert_eq!(
            sample().to_text(),
            "[audited-fail] bound.c big=32589158477190044730 c=-37/10 c_decimal=-3.70000 x=3: C <= 1"
        );
    }

    #[test]
    fn emission_is_repeatable() {
        let reports = vec![sample(), ClaimReport::new("a", Status::Verified, "ok")];
        for f in [OutputFormat::Json, OutputFormat::Csv, OutputFormat::Text] {
            assert_eq!(emit(&reports, f).unwrap(), emit(&reports, f).unwrap());
        }
    }

    #[test]
    fn status_classes() {
        assert!(Status::Violated.is_failure());
        assert!(Status::AuditedFail.is_failure());
        assert!(!Status::AuditedPass.is_failure());
        assert_eq!(Status::audited(true), Status::AuditedPass);
    }
}
