//! Report files: one record per check, in request order.

use proxflat::rational::format_rational;
use proxflat::report::BoundReport;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub theorem: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measured: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strict: Option<bool>,
    /// `holds`, `violated` or `error`.
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub witnesses: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<f64>,
}

impl Record {
    pub fn from_report(r: &BoundReport) -> Self {
        Self {
            theorem: r.theorem.to_string(),
            label: Some(r.label.clone()),
            measured: Some(format_rational(&r.measured)),
            bound: Some(format_rational(&r.bound)),
            strict: Some(r.strict),
            verdict: r.verdict.as_str().to_string(),
            error: None,
            witnesses: r
                .witness
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect(),
            runtime_ms: None,
        }
    }

    pub fn error(theorem: &str, msg: impl Into<String>) -> Self {
        Self {
            theorem: theorem.to_string(),
            label: None,
            measured: None,
            bound: None,
            strict: None,
            verdict: "error".into(),
            error: Some(msg.into()),
            witnesses: Map::new(),
            runtime_ms: None,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == "holds"
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ReportFile {
    pub instance: String,
    pub records: Vec<Record>,
    pub all_hold: bool,
}

impl ReportFile {
    pub fn new(instance: String, records: Vec<Record>) -> Self {
        let all_hold = !records.is_empty() && records.iter().all(Record::holds);
        Self {
            instance,
            records,
            all_hold,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }
}
