//! Run reports: per-phase statistics of a solve, rendered as versioned
//! `key=value` lines followed by the same data as one JSON document.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::factor::StarFactor;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub mode: String,
    pub n: usize,
    pub d: usize,
    /// Center-sampling probability (regular pipeline).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Free-set sampling probability actually used (general pipeline).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_free: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,
    #[serde(rename = "D", skip_serializing_if = "Option::is_none")]
    pub rule_d: Option<f64>,
    #[serde(rename = "H", skip_serializing_if = "Option::is_none")]
    pub high: Option<usize>,
    #[serde(rename = "S", skip_serializing_if = "Option::is_none")]
    pub special: Option<usize>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    pub centers: Option<usize>,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub leaves: Option<usize>,
    #[serde(rename = "F", skip_serializing_if = "Option::is_none")]
    pub free: Option<usize>,
    #[serde(rename = "T", skip_serializing_if = "Option::is_none")]
    pub late_centers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<usize>,
    pub quota_requested: usize,
    pub quota_achieved: usize,
    pub min_star: usize,
    pub max_star: usize,
    pub star_count: usize,
    /// The asymptotic star size the construction aims for (not enforced).
    pub asymptotic_target: f64,
    pub resample_rounds: BTreeMap<String, usize>,
    /// Effective thresholds used in place of the asymptotic bounds.
    pub thresholds: BTreeMap<String, f64>,
    pub choices: BTreeMap<String, String>,
    pub fallbacks: Vec<String>,
}

impl RunReport {
    pub(crate) fn record_factor(&mut self, sf: &StarFactor) {
        self.min_star = sf.min_star();
        self.max_star = sf.max_star();
        self.star_count = sf.center_count();
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report is plain data")
    }

    /// `schema=1`, the flattened fields, then a `---` line and the JSON form.
    pub fn render(&self) -> String {
        render_record(&self.to_json())
    }
}

/// Renders any JSON object as the versioned key/value format.
pub fn render_record(value: &Value) -> String {
    let mut out = format!("schema={REPORT_SCHEMA}\n");
    flatten_into("", value, &mut out);
    out.push_str("---\n");
    out.push_str(&serde_json::to_string_pretty(value).expect("serializable"));
    out.push('\n');
    out
}

fn flatten_into(prefix: &str, value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() {
                    k.clone()
                } else {
                    format!("{prefix}.{k}")
                };
                flatten_into(&key, v, out);
            }
        }
        Value::Array(items) if items.iter().all(|v| !v.is_object() && !v.is_array()) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            writeln!(out, "{prefix}={}", joined.join(",")).unwrap();
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten_into(&format!("{prefix}.{i}"), v, out);
            }
        }
        other => writeln!(out, "{prefix}={}", scalar(other)).unwrap(),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.replace('\n', " "),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
