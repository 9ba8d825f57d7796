use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Both sides agree exactly.
    Equal,
    /// Both sides differ somewhere.
    Mismatch,
    /// A structural check (bijection, decomposition) succeeded.
    Pass,
    /// A structural check failed.
    Fail,
}

impl Verdict {
    pub fn equal_if(ok: bool) -> Self {
        if ok {
            Verdict::Equal
        } else {
            Verdict::Mismatch
        }
    }

    pub fn pass_if(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_success(self) -> bool {
        matches!(self, Verdict::Equal | Verdict::Pass)
    }
}

/// Where a check failed, with enough context to replay it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub point: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Single command that reproduces the failure; filled in by front ends.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rerun: Option<String>,
}

impl Counterexample {
    pub fn new(detail: impl Into<String>) -> Self {
        Counterexample {
            point: BTreeMap::new(),
            left: None,
            right: None,
            detail: Some(detail.into()),
            rerun: None,
        }
    }

    pub fn at(mut self, key: &str, value: impl ToString) -> Self {
        self.point.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn sides(mut self, left: String, right: String) -> Self {
        self.left = Some(left);
        self.right = Some(right);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSummary {
    pub variables: Vec<String>,
    pub degree_bounds: BTreeMap<String, usize>,
    pub range: String,
    pub points_evaluated: usize,
    pub poles_skipped: Vec<String>,
    pub certificate: String,
}

/// Result of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub check: String,
    pub parameters: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub left: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub right: Option<String>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSummary>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl EvalReport {
    pub fn new(check: impl Into<String>, verdict: Verdict) -> Self {
        EvalReport {
            check: check.into(),
            parameters: BTreeMap::new(),
            left: None,
            right: None,
            verdict,
            grid: None,
            details: BTreeMap::new(),
            counterexample: None,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.parameters.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_owned(), value.into());
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    pub fn is_success(&self) -> bool {
        self.verdict.is_success()
    }

    /// JSON with keys sorted at every level.
    pub fn to_json_value(&self) -> Value {
        // serde_json's default map is ordered, so the round trip sorts keys.
        serde_json::to_value(self).expect("report is always serializable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("value is serializable")
    }

    /// Short human-readable summary.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}: {:?}", self.check, self.verdict).to_lowercase();
        let params: Vec<String> =
            self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        if !params.is_empty() {
            out.push_str(&format!(" [{}]", params.join(" ")));
        }
        if let (Some(l), Some(r)) = (&self.left, &self.right) {
            out.push_str(&format!("\n  left  = {l}\n  right = {r}"));
        }
        if let Some(g) = &self.grid {
            out.push_str(&format!(
                "\n  grid {} over {}: {} points, {} skipped",
                g.variables.join(","),
                g.range,
                g.points_evaluated,
                g.poles_skipped.len()
            ));
        }
        for (k, v) in &self.details {
            out.push_str(&format!("\n  {k}: {v}"));
        }
        if let Some(c) = &self.counterexample {
            out.push_str(&format!("\n  counterexample: {}", serde_json::to_string(c).unwrap()));
        }
        for n in &self.notes {
            out.push_str(&format!("\n  note: {n}"));
        }
        out
    }
}
