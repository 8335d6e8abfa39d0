//! Check reports: one JSON object per check, plus an aligned text table.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub status: Status,
    pub details: Value,
    /// The violated equation or offending inputs; always present on failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    /// Wall-clock milliseconds, only recorded on request so that reports stay
    /// reproducible byte for byte.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CheckReport {
    pub fn pass(check: &str, details: Value) -> Self {
        CheckReport { check: check.into(), status: Status::Pass, details, witness: None, elapsed_ms: None }
    }

    pub fn fail(check: &str, details: Value, witness: impl Into<String>) -> Self {
        CheckReport { check: check.into(), status: Status::Fail, details, witness: Some(witness.into()), elapsed_ms: None }
    }

    pub fn skipped(check: &str, reason: impl Into<String>) -> Self {
        CheckReport { check: check.into(), status: Status::Skipped, details: Value::Null, witness: Some(reason.into()), elapsed_ms: None }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioReport {
    pub scenario: String,
    pub seed: u64,
    pub checks: Vec<CheckReport>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// Aligned table: check id, status, and the witness or a compact summary of
    /// the details.
    pub fn to_text(&self) -> String {
        let width = self.checks.iter().map(|c| c.check.len()).max().unwrap_or(5).max(5);
        let mut out = format!("scenario {} (seed {})\n", self.scenario, self.seed);
        out += &format!("{:<width$}  {:<7}  {}\n", "check", "status", "details");
        for c in &self.checks {
            let info = match (&c.witness, c.status) {
                (Some(w), Status::Fail | Status::Skipped) => w.clone(),
                _ => summarize(&c.details),
            };
            let timing = c.elapsed_ms.map(|ms| format!(" [{ms} ms]")).unwrap_or_default();
            out += &format!("{:<width$}  {:<7}  {info}{timing}\n", c.check, c.status.as_str());
        }
        out +=
            &format!("{} passed, {} failed, {} skipped\n", self.count(Status::Pass), self.count(Status::Fail), self.count(Status::Skipped));
        out
    }
}

fn summarize(v: &Value) -> String {
    let s = match v {
        Value::Object(map) => map
            .iter()
            .filter(|(_, v)| !matches!(v, Value::Array(a) if a.len() > 6))
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" "),
        other => other.to_string(),
    };
    if s.chars().count() > 100 {
        format!("{}...", s.chars().take(97).collect::<String>())
    } else {
        s
    }
}
