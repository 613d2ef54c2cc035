//! Deterministic check reports, rendered as text or JSON.
//!
//! Reports are byte-identical for identical inputs: iteration orders are
//! fixed and timing is only attached when explicitly requested.

use serde::Serialize;

#[derive(Serialize, Clone, Debug)]
pub struct Check {
    pub name: String,
    pub verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub command: String,
    pub scenario: String,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificates: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str, scenario: &str) -> Self {
        Report {
            command: command.to_string(),
            scenario: scenario.to_string(),
            checks: Vec::new(),
            certificates: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn push(&mut self, name: impl Into<String>, ok: bool, detail: Option<String>) {
        self.checks.push(Check {
            name: name.into(),
            verdict: if ok { "ok" } else { "fail" },
            detail,
        });
    }

    pub fn certificate(&mut self, text: impl Into<String>) {
        self.certificates.push(text.into());
    }

    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.verdict == "ok")
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_ok() {
            0
        } else {
            1
        }
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{} on {}\n", self.command, self.scenario));
        for check in &self.checks {
            out.push_str(&format!("  check {}: {}", check.name, check.verdict));
            if let Some(detail) = &check.detail {
                out.push_str(&format!(" ({detail})"));
            }
            out.push('\n');
        }
        for cert in &self.certificates {
            out.push_str(&format!("  certificate: {cert}\n"));
        }
        out.push_str(&format!(
            "result: {}\n",
            if self.all_ok() { "ok" } else { "FAIL" }
        ));
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("elapsed: {ms} ms\n"));
        }
        out
    }

    pub fn render_machine(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}
