use std::fmt::Write;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Claim {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Claim {
    pub fn new(name: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Self {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Self {
            name: name.into(),
            pass: expected == actual,
            expected,
            actual,
        }
    }

    /// A claim whose verdict is not a plain string comparison.
    pub fn judged(
        name: impl Into<String>,
        expected: impl ToString,
        actual: impl ToString,
        pass: bool,
    ) -> Self {
        Self {
            name: name.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub degrees: Vec<u32>,
    pub claims: Vec<Claim>,
    pub payload: Value,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialise");
        s.push('\n');
        s
    }

    /// Text rendering of the same data as [`Report::to_json`].
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let degrees: Vec<String> = self.degrees.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "delpezzo {} {}", self.tool_version, self.command);
        if !degrees.is_empty() {
            let _ = writeln!(out, "degrees: {}", degrees.join(", "));
        }
        let failed = self.claims.iter().filter(|c| !c.pass).count();
        let _ = writeln!(
            out,
            "claims: {} passed, {failed} failed",
            self.claims.len() - failed
        );
        let width = self.claims.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.claims {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "  {verdict}  {:<width$}  expected {}  actual {}",
                c.name, c.expected, c.actual
            );
        }
        let _ = writeln!(out, "payload:");
        render(&self.payload, 1, &mut out);
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| scalar(i).is_some() && !i.is_array()) => {
            // strings are quoted inside lists so that embedded commas stay readable
            let parts: Vec<String> = items
                .iter()
                .map(|i| match i {
                    Value::String(_) => i.to_string(),
                    other => scalar(other).unwrap_or_default(),
                })
                .collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match scalar(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render(item, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render(item, depth + 1, out);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}
