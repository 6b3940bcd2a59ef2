//! Structured run reports.
//!
//! A report lists named checks with a status and a JSON detail, free-form
//! sections, and timings. The digest covers everything except timings, so
//! identical inputs give identical digests.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Info,
}

impl Status {
    pub fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: Value,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub budget: u64,
    pub checks: Vec<Check>,
    pub sections: BTreeMap<String, Value>,
    pub timings_ms: BTreeMap<String, u128>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

impl Report {
    pub fn new(command: &str, input: &[u8], budget: u64) -> Report {
        Report {
            command: command.to_string(),
            input_digest: sha256_hex(input),
            budget,
            checks: Vec::new(),
            sections: BTreeMap::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, status: Status, detail: Value) {
        self.checks.push(Check { name: name.into(), status, detail });
    }

    pub fn section(&mut self, name: &str, value: Value) {
        self.sections.insert(name.to_string(), value);
    }

    /// Runs `f`, recording its wall time under `name`.
    pub fn timed<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        *self.timings_ms.entry(name.to_string()).or_default() += t.elapsed().as_millis();
        out
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail).collect()
    }

    /// 0 all pass, 1 any failure, 2 otherwise inconclusive.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == Status::Fail) {
            1
        } else if self.checks.iter().any(|c| c.status == Status::Inconclusive) {
            2
        } else {
            0
        }
    }

    fn body(&self) -> Value {
        let failures: Vec<Value> =
            self.failures().iter().map(|c| json!({"name": c.name, "detail": c.detail})).collect();
        json!({
            "schema": SCHEMA,
            "command": self.command,
            "input_digest": self.input_digest,
            "budget": self.budget,
            "checks": self.checks,
            "sections": self.sections,
            "failures": failures,
            "exit_code": self.exit_code(),
        })
    }

    /// Digest of the report without timings.
    pub fn digest(&self) -> String {
        sha256_hex(self.body().to_string().as_bytes())
    }

    pub fn to_json(&self) -> Value {
        let mut v = self.body();
        v["report_digest"] = json!(self.digest());
        v["timings_ms"] = json!(self.timings_ms);
        v
    }

    pub fn render_text(&self) -> String {
        let mut out = format!("tannaka-forge {}  (input {})\n", self.command, &self.input_digest[..12]);
        if let Some(r) = self.sections.get("ring") {
            out.push_str(&format!("  ring {} with h = {}\n", r["ring"].as_str().unwrap_or("?"), r["h"].as_str().unwrap_or("?")));
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Inconclusive => "INCONCLUSIVE",
                Status::Info => "info",
            };
            let detail = match &c.detail {
                Value::Null => String::new(),
                Value::String(s) => format!("  {s}"),
                v => format!("  {v}"),
            };
            out.push_str(&format!("  [{tag:>12}] {}{detail}\n", c.name));
        }
        let pass = self.checks.iter().filter(|c| c.status == Status::Pass).count();
        out.push_str(&format!(
            "{} checks: {pass} pass, {} fail, {} inconclusive; exit {}\n",
            self.checks.len(),
            self.failures().len(),
            self.checks.iter().filter(|c| c.status == Status::Inconclusive).count(),
            self.exit_code()
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_and_digest() {
        let mut r = Report::new("coend", b"ring GR(2^1,1)", 10);
        r.check("a", Status::Pass, Value::Null);
        assert_eq!(r.exit_code(), 0);
        r.check("b", Status::Inconclusive, json!("budget"));
        assert_eq!(r.exit_code(), 2);
        let d = r.digest();
        r.timings_ms.insert("x".into(), 5);
        assert_eq!(r.digest(), d);
        r.check("c", Status::Fail, Value::Null);
        assert_eq!(r.exit_code(), 1);
        assert_ne!(r.digest(), d);
        let v = r.to_json();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["failures"][0]["name"], "c");
    }
}
