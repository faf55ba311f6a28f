//! Structured reports `acbm-report/1`.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const REPORT_SCHEMA: &str = "acbm-report/1";
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status) -> Self {
        Check {
            name: name.into(),
            status,
            residual: None,
            tolerance: None,
            expected: None,
            provenance: None,
            detail: None,
        }
    }

    pub fn pass_if(name: impl Into<String>, ok: bool) -> Self {
        Check::new(name, Status::from_bool(ok))
    }

    /// Passes when `residual < tolerance`.
    pub fn residual(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        let mut c = Check::pass_if(name, residual < tolerance);
        c.residual = Some(residual);
        c.tolerance = Some(tolerance);
        c
    }

    pub fn info(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check::new(name, Status::Info).detail(detail)
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }

    pub fn provenance(mut self, p: impl Into<String>) -> Self {
        self.provenance = Some(p.into());
        self
    }

    pub fn expected(mut self, v: Value) -> Self {
        self.expected = Some(v);
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub engine_version: &'static str,
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub inputs: Value,
    pub checks: Vec<Check>,
    pub data: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<Value>,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, mode: &str, inputs: Value) -> Self {
        Report {
            schema: REPORT_SCHEMA,
            command: command.to_string(),
            engine_version: ENGINE_VERSION,
            mode: mode.to_string(),
            seed: None,
            inputs,
            checks: Vec::new(),
            data: Value::Object(Default::default()),
            points: Vec::new(),
            passed: true,
        }
    }

    pub fn push(&mut self, c: Check) {
        self.passed &= c.passed();
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        for c in cs {
            self.push(c);
        }
    }

    pub fn set_data(&mut self, key: &str, v: Value) {
        if let Value::Object(m) = &mut self.data {
            m.insert(key.to_string(), v);
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} ({} mode, engine {})",
            self.command, self.mode, self.engine_version
        );
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        for c in &self.checks {
            let _ = write!(out, "{} {}", c.status.label(), c.name);
            if let Some(r) = c.residual {
                let _ = write!(out, "  residual {r:.3e}");
            }
            match c.tolerance {
                Some(0.0) => out.push_str(" (exact)"),
                Some(t) => {
                    let _ = write!(out, " < {t:.0e}");
                }
                None => {}
            }
            if let Some(p) = &c.provenance {
                let _ = write!(out, "  [{p}]");
            }
            if let Some(d) = &c.detail {
                let _ = write!(out, "  {d}");
            }
            out.push('\n');
        }
        if let Value::Object(m) = &self.data {
            for (k, v) in m {
                let _ = writeln!(out, "{k}: {}", compact(v));
            }
        }
        if !self.points.is_empty() {
            let _ = writeln!(out, "point reports: {}", self.points.len());
        }
        let _ = writeln!(out, "{}", if self.passed { "passed" } else { "FAILED" });
        out
    }
}

fn compact(v: &Value) -> String {
    let s = v.to_string();
    if s.len() > 400 {
        format!(
            "{}... ({} bytes)",
            s.chars().take(400).collect::<String>(),
            s.len()
        )
    } else {
        s
    }
}
