//! Machine-readable reports, schema `nckit-report/1`.
//!
//! Every report is one JSON object:
//!
//! ```text
//! {
//!   "schema": "nckit-report/1",
//!   "command": "reduce" | "verify" | "planewave" | "grid-check",
//!   "passed": bool,
//!   "elapsed_ms": number,
//!   "theta": { "12": str, "13": str, "23": str } | null,
//!   "<command>": { ...command-specific body... }
//! }
//! ```
//!
//! The bodies are [`ReduceReport`], [`SuiteReport`](crate::suites::SuiteReport),
//! [`PlaneWaveReport`](crate::pwreport::PlaneWaveReport) and
//! [`GridCheckReport`](crate::gridcheck::GridCheckReport).

use std::fmt;

use serde::Serialize;

use crate::config::ThetaConfig;
use crate::gridcheck::GridCheckReport;
use crate::pwreport::PlaneWaveReport;
use crate::suites::SuiteReport;

pub const SCHEMA: &str = "nckit-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct ReduceReport {
    pub input: String,
    pub output: String,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Body {
    Reduce(ReduceReport),
    Verify(SuiteReport),
    Planewave(PlaneWaveReport),
    GridCheck(GridCheckReport),
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: &'static str,
    pub passed: bool,
    pub elapsed_ms: u128,
    pub theta: Option<ThetaConfig>,
    #[serde(flatten)]
    pub body: Body,
}

impl Report {
    pub fn new(body: Body, theta: Option<ThetaConfig>, elapsed_ms: u128) -> Self {
        let (command, passed) = match &body {
            Body::Reduce(_) => ("reduce", true),
            Body::Verify(s) => ("verify", s.passed),
            Body::Planewave(p) => ("planewave", p.passed),
            Body::GridCheck(g) => ("grid-check", g.passed),
        };
        Report {
            schema: SCHEMA,
            command,
            passed,
            elapsed_ms,
            theta,
            body,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.body {
            Body::Reduce(r) => return writeln!(f, "{}", r.output),
            Body::Verify(s) => write!(f, "{s}")?,
            Body::Planewave(p) => write!(f, "{p}")?,
            Body::GridCheck(g) => write!(f, "{g}")?,
        }
        if let Some(t) = &self.theta {
            writeln!(f, "theta: 12 = {}, 13 = {}, 23 = {}", t.t12, t.t13, t.t23)?;
        }
        writeln!(
            f,
            "{} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed_ms as f64 / 1000.0
        )
    }
}
