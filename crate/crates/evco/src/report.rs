//! Structured verification reports: per-instance check records with exact
//! rational witnesses, serializable for the CLI and assertable in tests.

use serde::{Deserialize, Serialize};
use std::fmt;

pub const REPORT_VERSION: &str = "1";

/// One verified fact; `witness` carries the exact rational data the verdict
/// was decided on (always present for failures).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub pass: bool,
}

/// All checks run for one theorem-shaped property on one instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub theorem: String,
    pub instance_id: String,
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn new(theorem: impl Into<String>, instance_id: impl Into<String>) -> Self {
        CheckReport {
            theorem: theorem.into(),
            instance_id: instance_id.into(),
            checks: Vec::new(),
        }
    }

    pub fn record(&mut self, kind: impl Into<String>, witness: Option<String>, pass: bool) {
        self.checks.push(Check { kind: kind.into(), witness, pass });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.failures().count();
        writeln!(
            f,
            "{} [{}]: {} checks, {} failed",
            self.theorem,
            self.instance_id,
            self.checks.len(),
            failed
        )?;
        for c in &self.checks {
            let mark = if c.pass { "ok " } else { "FAIL" };
            match &c.witness {
                Some(w) => writeln!(f, "  {mark} {} ({w})", c.kind)?,
                None => writeln!(f, "  {mark} {}", c.kind)?,
            }
        }
        Ok(())
    }
}

/// Top-level serialized artifact: versioned bundle of reports, ordered by
/// instance id so output is scheduling-independent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFile {
    pub version: String,
    pub reports: Vec<CheckReport>,
}

impl ReportFile {
    pub fn new(mut reports: Vec<CheckReport>) -> Self {
        reports.sort_by(|a, b| {
            a.instance_id
                .cmp(&b.instance_id)
                .then_with(|| a.theorem.cmp(&b.theorem))
        });
        ReportFile { version: REPORT_VERSION.into(), reports }
    }

    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.all_pass())
    }
}
