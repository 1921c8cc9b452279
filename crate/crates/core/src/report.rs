//! Pass/fail reports. Check failures are data, never errors.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// Tally for one named property.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    /// Instances actually evaluated.
    pub evaluated: usize,
    /// Instances skipped as undefined (e.g. `0 * inf`).
    pub skipped: usize,
    pub failures: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::Pass,
            evaluated: 0,
            skipped: 0,
            failures: 0,
            witness: None,
            note: None,
        }
    }

    pub fn pass(&mut self) {
        self.evaluated += 1;
    }

    /// Records a failing instance; the first witness is kept.
    pub fn fail(&mut self, witness: impl FnOnce() -> String) {
        self.evaluated += 1;
        self.failures += 1;
        self.status = Status::Fail;
        if self.witness.is_none() {
            self.witness = Some(witness());
        }
    }

    pub fn skip(&mut self) {
        self.skipped += 1;
    }

    pub fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        if ok {
            self.pass()
        } else {
            self.fail(witness)
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { title: title.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,status,evaluated,skipped,failures,witness\n");
        for c in &self.checks {
            let status = if c.passed() { "pass" } else { "fail" };
            let witness = c.witness.as_deref().unwrap_or("").replace('"', "\"\"");
            out.push_str(&format!(
                "{},{},{},{},{},\"{}\"\n",
                c.name, status, c.evaluated, c.skipped, c.failures, witness
            ));
        }
        out
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.title)?;
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            write!(f, "  [{status}] {} ({} evaluated", c.name, c.evaluated)?;
            if c.skipped > 0 {
                write!(f, ", {} skipped", c.skipped)?;
            }
            write!(f, ")")?;
            if let Some(w) = &c.witness {
                write!(f, " witness: {w}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
