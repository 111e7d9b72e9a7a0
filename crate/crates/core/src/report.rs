//! Structured pass/fail reports for the verification sweeps. Stable-ordered
//! and renderable as plain text; every check names the inequality it tests
//! via a symbolic anchor.

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    /// Symbolic anchor of the inequality or construction step being checked,
    /// e.g. `bound.chord-contraction`.
    pub anchor: String,
    pub pass: bool,
    /// Measured quantities, name/value pairs in fixed order.
    pub measured: Vec<(String, f64)>,
    /// Bound values the measurements are compared against.
    pub bounds: Vec<(String, f64)>,
    /// Slack of the binding inequality (positive = satisfied with room).
    pub margin: f64,
    pub notes: String,
}

impl CheckResult {
    pub fn new(name: &str, anchor: &str, pass: bool) -> Self {
        CheckResult {
            name: name.into(),
            anchor: anchor.into(),
            pass,
            measured: Vec::new(),
            bounds: Vec::new(),
            margin: 0.0,
            notes: String::new(),
        }
    }

    pub fn measured(mut self, key: &str, v: f64) -> Self {
        self.measured.push((key.into(), v));
        self
    }

    pub fn bound(mut self, key: &str, v: f64) -> Self {
        self.bounds.push((key.into(), v));
        self
    }

    pub fn margin(mut self, m: f64) -> Self {
        self.margin = m;
        self
    }

    pub fn note(mut self, n: &str) -> Self {
        self.notes = n.into();
        self
    }
}

#[derive(Clone, Debug, Default)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
}

impl VerificationReport {
    pub fn push(&mut self, c: CheckResult) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: VerificationReport) {
        self.checks.extend(other.checks);
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// Every check must carry an anchor.
    pub fn self_validate(&self) -> Result<()> {
        for c in &self.checks {
            if c.anchor.trim().is_empty() {
                return Err(Error::VerificationFailed {
                    name: c.name.clone(),
                    details: "check has no anchor".into(),
                });
            }
        }
        Ok(())
    }

    /// Deterministic plain-text rendering, one line per check.
    pub fn render(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "check {} anchor={} status={} margin={:.6e}",
                c.name,
                c.anchor,
                if c.pass { "PASS" } else { "FAIL" },
                c.margin
            ));
            for (k, v) in &c.measured {
                s.push_str(&format!(" {k}={v:.16e}"));
            }
            for (k, v) in &c.bounds {
                s.push_str(&format!(" bound:{k}={v:.16e}"));
            }
            if !c.notes.is_empty() {
                s.push_str(&format!(" notes={}", c.notes.replace(' ', "_")));
            }
            s.push('\n');
        }
        s
    }
}
