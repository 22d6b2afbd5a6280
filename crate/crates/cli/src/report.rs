use std::fmt;
use std::time::Duration;

use crate::scenario::Mode;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    /// A NaN measurement never passes.
    pub fn new(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self { name: name.into(), measured, tolerance, passed: measured <= tolerance }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {:<24} measured {:.3e}  tolerance {:.1e}", self.name, self.measured, self.tolerance)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub scenario: String,
    pub mode: Mode,
    pub checks: Vec<CheckResult>,
    /// Not written to any artifact, so artifacts stay reproducible.
    pub wall_time: Duration,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// `check,measured,tolerance,passed` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,measured,tolerance,passed\n");
        for c in &self.checks {
            out.push_str(&format!("{},{:.16e},{:.16e},{}\n", c.name, c.measured, c.tolerance, c.passed));
        }
        out
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "ok" } else { "FAILED" };
        writeln!(f, "scenario {} ({}): {} [{:.2?}]", self.scenario, self.mode, status, self.wall_time)?;
        for c in &self.checks {
            writeln!(f, "  {c}")?;
        }
        Ok(())
    }
}
