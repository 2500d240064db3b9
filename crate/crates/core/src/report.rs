use serde::Serialize;

/// Outcome of one numerical check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// A named list of checks. Failures are entries, not errors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub name: String,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            checks: Vec::new(),
            passed: true,
        }
    }

    /// Passes iff `residual <= tolerance`; NaN fails.
    pub fn check(&mut self, name: impl Into<String>, residual: f64, tolerance: f64) -> bool {
        let passed = residual <= tolerance;
        self.push(CheckResult {
            name: name.into(),
            residual,
            tolerance,
            passed,
            detail: None,
        })
    }

    pub fn check_with(
        &mut self,
        name: impl Into<String>,
        residual: f64,
        tolerance: f64,
        detail: impl Into<String>,
    ) -> bool {
        let passed = residual <= tolerance;
        self.push(CheckResult {
            name: name.into(),
            residual,
            tolerance,
            passed,
            detail: Some(detail.into()),
        })
    }

    pub fn flag(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        detail: impl Into<String>,
    ) -> bool {
        self.push(CheckResult {
            name: name.into(),
            residual: if passed { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed,
            detail: Some(detail.into()),
        })
    }

    pub fn push(&mut self, check: CheckResult) -> bool {
        let passed = check.passed;
        self.passed &= passed;
        self.checks.push(check);
        passed
    }

    pub fn merge(&mut self, other: VerificationReport) {
        let prefix = other.name;
        for mut c in other.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.push(c);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}
