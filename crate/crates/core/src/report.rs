use serde::Serialize;

/// One residual compared against a tolerance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// True for checks that pass when the residual exceeds the threshold.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub lower_bound: bool,
}

impl Check {
    /// Passes when `residual <= tolerance` (NaN never passes).
    pub fn at_most(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), residual, tolerance, pass: residual <= tolerance, lower_bound: false }
    }

    /// Passes when `residual > threshold`, used for certified non-examples.
    pub fn above(name: impl Into<String>, residual: f64, threshold: f64) -> Self {
        Self { name: name.into(), residual, tolerance: threshold, pass: residual > threshold, lower_bound: true }
    }

    /// Re-judge against a new tolerance, keeping the direction.
    pub fn with_tolerance(&self, tol: f64) -> Self {
        if self.lower_bound {
            Self::above(self.name.clone(), self.residual, tol)
        } else {
            Self::at_most(self.name.clone(), self.residual, tol)
        }
    }
}

/// A list of checks; the report passes iff every check does.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn residual(&self, name: &str) -> f64 {
        self.get(name).map(|c| c.residual).unwrap_or(f64::NAN)
    }

    /// Prefix every check name.
    pub fn prefixed(mut self, prefix: &str) -> Self {
        for c in &mut self.checks {
            c.name = format!("{prefix}{}", c.name);
        }
        self
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}
