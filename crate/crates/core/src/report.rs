//! Check rows produced by the `verify_*` routines.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::Tolerance;

/// One verified identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    /// Stable dotted identifier, e.g. `little_algebra.bracket_12.bispinor`.
    pub id: String,
    /// The relation being checked, written out.
    pub equation: String,
    /// Short subsystem tag for grouping.
    pub quote_tag: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(
        id: impl Into<String>,
        equation: impl Into<String>,
        quote_tag: impl Into<String>,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Check {
            id: id.into(),
            equation: equation.into(),
            quote_tag: quote_tag.into(),
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
        }
    }

    /// Residual measured against `tol.bound(scale)`.
    pub fn scaled(
        id: impl Into<String>,
        equation: impl Into<String>,
        quote_tag: impl Into<String>,
        residual: f64,
        tol: Tolerance,
        scale: f64,
    ) -> Self {
        Check::new(id, equation, quote_tag, residual, tol.bound(scale))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn get(&self, id: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// `Ok(self)` if every check passed, otherwise the first failure.
    pub fn ensure(self) -> Result<Report> {
        let failure = self.failures().next().map(|c| Error::CheckFailed {
            id: c.id.clone(),
            residual: c.residual,
            tolerance: c.tolerance,
        });
        match failure {
            None => Ok(self),
            Some(e) => Err(e),
        }
    }
}

impl FromIterator<Check> for Report {
    fn from_iter<T: IntoIterator<Item = Check>>(iter: T) -> Self {
        Report {
            checks: iter.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ensure_names_first_failure() {
        let r: Report = [
            Check::new("a", "x = x", "t", 0.0, 1e-12),
            Check::new("b", "y = y", "t", 1.0, 1e-12),
        ]
        .into_iter()
        .collect();
        assert!(!r.passed());
        match r.ensure() {
            Err(Error::CheckFailed { id, .. }) => assert_eq!(id, "b"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nan_residual_fails() {
        assert!(!Check::new("n", "", "", f64::NAN, 1.0).pass);
    }
}
