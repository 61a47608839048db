//! Defect reports: named numerical checks against thresholds.
//!
//! Validators in this crate never answer with a bare boolean; they list every
//! law they evaluated together with the worst observed defect, so a failure
//! names the offending law and witness.

/// A single named check.  Passes when `defect <= threshold`.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub defect: f64,
    pub threshold: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.defect <= self.threshold && self.defect.is_finite()
    }
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} (defect {:.3e}, threshold {:.1e})",
            self.name, self.defect, self.threshold
        )
    }
}

/// An ordered collection of [`Check`]s.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report { checks: Vec::new() }
    }

    pub fn push(&mut self, name: impl Into<String>, defect: f64, threshold: f64) {
        self.checks.push(Check { name: name.into(), defect, threshold });
    }

    /// Record `defect` under `name`, but only keep the worst defect per name.
    pub fn push_max(&mut self, name: &str, defect: f64, threshold: f64) {
        if let Some(c) = self.checks.iter_mut().find(|c| c.name == name) {
            if defect > c.defect {
                c.defect = defect;
            }
        } else {
            self.push(name, defect, threshold);
        }
    }

    /// Append `other`'s checks with a `prefix.` on every name.
    pub fn merge(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.checks.push(Check {
                name: format!("{prefix}.{}", c.name),
                defect: c.defect,
                threshold: c.threshold,
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn max_defect(&self) -> f64 {
        self.checks.iter().map(|c| c.defect).fold(0.0, f64::max)
    }

    pub fn worst(&self) -> Option<&Check> {
        self.checks
            .iter()
            .max_by(|a, b| a.defect.partial_cmp(&b.defect).unwrap_or(std::cmp::Ordering::Equal))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Defect recorded under an exact check name, if present.
    pub fn defect_of(&self, name: &str) -> Option<f64> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.defect)
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{:<48} defect {:>12.3e}  thr {:>8.1e}  {}",
                c.name,
                c.defect,
                c.threshold,
                if c.passed() { "ok" } else { "FAIL" }
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_pass_fail_logic() {
        let mut r = Report::new();
        r.push("a", 1e-12, 1e-9);
        assert!(r.passed());
        r.push("b", 0.5, 1e-9);
        assert!(!r.passed());
        assert_eq!(r.worst().unwrap().name, "b");
        assert_eq!(r.failures().count(), 1);
        assert_eq!(r.max_defect(), 0.5);
    }

    #[test]
    fn push_max_keeps_worst() {
        let mut r = Report::new();
        r.push_max("law", 0.1, 1.0);
        r.push_max("law", 0.05, 1.0);
        r.push_max("law", 0.3, 1.0);
        assert_eq!(r.checks.len(), 1);
        assert_eq!(r.defect_of("law"), Some(0.3));
    }

    #[test]
    fn nan_defect_fails() {
        let mut r = Report::new();
        r.push("law", f64::NAN, 1.0);
        assert!(!r.passed());
    }
}
