use std::fmt;

use serde::{Deserialize, Serialize};

/// One failed axiom instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: String,
    pub detail: String,
}

/// List of violated axioms; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, rule: impl Into<String>, detail: impl Into<String>) {
        self.violations.push(Violation {
            rule: rule.into(),
            detail: detail.into(),
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    /// Names of violated rules, deduplicated, in first-seen order.
    pub fn rules(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for v in &self.violations {
            if !out.contains(&v.rule.as_str()) {
                out.push(&v.rule);
            }
        }
        out
    }

    pub fn violates(&self, rule: &str) -> bool {
        self.violations.iter().any(|v| v.rule == rule)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let shown: Vec<String> = self
            .violations
            .iter()
            .take(5)
            .map(|v| format!("{} ({})", v.rule, v.detail))
            .collect();
        write!(f, "{}", shown.join("; "))?;
        if self.violations.len() > 5 {
            write!(f, "; … {} more", self.violations.len() - 5)?;
        }
        Ok(())
    }
}
