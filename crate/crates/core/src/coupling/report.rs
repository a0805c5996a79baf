use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// A nonzero expression and the index tuple that produced it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Witness {
    pub indices: Vec<String>,
    pub expression: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionReport {
    pub name: String,
    pub status: Status,
    pub witnesses: Vec<Witness>,
}

impl ConditionReport {
    /// Status follows from whether any witness was found.
    pub fn from_witnesses(name: impl Into<String>, mut witnesses: Vec<Witness>) -> Self {
        witnesses.sort();
        Self {
            name: name.into(),
            status: if witnesses.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            witnesses,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Per-condition verdicts; passes overall iff every condition passes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckReport {
    pub verdict: Status,
    pub conditions: Vec<ConditionReport>,
    pub pivot_denominators: Vec<String>,
}

impl CheckReport {
    pub fn new(conditions: Vec<ConditionReport>) -> Self {
        let verdict = if conditions.iter().all(ConditionReport::passed) {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            verdict,
            conditions,
            pivot_denominators: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Status::Pass
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionReport> {
        self.conditions.iter().find(|c| c.name == name)
    }

    /// Names of the failing conditions, in report order.
    pub fn failing(&self) -> Vec<&str> {
        self.conditions
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.name.as_str())
            .collect()
    }

    /// Appends the conditions of `other`, recomputing the verdict.
    pub fn merged(mut self, other: CheckReport) -> Self {
        self.conditions.extend(other.conditions);
        for d in other.pivot_denominators {
            if !self.pivot_denominators.contains(&d) {
                self.pivot_denominators.push(d);
            }
        }
        let pivots = std::mem::take(&mut self.pivot_denominators);
        let mut out = Self::new(self.conditions);
        out.pivot_denominators = pivots;
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// One line per condition; failures list their witnesses inline.
impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.conditions {
            write!(f, "{}: {}", c.name, c.status.as_str().to_uppercase())?;
            if !c.witnesses.is_empty() {
                let shown: Vec<String> = c
                    .witnesses
                    .iter()
                    .map(|w| format!("[{}] {}", w.indices.join(","), w.expression))
                    .collect();
                write!(f, " ({} witnesses: {})", c.witnesses.len(), shown.join("; "))?;
            }
            writeln!(f)?;
        }
        if !self.pivot_denominators.is_empty() {
            writeln!(f, "valid where nonzero: {}", self.pivot_denominators.join(", "))?;
        }
        write!(f, "verdict: {}", self.verdict.as_str().to_uppercase())
    }
}
