use std::time::Duration;

use serde::Serialize;

use crate::precision::PrecReal;
use crate::series::{comparison_budget, SeriesValue};

/// Two independent evaluations of one identity and whether their enclosures
/// overlap.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub n: u32,
    pub lhs: SeriesValue,
    pub rhs: SeriesValue,
    pub gap: PrecReal,
    /// `lhs.error_bound + rhs.error_bound` plus the rounding of the subtraction.
    pub allowed: PrecReal,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl VerificationReport {
    /// Passes iff `|lhs - rhs| <= lhs bound + rhs bound + rounding allowance`.
    pub fn compare(identity: impl Into<String>, n: u32, lhs: SeriesValue, rhs: SeriesValue) -> Self {
        let gap = lhs.gap(&rhs);
        let allowed = comparison_budget(&lhs, &rhs);
        let pass = gap <= allowed;
        VerificationReport {
            identity: identity.into(),
            n,
            lhs,
            rhs,
            gap,
            allowed,
            pass,
            note: None,
            runtime: Duration::ZERO,
        }
    }

    /// A report on an exact (rational) identity; the pass flag is the equality.
    pub fn exact(identity: impl Into<String>, n: u32, lhs: SeriesValue, rhs: SeriesValue, equal: bool) -> Self {
        let mut r = Self::compare(identity, n, lhs, rhs);
        r.pass = equal;
        r.note = Some("compared as exact rationals".into());
        r
    }

    /// Fails the report unless `allowed <= tolerance`.
    pub fn require_within(mut self, tolerance: &PrecReal) -> Self {
        if self.allowed > *tolerance {
            self.pass = false;
            self.note = Some(format!("combined bound exceeds tolerance {tolerance}"));
        }
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn with_runtime(mut self, runtime: Duration) -> Self {
        self.runtime = runtime;
        self
    }
}
