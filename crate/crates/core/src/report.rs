use serde::Serialize;

/// Tolerance used to turn a margin into a verdict.
pub const TOL_CRITERION: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The inequality fails: entanglement (or nonclassicality) is witnessed.
    Violated,
    Satisfied,
}

/// Outcome of checking one inequality `lhs ≥ bound`.
///
/// `margin = bound - lhs`; the criterion is violated when the margin
/// exceeds [`TOL_CRITERION`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionReport {
    pub name: String,
    pub lhs: f64,
    pub bound: f64,
    pub margin: f64,
    pub verdict: Verdict,
}

impl CriterionReport {
    pub fn new(name: impl Into<String>, lhs: f64, bound: f64) -> Self {
        let margin = bound - lhs;
        let verdict = if margin > TOL_CRITERION {
            Verdict::Violated
        } else {
            Verdict::Satisfied
        };
        Self {
            name: name.into(),
            lhs,
            bound,
            margin,
            verdict,
        }
    }

    pub fn violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_follows_margin() {
        assert!(CriterionReport::new("a", 0.5, 1.0).violated());
        assert!(!CriterionReport::new("b", 1.0, 1.0).violated());
        assert!(!CriterionReport::new("c", 1.0, 1.0 + 1e-11).violated());
        assert!(!CriterionReport::new("d", 2.0, 1.0).violated());
        let json = CriterionReport::new("duan", 0.25, 1.0).to_json();
        assert!(json.contains("\"verdict\":\"violated\""));
        assert!(json.contains("\"margin\":0.75"));
    }
}
