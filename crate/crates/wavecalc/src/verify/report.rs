//! Structured pass/fail records for residual checks.

use serde::{Deserialize, Serialize};

/// One verified claim: what was checked, with which parameters, how large
/// the residual came out, and against which tolerance it was judged.
///
/// `pass` is always derived as `residual ≤ tolerance`; the tolerance itself
/// is supplied by the caller from an error estimate appropriate to the
/// evaluation route (machine-precision budget for exact term algebra,
/// refinement-pair estimates for quadrature), never a silent default.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub params: serde_json::Value,
    pub residual: f64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub convergence_order: Option<f64>,
    pub pass: bool,
    pub notes: String,
}

impl CheckReport {
    pub fn new(
        check_id: impl Into<String>,
        params: serde_json::Value,
        residual: f64,
        tolerance: f64,
    ) -> CheckReport {
        CheckReport {
            check_id: check_id.into(),
            params,
            residual,
            tolerance,
            convergence_order: None,
            pass: residual <= tolerance,
            notes: String::new(),
        }
    }

    pub fn with_order(mut self, order: f64) -> CheckReport {
        self.convergence_order = Some(order);
        self
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> CheckReport {
        self.notes = notes.into();
        self
    }

    /// One aligned human-readable line for terminal summaries.
    pub fn line(&self) -> String {
        let order = match self.convergence_order {
            Some(o) => format!("  order {o:.2}"),
            None => String::new(),
        };
        format!(
            "{}  {:<44} residual {:9.3e}  tolerance {:9.3e}{}",
            if self.pass { "PASS" } else { "FAIL" },
            self.check_id,
            self.residual,
            self.tolerance,
            order
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn pass_flag_follows_residual_versus_tolerance() {
        let good = CheckReport::new("x", json!({}), 1e-13, 1e-12);
        assert!(good.pass);
        let bad = CheckReport::new("x", json!({}), 2e-12, 1e-12);
        assert!(!bad.pass);
        let edge = CheckReport::new("x", json!({}), 1e-12, 1e-12);
        assert!(edge.pass);
    }

    #[test]
    fn serializes_roundtrip_with_optional_order() {
        let r = CheckReport::new("identity_check", json!({"v": [0.0, 0.0, 0.3]}), 1e-13, 1e-12)
            .with_order(2.03)
            .with_notes("closed-form route");
        let s = serde_json::to_string(&r).unwrap();
        let back: CheckReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back.check_id, r.check_id);
        assert_eq!(back.convergence_order, Some(2.03));
        assert!(back.pass);

        let bare = CheckReport::new("y", json!({}), 1.0, 2.0);
        let s2 = serde_json::to_string(&bare).unwrap();
        assert!(!s2.contains("convergence_order"));
    }

    #[test]
    fn line_labels_pass_and_fail() {
        let good = CheckReport::new("a", json!({}), 0.0, 1.0);
        assert!(good.line().starts_with("PASS"));
        let bad = CheckReport::new("b", json!({}), 2.0, 1.0);
        assert!(bad.line().starts_with("FAIL"));
    }
}
