//! Residual reports shared by every verifier.

use serde_json::{json, Value};

use crate::bigreal::BigReal;

/// One named residual.
#[derive(Debug, Clone)]
pub struct Residual {
    pub label: String,
    pub value: BigReal,
}

/// Residuals of one check against a tolerance; passes iff every residual is below it.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub theorem: String,
    pub type_label: String,
    pub residuals: Vec<Residual>,
    pub tolerance: BigReal,
    pub pass: bool,
}

impl VerificationReport {
    pub fn new(theorem: impl Into<String>, type_label: impl Into<String>, tolerance: BigReal, residuals: Vec<Residual>) -> Self {
        let pass = residuals.iter().all(|r| r.value.abs() < tolerance);
        Self { theorem: theorem.into(), type_label: type_label.into(), residuals, tolerance, pass }
    }

    pub fn max_residual(&self) -> BigReal {
        crate::bigreal::max_abs(self.residuals.iter().map(|r| &r.value), self.tolerance.context())
    }

    /// Residuals at or above the tolerance.
    pub fn failures(&self) -> impl Iterator<Item = &Residual> {
        self.residuals.iter().filter(|r| r.value.abs() >= self.tolerance)
    }

    /// `{"theorem", "type", "residuals": [decimal strings], "tolerance", "pass"}`.
    pub fn to_json(&self) -> Value {
        json!({
            "theorem": self.theorem,
            "type": self.type_label,
            "residuals": self.residuals.iter().map(|r| r.value.abs().to_decimal(6)).collect::<Vec<_>>(),
            "tolerance": self.tolerance.to_decimal(6),
            "pass": self.pass,
        })
    }
}

pub(crate) fn residual(label: impl Into<String>, value: BigReal) -> Residual {
    Residual { label: label.into(), value: value.abs() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigreal::PrecisionContext;

    #[test]
    fn verdict_and_json_shape() {
        let ctx = PrecisionContext::default();
        let tol = BigReal::from_ratio(1, 1000, ctx);
        let ok = VerificationReport::new("x", "A1", tol.clone(), vec![residual("a", BigReal::from_ratio(-1, 10_000, ctx))]);
        assert!(ok.pass);
        let bad = VerificationReport::new("x", "A1", tol, vec![residual("a", BigReal::from_ratio(1, 100, ctx))]);
        assert!(!bad.pass);
        assert_eq!(bad.failures().count(), 1);
        let v = ok.to_json();
        assert_eq!(v["type"], "A1");
        assert_eq!(v["residuals"][0], "0.0001");
        assert_eq!(v["tolerance"], "0.001");
        assert_eq!(v["pass"], true);
    }
}
