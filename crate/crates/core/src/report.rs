//! Result records shared by every checker.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Which way the checked inequality points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    /// lhs ≥ rhs
    Ge,
    /// lhs ≤ rhs
    Le,
    /// lhs = rhs up to a relative tolerance
    Eq,
}

/// Outcome of one inequality evaluation.
///
/// For `ge` the check passes iff `lhs ≥ rhs − tolerance·scale` with
/// `scale = max(|lhs|, |rhs|, 1)`; `le` is the mirror image; `eq` passes iff
/// `|lhs − rhs| ≤ tolerance·max(|lhs|, |rhs|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub constant_used: f64,
    /// lhs/rhs, absent when rhs = 0.
    pub ratio: Option<f64>,
    pub passed: bool,
    pub tolerance: f64,
    pub relation: Relation,
    /// False when the constant is only numerically conjectured.
    pub rigorous: bool,
}

impl InequalityReport {
    pub fn new(
        name: impl Into<String>,
        relation: Relation,
        lhs: f64,
        rhs: f64,
        constant_used: f64,
        tolerance: f64,
    ) -> Self {
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        let passed = match relation {
            Relation::Ge => lhs >= rhs - tolerance * scale,
            Relation::Le => lhs <= rhs + tolerance * scale,
            Relation::Eq => (lhs - rhs).abs() <= tolerance * lhs.abs().max(rhs.abs()),
        };
        let ratio = (rhs != 0.0).then(|| lhs / rhs);
        InequalityReport {
            name: name.into(),
            lhs,
            rhs,
            constant_used,
            ratio,
            passed: passed && lhs.is_finite() && rhs.is_finite(),
            tolerance,
            relation,
            rigorous: true,
        }
    }

    pub fn ge(name: impl Into<String>, lhs: f64, rhs: f64, constant: f64, tol: f64) -> Self {
        Self::new(name, Relation::Ge, lhs, rhs, constant, tol)
    }

    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64, constant: f64, tol: f64) -> Self {
        Self::new(name, Relation::Le, lhs, rhs, constant, tol)
    }

    pub fn eq(name: impl Into<String>, lhs: f64, rhs: f64, constant: f64, tol: f64) -> Self {
        Self::new(name, Relation::Eq, lhs, rhs, constant, tol)
    }

    pub fn with_rigorous(mut self, rigorous: bool) -> Self {
        self.rigorous = rigorous;
        self
    }
}

/// A computed energy bound with its inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyBoundReport {
    pub label: String,
    pub value: f64,
    pub per_particle: f64,
    pub inputs: BTreeMap<String, f64>,
    /// Named intermediate quantities (coefficients, alternative forms).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, f64>,
}

impl EnergyBoundReport {
    /// `count` is the particle number the value is divided by (clamped to ≥ 1).
    pub fn new(label: impl Into<String>, value: f64, count: f64, inputs: &[(&str, f64)]) -> Self {
        EnergyBoundReport {
            label: label.into(),
            value,
            per_particle: value / count.max(1.0),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            details: BTreeMap::new(),
        }
    }

    pub fn detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rules() {
        assert!(InequalityReport::ge("x", 1.0, 1.0 + 1e-9, 1.0, 1e-8).passed);
        assert!(!InequalityReport::ge("x", 1.0, 1.1, 1.0, 1e-8).passed);
        assert!(InequalityReport::le("x", 1.0 + 1e-9, 1.0, 1.0, 1e-8).passed);
        assert!(!InequalityReport::le("x", 2.0, 1.0, 1.0, 1e-8).passed);
        assert!(InequalityReport::eq("x", 0.0, 0.0, 1.0, 1e-8).passed);
        assert!(!InequalityReport::eq("x", 1e-3, 0.0, 1.0, 1e-8).passed);
        assert!(!InequalityReport::ge("x", f64::NAN, 0.0, 1.0, 1e-8).passed);
        assert_eq!(InequalityReport::ge("x", 1.0, 0.0, 1.0, 0.0).ratio, None);
        assert_eq!(InequalityReport::ge("x", 1.0, 4.0, 1.0, 0.0).ratio, Some(0.25));
    }

    #[test]
    fn per_particle_consistent() {
        let r = EnergyBoundReport::new("e", -6.0, 3.0, &[("N", 3.0)]);
        assert_eq!(r.per_particle * 3.0, r.value);
    }
}
