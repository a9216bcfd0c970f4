//! Outcome of a single identity check.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub paper_ref: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default)]
    pub meta: BTreeMap<String, Value>,
}

impl CheckResult {
    /// `pass` is derived from the residual, never set independently. A NaN
    /// residual fails.
    pub fn new(id: impl Into<String>, reference: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        CheckResult {
            id: id.into(),
            paper_ref: reference.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            meta: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.meta.insert(key.to_string(), value.into());
    }

    /// A failed result carrying an error message.
    pub fn failed(id: impl Into<String>, reference: impl Into<String>, tolerance: f64, err: &crate::Error) -> Self {
        CheckResult::new(id, reference, f64::INFINITY, tolerance).with("error", err.to_string())
    }

    /// Fold several results into one: worst residual relative to its tolerance.
    pub fn combine(id: &str, reference: &str, tolerance: f64, parts: &[CheckResult]) -> CheckResult {
        let mut worst = 0.0f64;
        let mut meta = Vec::new();
        for p in parts {
            let scaled = if p.residual.is_nan() { f64::INFINITY } else { p.residual * tolerance / p.tolerance };
            worst = worst.max(scaled);
            meta.push(serde_json::json!({
                "id": p.id, "residual": p.residual, "tolerance": p.tolerance, "pass": p.pass, "meta": p.meta
            }));
        }
        CheckResult::new(id, reference, worst, tolerance).with("parts", Value::Array(meta))
    }
}

/// max |a - b| / max(|b|) over paired slices, with `floor` guarding an all-zero reference.
pub fn max_rel_diff(a: &[f64], b: &[f64], floor: f64) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(floor);
    let n = a.len().max(b.len());
    let mut worst = 0.0f64;
    for i in 0..n {
        let x = a.get(i).copied().unwrap_or(0.0);
        let y = b.get(i).copied().unwrap_or(0.0);
        worst = worst.max((x - y).abs());
    }
    worst / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_tracks_residual() {
        assert!(CheckResult::new("x", "r", 1e-12, 1e-11).pass);
        assert!(!CheckResult::new("x", "r", 1e-10, 1e-11).pass);
        assert!(!CheckResult::new("x", "r", f64::NAN, 1e-11).pass);
    }

    #[test]
    fn combine_scales_to_common_tolerance() {
        let a = CheckResult::new("a", "r", 5e-9, 1e-8);
        let b = CheckResult::new("b", "r", 2e-12, 1e-11);
        let c = CheckResult::combine("c", "r", 1e-10, &[a, b]);
        assert!((c.residual - 5e-11).abs() < 1e-20);
        assert!(c.pass);
    }

    #[test]
    fn rel_diff_pads_shorter_slice() {
        assert_eq!(max_rel_diff(&[1.0, 2.0], &[1.0, 2.0, 0.0], 1e-300), 0.0);
        assert!((max_rel_diff(&[1.0], &[1.0, 2.0], 1e-300) - 1.0).abs() < 1e-15);
    }
}
