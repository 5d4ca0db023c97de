use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;

/// Whether a check passes when its residual is below or above the threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Below,
    Above,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub group: &'static str,
    pub relation: &'static str,
    /// `None` when the computation itself failed; see `error`.
    pub residual: Option<f64>,
    pub tol: f64,
    pub expect: Expect,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckRecord {
    pub fn from_result(id: String, group: &'static str, relation: &'static str, tol: f64, expect: Expect, r: Result<f64>) -> Self {
        match r {
            Ok(v) => {
                let pass = v.is_finite()
                    && match expect {
                        Expect::Below => v < tol,
                        Expect::Above => v > tol,
                    };
                CheckRecord { id, group, relation, residual: Some(v), tol, expect, pass, error: None }
            }
            Err(e) => CheckRecord { id, group, relation, residual: None, tol, expect, pass: false, error: Some(e.to_string()) },
        }
    }
}

/// Ordered, deterministic record of one suite run. No timings are stored so
/// that repeated runs serialise identically.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub precision: u32,
    pub truncation: usize,
    pub params: Vec<(String, String)>,
    pub checks: Vec<CheckRecord>,
    pub passed: usize,
    pub failed: usize,
}

impl Report {
    pub fn new(command: &str, seed: u64, precision: u32, truncation: usize, params: Vec<(String, String)>, mut checks: Vec<CheckRecord>) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let passed = checks.iter().filter(|c| c.pass).count();
        let failed = checks.len() - passed;
        Report { command: command.to_string(), seed, precision, truncation, params, checks, passed, failed }
    }

    pub fn all_pass(&self) -> bool {
        self.failed == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let verdict = if c.pass { "PASS" } else { "FAIL" };
            let cmp = match c.expect {
                Expect::Below => "<",
                Expect::Above => ">",
            };
            match (&c.residual, &c.error) {
                (Some(r), _) => writeln!(out, "{verdict}  {:<32} {r:.3e} {cmp} {:.0e}  {}", c.id, c.tol, c.relation),
                (None, Some(e)) => writeln!(out, "{verdict}  {:<32} error: {e}", c.id),
                (None, None) => writeln!(out, "{verdict}  {}", c.id),
            }
            .expect("write to string");
        }
        writeln!(out, "{} passed, {} failed (seed {})", self.passed, self.failed, self.seed).expect("write to string");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn records_and_ordering() {
        let ok = CheckRecord::from_result("b".into(), "g", "r", 1e-3, Expect::Below, Ok(1e-5));
        let above = CheckRecord::from_result("c".into(), "g", "r", 1e-3, Expect::Above, Ok(1e-5));
        let err = CheckRecord::from_result("a".into(), "g", "r", 1e-3, Expect::Below, Err(Error::PoleHit("x")));
        let nan = CheckRecord::from_result("d".into(), "g", "r", 1e-3, Expect::Below, Ok(f64::NAN));
        assert!(ok.pass && !above.pass && !err.pass && !nan.pass);
        let r = Report::new("t", 1, 64, 32, vec![], vec![ok, above, err, nan]);
        assert_eq!(r.checks.iter().map(|c| c.id.as_str()).collect::<Vec<_>>(), ["a", "b", "c", "d"]);
        assert_eq!((r.passed, r.failed), (1, 3));
        assert!(r.to_json().contains("\"error\": \"pole hit in x\""));
        assert!(r.to_text().starts_with("FAIL  a"));
    }
}
