//! Structured pass/fail records produced by the checkers.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// One failing case with the values that witness the failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub case: String,
    pub witness: BTreeMap<String, String>,
}

/// Outcome of a checker run. The verdict is `pass` exactly when no case failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub checker: String,
    pub params: BTreeMap<String, String>,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub verdict: Verdict,
    /// Free-form remarks on what was and was not checked.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn new(checker: impl Into<String>) -> Self {
        VerificationReport {
            checker: checker.into(),
            params: BTreeMap::new(),
            cases: 0,
            failures: Vec::new(),
            verdict: Verdict::Pass,
            notes: Vec::new(),
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Display) -> Self {
        self.params.insert(key.to_owned(), value.to_string());
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    /// Counts one case; on failure stores the witness built by `witness`.
    pub fn check<F>(&mut self, case: impl Display, ok: bool, witness: F)
    where
        F: FnOnce() -> Vec<(&'static str, String)>,
    {
        self.cases += 1;
        if !ok {
            self.fail(case, witness());
        }
    }

    fn fail(&mut self, case: impl Display, witness: Vec<(&'static str, String)>) {
        self.failures.push(Failure {
            case: case.to_string(),
            witness: witness.into_iter().map(|(k, v)| (k.to_owned(), v)).collect(),
        });
        self.verdict = Verdict::Fail;
    }

    /// Folds the cases and failures of `other` into `self`, keeping `self`'s name.
    pub fn absorb(&mut self, other: VerificationReport) {
        self.cases += other.cases;
        if !other.failures.is_empty() {
            self.verdict = Verdict::Fail;
        }
        self.failures.extend(other.failures);
        self.notes.extend(other.notes);
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_tracks_failures() {
        let mut r = VerificationReport::new("demo").with_param("k", 3);
        r.check("a", true, Vec::new);
        assert!(r.passed());
        r.check("b", false, || vec![("x", "1/2".into())]);
        assert!(!r.passed());
        assert_eq!(r.cases, 2);
        assert_eq!(r.failures[0].witness["x"], "1/2");

        let mut total = VerificationReport::new("all");
        total.absorb(r);
        assert_eq!(total.verdict, Verdict::Fail);
        assert_eq!(total.cases, 2);
    }
}
