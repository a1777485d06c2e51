//! Outcome of an identity-verification sweep.

use std::fmt;

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    /// Parameters of the checked algebra, e.g. `p=3`.
    pub context: String,
    pub seed: u64,
    pub exhaustive_cases: usize,
    pub random_cases: usize,
    pub failures: usize,
    /// The first failure found, if any.
    pub counterexample: Option<String>,
    pub passed: bool,
}

impl Report {
    pub fn new(check: &str, context: String, seed: u64, exhaustive_cases: usize, random_cases: usize) -> Report {
        Report {
            check: check.to_string(),
            context,
            seed,
            exhaustive_cases,
            random_cases,
            failures: 0,
            counterexample: None,
            passed: true,
        }
    }

    pub fn fail(&mut self, description: String) {
        self.failures += 1;
        self.passed = false;
        self.counterexample.get_or_insert(description);
    }

    /// Records failures in order.
    pub fn absorb(&mut self, failures: Vec<String>) {
        for f in failures {
            self.fail(f);
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "check={} {} seed={} exhaustive={} random={} failures={} result={}",
            self.check,
            self.context,
            self.seed,
            self.exhaustive_cases,
            self.random_cases,
            self.failures,
            if self.passed { "pass" } else { "fail" }
        )?;
        if let Some(c) = &self.counterexample {
            write!(f, "\ncounterexample: {c}")?;
        }
        Ok(())
    }
}
