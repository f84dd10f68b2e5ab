//! Oracle harness: symbolic forms against enumeration, property suites and
//! reproduction of the reference tables.

mod suites;
mod tables;

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::counting::derive_counting;
use crate::setexpr::SetExpr;

pub use suites::{run_property_suite, UnknownSuite, SUITES};
pub use tables::{reproduce_calendar, reproduce_table1, Reproduction};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    /// First index where the symbolic value and the oracle disagree.
    FailAt { n: i64, expected: i64, got: Option<i64> },
    /// A law or relation that does not hold.
    Fail { detail: String },
    /// The subject has nothing to check (no symbolic form).
    Skipped { reason: String },
}

impl Outcome {
    pub fn is_pass(&self) -> bool {
        matches!(self, Outcome::Pass)
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Outcome::FailAt { .. } | Outcome::Fail { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub subject: String,
    pub depth: i64,
    pub outcome: Outcome,
    /// Wall time; kept out of the JSON so reports are byte-stable.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn new(subject: impl Into<String>, depth: i64, outcome: Outcome) -> Self {
        VerificationReport { subject: subject.into(), depth, outcome, elapsed: Duration::ZERO }
    }

    pub fn timed(subject: impl Into<String>, depth: i64, f: impl FnOnce() -> Outcome) -> Self {
        let t = Instant::now();
        let outcome = f();
        VerificationReport { subject: subject.into(), depth, outcome, elapsed: t.elapsed() }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn render(&self) -> String {
        let status = match &self.outcome {
            Outcome::Pass => "pass".to_string(),
            Outcome::FailAt { n, expected, got } => match got {
                Some(g) => format!("FAIL at n={n}: expected {expected}, got {g}"),
                None => format!("FAIL at n={n}: expected {expected}, form did not evaluate"),
            },
            Outcome::Fail { detail } => format!("FAIL: {detail}"),
            Outcome::Skipped { reason } => format!("skipped: {reason}"),
        };
        format!("{:<48} depth {:<7} {status}", self.subject, self.depth)
    }
}

/// JSON lines, one report per line.
pub fn to_json_lines(reports: &[VerificationReport]) -> String {
    reports.iter().map(|r| r.to_json_line() + "\n").collect()
}

/// Compares the derived counting form of `e` with direct enumeration for
/// every n up to `depth`.
pub fn verify_counting_form(e: &SetExpr, depth: i64) -> VerificationReport {
    VerificationReport::timed(e.render(false), depth, || {
        let c = derive_counting(e);
        if !c.is_symbolic() {
            return Outcome::Skipped { reason: "no symbolic counting form".into() };
        }
        match c.check(depth) {
            Ok(()) => Outcome::Pass,
            Err(m) => Outcome::FailAt { n: m.n, expected: m.expected as i64, got: m.got },
        }
    })
}

/// Sets with symbolic counting forms, checked by the catalog suite.
pub const CATALOG: &[&str] = &[
    "N",
    "2N",
    "2N-1",
    "2N+1",
    "3N",
    "3N+1",
    "4N-1",
    "5N+3",
    "6N-5",
    "7N+4",
    "7N-2",
    "N^(2)",
    "N^(3)",
    "tri",
    "poly(1,-4,4)",
    "geom(1,2)",
    "geom(3,3)",
    "fib",
    "primes",
    "3N u 4N",
    "N \\ 2N",
    "N \\ 4N",
    "N \\ N^(2)",
    "N \\ {1,2,3}",
    "N^(2) u N^(3)",
    "(2N u 3N) \\ 6N",
    "{2,5}",
];

pub fn catalog() -> Vec<SetExpr> {
    CATALOG.iter().map(|s| SetExpr::parse(s).expect("catalog entry parses")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting_form_reports() {
        let r = verify_counting_form(&SetExpr::parse("2N").unwrap(), 1000);
        assert_eq!(r.outcome, Outcome::Pass);
        let r = verify_counting_form(&SetExpr::parse("{2,5}").unwrap(), 100);
        assert_eq!(r.outcome, Outcome::Pass);
        assert_eq!(derive_counting(&SetExpr::parse("{2,5}").unwrap()).eval(100), Some(2));
        let r = verify_counting_form(&SetExpr::Od2, 100);
        assert!(matches!(r.outcome, Outcome::Skipped { .. }));
    }

    #[test]
    fn json_lines_are_stable() {
        let rs = vec![
            VerificationReport::new("a", 10, Outcome::Pass),
            VerificationReport::new("b", 10, Outcome::FailAt { n: 3, expected: 1, got: Some(2) }),
        ];
        let s = to_json_lines(&rs);
        assert_eq!(
            s,
            "{\"subject\":\"a\",\"depth\":10,\"outcome\":{\"status\":\"pass\"}}\n\
             {\"subject\":\"b\",\"depth\":10,\"outcome\":{\"status\":\"fail-at\",\"n\":3,\"expected\":1,\"got\":2}}\n"
        );
    }

    #[test]
    fn catalog_parses_and_is_symbolic() {
        for e in catalog() {
            assert!(derive_counting(&e).is_symbolic(), "{e}");
        }
        assert!(CATALOG.len() >= 15);
    }
}
