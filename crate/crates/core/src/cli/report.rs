use std::fmt::Write as _;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// The check does not apply to this input.
    Skipped,
    /// A measured value shown without an assertion.
    Reported,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

/// Outcome of a verification suite. Checks keep their insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

#[derive(Serialize)]
struct Record<'a> {
    suite: &'a str,
    id: &'a str,
    expected: &'a str,
    computed: &'a str,
    pass: bool,
    status: Status,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>) -> Self {
        SuiteReport { suite: suite.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, id: impl Into<String>, expected: impl ToString, computed: impl ToString, status: Status) {
        self.checks.push(Check { id: id.into(), expected: expected.to_string(), computed: computed.to_string(), status });
    }

    /// Record an assertion: passes iff the rendered values agree.
    pub fn compare(&mut self, id: impl Into<String>, expected: impl ToString, computed: impl ToString) {
        let (e, c) = (expected.to_string(), computed.to_string());
        let status = if e == c { Status::Pass } else { Status::Fail };
        self.push(id, e, c, status);
    }

    /// Record an assertion whose outcome was decided by the caller.
    pub fn assert(&mut self, id: impl Into<String>, expected: impl ToString, computed: impl ToString, ok: bool) {
        self.push(id, expected, computed, if ok { Status::Pass } else { Status::Fail });
    }

    pub fn skip(&mut self, id: impl Into<String>, reason: impl ToString) {
        self.push(id, "-", reason, Status::Skipped);
    }

    pub fn report(&mut self, id: impl Into<String>, expected: impl ToString, computed: impl ToString) {
        self.push(id, expected, computed, Status::Reported);
    }

    pub fn extend(&mut self, other: SuiteReport) {
        self.checks.extend(other.checks);
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn summary(&self) -> String {
        format!(
            "{}: {} passed, {} failed, {} skipped, {} reported",
            self.suite,
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped),
            self.count(Status::Reported)
        )
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skipped => "SKIP",
                Status::Reported => "INFO",
            };
            let _ = writeln!(out, "{tag} {} expected={} computed={}", c.id, c.expected, c.computed);
        }
        let _ = writeln!(out, "{}", self.summary());
        out
    }

    /// One JSON object per line with fields `suite, id, expected, computed,
    /// pass, status`.
    pub fn render_machine(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let rec = Record {
                suite: &self.suite,
                id: &c.id,
                expected: &c.expected,
                computed: &c.computed,
                pass: c.status != Status::Fail,
                status: c.status,
            };
            out.push_str(&serde_json::to_string(&rec).expect("serializable record"));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_both_formats() {
        let mut r = SuiteReport::new("demo");
        r.compare("one", 1, 1);
        r.compare("two", 2, 3);
        r.skip("three", "empty");
        assert!(!r.passed());
        assert_eq!(r.failures().count(), 1);
        let text = r.render_text();
        assert!(text.contains("PASS one expected=1 computed=1"));
        assert!(text.contains("demo: 1 passed, 1 failed, 1 skipped, 0 reported"));
        let lines: Vec<serde_json::Value> =
            r.render_machine().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1]["pass"], false);
        assert_eq!(lines[1]["suite"], "demo");
        assert_eq!(lines[2]["status"], "skipped");
    }
}
