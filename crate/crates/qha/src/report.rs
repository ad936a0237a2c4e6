//! Check results and their JSON and table renderings.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ReportOnly,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ReportOnly => "report-only",
        }
    }
}

/// One measured quantity. For thresholded checks `status` is `pass` exactly
/// when `measured <= threshold`; a NaN measurement fails.
///
/// The runtime is shown in the table but left out of the JSON, so that JSON
/// output is bit-identical across runs with the same configuration and seed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub status: Status,
    pub measured: f64,
    pub threshold: Option<f64>,
    #[serde(skip)]
    pub runtime: Duration,
}

impl CheckResult {
    pub fn thresholded(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        let status = if measured <= threshold { Status::Pass } else { Status::Fail };
        Self {
            name: name.into(),
            status,
            measured,
            threshold: Some(threshold),
            runtime: Duration::ZERO,
        }
    }

    pub fn report_only(name: impl Into<String>, measured: f64) -> Self {
        Self {
            name: name.into(),
            status: Status::ReportOnly,
            measured,
            threshold: None,
            runtime: Duration::ZERO,
        }
    }

    pub fn with_runtime(mut self, runtime: Duration) -> Self {
        self.runtime = runtime;
        self
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

/// Runs `f`, attributing its wall time to every result it returns.
pub fn timed(f: impl FnOnce() -> Vec<CheckResult>) -> Vec<CheckResult> {
    let start = Instant::now();
    let results = f();
    let elapsed = start.elapsed();
    results.into_iter().map(|r| r.with_runtime(elapsed)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, seed: u64, checks: Vec<CheckResult>) -> Self {
        Self {
            suite: suite.into(),
            seed,
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        !self.checks.iter().any(CheckResult::failed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| c.failed())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<width$}  {:<11}  {:>14}  {:>14}  {:>10}",
            "check", "status", "measured", "threshold", "time [ms]"
        );
        let _ = writeln!(out, "{}", "-".repeat(width + 57));
        for c in &self.checks {
            let threshold = c.threshold.map_or_else(|| "-".to_string(), |t| format!("{t:.6e}"));
            let _ = writeln!(
                out,
                "{:<width$}  {:<11}  {:>14.6e}  {:>14}  {:>10.1}",
                c.name,
                c.status.label(),
                c.measured,
                threshold,
                c.runtime.as_secs_f64() * 1e3
            );
        }
        let failed = self.failures().count();
        let thresholded = self.checks.iter().filter(|c| c.threshold.is_some()).count();
        let _ = writeln!(
            out,
            "{}: {} of {} thresholded checks passed",
            self.suite,
            thresholded - failed,
            thresholded
        );
        out
    }
}
