//! Machine-readable experiment reports: CSV and JSON emitters.
//!
//! Both serializations are byte-stable for a fixed configuration and seed:
//! parameters are echoed in sorted order, floating-point values carry 17
//! significant digits, and wall time is deliberately excluded from the
//! emitted bytes (it goes to the console instead).

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

/// One named scalar result judged against a tolerance.
#[derive(Debug, Clone)]
pub struct Check {
    pub metric: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `value <= tolerance` (deviation-style metric).
    pub fn at_most(metric: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            metric: metric.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }

    /// Passes when `value >= tolerance` (bound-style metric).
    pub fn at_least(metric: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            metric: metric.into(),
            value,
            tolerance,
            pass: value >= tolerance,
        }
    }

    /// Passes when `value == tolerance` exactly (bit-exact metric).
    pub fn exactly(metric: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            metric: metric.into(),
            value,
            tolerance,
            pass: value == tolerance,
        }
    }
}

/// Structured record of an experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub experiment: String,
    /// Parameter echo, sorted by key.
    pub params: Vec<(String, f64)>,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
    /// Wall time of the run; printed, never serialized.
    pub wall_ms: f64,
}

impl ExperimentReport {
    pub fn new(experiment: impl Into<String>, mut params: Vec<(String, f64)>, seed: u64) -> Self {
        params.sort_by(|a, b| a.0.cmp(&b.0));
        ExperimentReport {
            experiment: experiment.into(),
            params,
            seed,
            checks: Vec::new(),
            passed: true,
            wall_ms: 0.0,
        }
    }

    pub fn push(&mut self, check: Check) {
        self.passed &= check.pass;
        self.checks.push(check);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(Error::Config(format!(
                "unknown format '{other}', expected csv or json"
            ))),
        }
    }
}

/// 17 significant digits; round-trips f64 exactly.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn render(report: &ExperimentReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => render_csv(report),
        ReportFormat::Json => render_json(report),
    }
}

fn render_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("metric,value,tolerance,pass\n");
    out.push_str(&format!("experiment.{},0,0,true\n", report.experiment));
    out.push_str(&format!("param.seed,{},0,true\n", report.seed));
    for (k, v) in &report.params {
        out.push_str(&format!("param.{k},{},0,true\n", fmt_float(*v)));
    }
    for c in &report.checks {
        out.push_str(&format!(
            "{},{},{},{}\n",
            c.metric,
            fmt_float(c.value),
            fmt_float(c.tolerance),
            c.pass
        ));
    }
    out.push_str(&format!(
        "all.pass,{},1,{}\n",
        u8::from(report.passed),
        report.passed
    ));
    out
}

fn render_json(report: &ExperimentReport) -> String {
    let mut out = String::from("{\n");
    out.push_str(&format!("  \"experiment\": \"{}\",\n", report.experiment));
    out.push_str(&format!("  \"seed\": {},\n", report.seed));
    out.push_str("  \"params\": {");
    for (i, (k, v)) in report.params.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("\n    \"{k}\": {}", fmt_float(*v)));
    }
    out.push_str("\n  },\n  \"checks\": [");
    for (i, c) in report.checks.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!(
            "\n    {{\"metric\": \"{}\", \"value\": {}, \"tolerance\": {}, \"pass\": {}}}",
            c.metric,
            fmt_float(c.value),
            fmt_float(c.tolerance),
            c.pass
        ));
    }
    out.push_str(&format!("\n  ],\n  \"pass\": {}\n}}\n", report.passed));
    out
}

/// Writes the rendered report to `path`.
pub fn emit(report: &ExperimentReport, format: ReportFormat, path: &Path) -> Result<()> {
    let body = render(report, format);
    let mut file = std::fs::File::create(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    file.write_all(body.as_bytes())
        .map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
    Ok(())
}
