//! Suite reports as JSON or CSV.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use super::CheckResult;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::InvalidParam(format!("unknown report format `{other}`"))),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Json => "json",
            ReportFormat::Csv => "csv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportEntry {
    pub name: String,
    pub paper_ref: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub validity_count: usize,
    pub pass: bool,
    pub notes: Vec<String>,
}

impl From<&CheckResult> for ReportEntry {
    fn from(r: &CheckResult) -> Self {
        ReportEntry {
            name: r.name.clone(),
            paper_ref: r.paper_ref.clone(),
            max_residual: r.max_residual,
            tolerance: r.tolerance,
            validity_count: r.validity_count,
            pass: r.pass,
            notes: r.notes.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub s: u32,
    pub depth: u32,
    pub checks: Vec<ReportEntry>,
    pub passed: bool,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    name: &'a str,
    paper_ref: &'a str,
    max_residual: f64,
    tolerance: f64,
    validity_count: usize,
    pass: bool,
    notes: String,
}

impl Report {
    /// Entries keep the order of `results`; `passed` is true for an empty list.
    pub fn new(suite: impl Into<String>, s: u32, depth: u32, results: &[CheckResult]) -> Self {
        let checks: Vec<ReportEntry> = results.iter().map(ReportEntry::from).collect();
        let passed = checks.iter().all(|c| c.pass);
        Report {
            suite: suite.into(),
            s,
            depth,
            checks,
            passed,
        }
    }

    /// All notes starting with `erratum:`.
    pub fn errata(&self) -> Vec<&str> {
        self.checks
            .iter()
            .flat_map(|c| c.notes.iter())
            .filter(|n| n.starts_with("erratum:"))
            .map(String::as_str)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per check; notes are joined with `; `.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in &self.checks {
            w.serialize(CsvRow {
                name: &c.name,
                paper_ref: &c.paper_ref,
                max_residual: c.max_residual,
                tolerance: c.tolerance,
                validity_count: c.validity_count,
                pass: c.pass,
                notes: c.notes.join("; "),
            })
            .expect("writing to memory");
        }
        if self.checks.is_empty() {
            w.write_record(["name", "paper_ref", "max_residual", "tolerance", "validity_count", "pass", "notes"])
                .expect("writing to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf-8")
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => self.to_csv(),
        }
    }

    pub fn write(&self, path: &Path, format: ReportFormat) -> Result<()> {
        std::fs::write(path, self.render(format)).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}
