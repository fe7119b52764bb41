//! Named end-to-end scenarios with embedded expectations. Each case runs
//! the relevant algorithms, compares against its expected values and
//! produces a text report, a JSON report and DOT drawings.

mod cases;
pub mod models;

use std::fmt::Display;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::distributions::DEFAULT_TOL;
use crate::error::{Error, Result};

pub use cases::CASES;

/// Knobs shared by all cases.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CaseSettings {
    /// Tolerance of floating-point independence tests.
    pub tol: f64,
    /// Master seed of every randomized step.
    pub seed: u64,
}

impl Default for CaseSettings {
    fn default() -> Self {
        CaseSettings { tol: DEFAULT_TOL, seed: 0 }
    }
}

/// One compared quantity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CaseResult {
    pub name: String,
    pub title: String,
    pub checks: Vec<Check>,
    /// Narrative lines of the text report.
    pub body: Vec<String>,
    /// Structured data for the JSON report, in insertion order.
    pub data: Map<String, Value>,
    /// DOT drawings as `(file name, contents)`.
    pub dots: Vec<(String, String)>,
}

impl CaseResult {
    fn new(name: &str, title: &str) -> Self {
        CaseResult {
            name: name.to_string(),
            title: title.to_string(),
            checks: Vec::new(),
            body: Vec::new(),
            data: Map::new(),
            dots: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn check(&mut self, name: &str, expected: impl Display, actual: impl Display, passed: bool) {
        self.checks.push(Check {
            name: name.to_string(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            passed,
        });
    }

    pub fn check_eq<T: Display + PartialEq>(&mut self, name: &str, expected: T, actual: T) {
        let passed = expected == actual;
        self.check(name, expected, actual, passed);
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.body.push(text.into());
    }

    pub fn lines<I: IntoIterator<Item = S>, S: Into<String>>(&mut self, heading: &str, items: I) {
        self.body.push(format!("{heading}:"));
        let before = self.body.len();
        self.body.extend(items.into_iter().map(|s| format!("  {}", s.into())));
        if self.body.len() == before {
            self.body.push("  (none)".into());
        }
    }

    pub fn data(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(key.to_string(), serde_json::to_value(value).expect("serializable case data"));
    }

    pub fn dot(&mut self, file: impl Into<String>, contents: String) {
        self.dots.push((file.into(), contents));
    }

    pub fn text_report(&self) -> String {
        let mut out = format!("case {}: {}\n\n", self.name, self.title);
        for l in &self.body {
            out += l;
            out.push('\n');
        }
        out += "\nchecks:\n";
        for c in &self.checks {
            let tag = if c.passed { "pass" } else { "FAIL" };
            if c.expected == c.actual {
                out += &format!("  [{tag}] {}: {}\n", c.name, c.actual);
            } else {
                out += &format!("  [{tag}] {}: expected {}, got {}\n", c.name, c.expected, c.actual);
            }
        }
        out += &format!("\nresult: {}\n", if self.passed() { "pass" } else { "FAIL" });
        out
    }

    pub fn json_report(&self) -> String {
        let v = serde_json::json!({
            "case": self.name,
            "title": self.title,
            "passed": self.passed(),
            "checks": self.checks,
            "data": self.data,
            "dot_files": self.dots.iter().map(|(f, _)| f).collect::<Vec<_>>(),
        });
        serde_json::to_string_pretty(&v).expect("serializable report") + "\n"
    }

    /// Writes `report.txt`, `report.json` and the DOT files into `dir`,
    /// creating it if needed. Returns the written paths in order.
    pub fn write(&self, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
        let dir = dir.as_ref();
        let io = |p: &Path, e: std::io::Error| Error::Io { path: p.display().to_string(), msg: e.to_string() };
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let mut files = vec![
            ("report.txt".to_string(), self.text_report()),
            ("report.json".to_string(), self.json_report()),
        ];
        files.extend(self.dots.iter().cloned());
        let mut written = Vec::with_capacity(files.len());
        for (name, contents) in files {
            let path = dir.join(name);
            std::fs::write(&path, contents).map_err(|e| io(&path, e))?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Registered case names with one-line summaries, in registry order.
pub fn case_list() -> Vec<(&'static str, &'static str)> {
    CASES.iter().map(|c| (c.name, c.title)).collect()
}

/// Runs the named case.
pub fn run_case(name: &str, settings: &CaseSettings) -> Result<CaseResult> {
    let case = CASES.iter().find(|c| c.name == name).ok_or_else(|| Error::UnknownCase {
        name: name.to_string(),
        available: CASES.iter().map(|c| c.name).collect::<Vec<_>>().join(", "),
    })?;
    let mut r = CaseResult::new(case.name, case.title);
    (case.run)(&mut r, settings)?;
    Ok(r)
}
