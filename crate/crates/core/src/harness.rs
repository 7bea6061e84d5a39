//! Golden-file test harness.
//!
//! A testcase is a `NAME.json` scenario next to a `NAME.reference` file
//! holding previously verified simulator output. Running the harness
//! re-simulates every input and compares the fresh output against the stored
//! reference through the tolerance-aware comparator. Discovery is by naming
//! convention, so cloning a testcase is a plain file copy.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::numdiff::{compare, ComparisonReport};
use crate::ode::integrate;
use crate::output::format_result;
use crate::scenario::parse_scenario;
use crate::Tolerance;

pub const REFERENCE_EXTENSION: &str = "reference";

/// One input/reference pair. The reference path is recorded whether or not
/// the file exists; absence surfaces later as a missing-reference failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestCase {
    /// Input file name, e.g. `testcase-1.json`.
    pub name: String,
    pub input_path: PathBuf,
    pub reference_path: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TestStatus {
    Pass,
    /// The comparator found differences.
    Fail(ComparisonReport),
    /// No reference file: a cloned-but-unblessed test must be visible,
    /// not silently skipped.
    MissingReference,
    /// The input could not be read, parsed or integrated.
    RunError(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestResult {
    pub name: String,
    pub status: TestStatus,
}

impl TestResult {
    pub fn passed(&self) -> bool {
        matches!(self.status, TestStatus::Pass)
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("cannot read test directory {dir}: {source}")]
    UnreadableDirectory { dir: PathBuf, source: io::Error },
    #[error("no such test: {0}")]
    UnknownTest(String),
    #[error("no tests discovered in {0}")]
    NoTests(PathBuf),
}

/// Lists the `*.json` testcases in `dir`, sorted by file name.
pub fn discover(dir: &Path) -> Result<Vec<TestCase>, HarnessError> {
    let entries = fs::read_dir(dir).map_err(|source| HarnessError::UnreadableDirectory {
        dir: dir.to_path_buf(),
        source,
    })?;

    let mut cases = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|source| HarnessError::UnreadableDirectory {
            dir: dir.to_path_buf(),
            source,
        })?;
        let path = entry.path();
        if path.extension().and_then(|e| e.to_str()) != Some("json") || !path.is_file() {
            continue;
        }
        let name = path
            .file_name()
            .expect("a *.json path has a file name")
            .to_string_lossy()
            .into_owned();
        let reference_path = path.with_extension(REFERENCE_EXTENSION);
        cases.push(TestCase {
            name,
            input_path: path,
            reference_path,
        });
    }
    cases.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(cases)
}

/// Simulates one input file and returns its formatted final state. This is
/// the same code path the `run` subcommand uses, so harness verdicts and
/// interactive runs can never disagree.
pub fn simulate_input(input_path: &Path) -> Result<String, String> {
    let text = fs::read_to_string(input_path)
        .map_err(|e| format!("cannot read {}: {e}", input_path.display()))?;
    let scenario = parse_scenario(&text).map_err(|e| e.to_string())?;
    let trajectory = integrate(&scenario).map_err(|e| e.to_string())?;
    Ok(format_result(&trajectory.final_state()))
}

/// Runs one testcase: simulate, then compare against the stored reference.
pub fn run_test(case: &TestCase, tolerance: &Tolerance) -> TestResult {
    let status = match simulate_input(&case.input_path) {
        Err(diagnostic) => TestStatus::RunError(diagnostic),
        Ok(output) => match fs::read_to_string(&case.reference_path) {
            Err(e) if e.kind() == io::ErrorKind::NotFound => TestStatus::MissingReference,
            Err(e) => TestStatus::RunError(format!(
                "cannot read {}: {e}",
                case.reference_path.display()
            )),
            Ok(reference) => {
                let report = compare(&reference, &output, tolerance);
                if report.is_equal() {
                    TestStatus::Pass
                } else {
                    TestStatus::Fail(report)
                }
            }
        },
    };
    TestResult {
        name: case.name.clone(),
        status,
    }
}

fn table_line(result: &TestResult) -> String {
    let flag = if result.passed() { '.' } else { 'X' };
    format!(" {flag}    {}\n", result.name)
}

/// Renders the report: one ` .    name` / ` X    name` line per test in
/// discovery order, then one diagnostic block per non-passing test.
pub fn render_report(results: &[TestResult]) -> String {
    let mut out = String::new();
    for result in results {
        out.push_str(&table_line(result));
    }
    for result in results {
        match &result.status {
            TestStatus::Pass => {}
            TestStatus::Fail(report) => {
                out.push('\n');
                out.push_str(&format!("{}: output differs from reference\n", result.name));
                out.push_str(&report.describe());
            }
            TestStatus::MissingReference => {
                out.push('\n');
                out.push_str(&format!("{}: missing reference file\n", result.name));
            }
            TestStatus::RunError(diagnostic) => {
                out.push('\n');
                out.push_str(&format!("{}: error: {diagnostic}\n", result.name));
            }
        }
    }
    out
}

/// Runs every discovered test. Tests execute in parallel but results are
/// buffered and emitted in discovery order, so the report bytes never depend
/// on scheduling. Exit code 0 means every test passed.
pub fn run_all(dir: &Path, tolerance: &Tolerance) -> Result<(String, i32), HarnessError> {
    let cases = discover(dir)?;
    let results: Vec<TestResult> = cases
        .par_iter()
        .map(|case| run_test(case, tolerance))
        .collect();
    let code = if results.iter().all(TestResult::passed) {
        0
    } else {
        1
    };
    Ok((render_report(&results), code))
}

/// Overwrites (or creates) the reference files for the selected tests with
/// current simulator output. With no names, every discovered test is
/// blessed. Returns one line per updated file; a test whose simulation
/// fails is skipped and reported with exit code 1.
pub fn bless(dir: &Path, names: &[String]) -> Result<(String, i32), HarnessError> {
    let all = discover(dir)?;
    let selected: Vec<TestCase> = if names.is_empty() {
        all
    } else {
        names
            .iter()
            .map(|name| {
                all.iter()
                    .find(|case| &case.name == name)
                    .cloned()
                    .ok_or_else(|| HarnessError::UnknownTest(name.clone()))
            })
            .collect::<Result<_, _>>()?
    };

    let mut out = String::new();
    let mut code = 0;
    for case in &selected {
        match simulate_input(&case.input_path) {
            Ok(output) => match fs::write(&case.reference_path, output) {
                Ok(()) => {
                    let reference = case
                        .reference_path
                        .file_name()
                        .expect("reference paths have file names")
                        .to_string_lossy();
                    out.push_str(&format!("blessed {reference}\n"));
                }
                Err(e) => {
                    out.push_str(&format!(
                        "error {}: cannot write {}: {e}\n",
                        case.name,
                        case.reference_path.display()
                    ));
                    code = 1;
                }
            },
            Err(diagnostic) => {
                out.push_str(&format!("error {}: {diagnostic}\n", case.name));
                code = 1;
            }
        }
    }
    Ok((out, code))
}
