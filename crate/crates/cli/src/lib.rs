//! Library side of the `supertower` binary: curve-file parsing, report
//! rendering and the three commands. Commands return the text to print and
//! an exit code instead of printing, so they can be tested in-process.

pub mod curvefile;
pub mod report;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};
use supertower_core::{analyze, AnalysisOptions, CertifyOptions, UnitConvention, Verdict};

pub use curvefile::{parse_curve, Curve, CurveFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Unreadable file, malformed JSON, or a malformed number.
    Parse(String),
    /// Well-formed input describing an invalid curve.
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Validation(_) => EXIT_VALIDATION,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Validation(_) => "validation",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Validation(m) => m,
        }
    }

    /// One-line JSON diagnostic.
    pub fn diagnostic(&self, file: &Path) -> String {
        let v = json!({ "error": self.kind(), "file": file.display().to_string(), "message": self.message() });
        serde_json::to_string(&v).expect("diagnostic is serializable")
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} error: {}", self.kind(), self.message())
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RunOptions {
    pub assert_splits_over_ten: bool,
    pub convention: UnitConvention,
}

/// What a command produced: the text for stdout, an optional diagnostic for
/// stderr, and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: Option<String>,
    pub code: i32,
}

fn load(path: &Path) -> Result<Curve, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read file: {e}")))?;
    parse_curve(&text)
}

fn failure(path: &Path, err: CliError) -> Outcome {
    Outcome { stdout: String::new(), stderr: Some(err.diagnostic(path)), code: err.exit_code() }
}

pub fn normalize_report(curve: &Curve) -> Result<Value, CliError> {
    let (normalized, record) = curve.model.normalize().map_err(|e| CliError::Validation(e.to_string()))?;
    let mut entries = report::header();
    entries.push(("input", report::model_echo(&curve.model, Some(curve.splits_over_ten))));
    entries.push(("normalization", report::normalization(&curve.model, &normalized, &record)));
    Ok(Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect()))
}

pub fn cmd_normalize(path: &Path) -> Outcome {
    match load(path).and_then(|c| normalize_report(&c)) {
        Ok(v) => Outcome { stdout: report::render(&v), stderr: None, code: EXIT_OK },
        Err(e) => failure(path, e),
    }
}

/// Full analysis of one curve: the report and the verdict.
pub fn analyze_curve(curve: &Curve, options: RunOptions) -> Result<(Value, Verdict), CliError> {
    let opts = AnalysisOptions {
        certify: CertifyOptions {
            assert_splits_over_ten: options.assert_splits_over_ten || curve.splits_over_ten,
            convention: options.convention,
            ..CertifyOptions::default()
        },
    };
    let a = analyze(&curve.model, &opts).map_err(|e| CliError::Validation(e.to_string()))?;
    Ok((report::analysis(&a, curve.splits_over_ten), a.verdict))
}

fn verdict_code(v: &Verdict) -> i32 {
    match v {
        Verdict::Certified => EXIT_OK,
        Verdict::NotCertified(_) | Verdict::Reducible => EXIT_NEGATIVE,
    }
}

pub fn cmd_analyze(path: &Path, options: RunOptions) -> Outcome {
    match load(path).and_then(|c| analyze_curve(&c, options)) {
        Ok((v, verdict)) => Outcome { stdout: report::render(&v), stderr: None, code: verdict_code(&verdict) },
        Err(e) => failure(path, e),
    }
}

/// Per-file result inside a batch.
#[derive(Debug, Clone)]
pub struct BatchEntry {
    pub file: String,
    pub result: Result<(Value, Verdict), CliError>,
}

fn batch_files(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::Parse(format!("cannot read directory: {e}")))?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| CliError::Parse(format!("cannot read directory: {e}")))?;
        let name = entry.file_name();
        if name.to_string_lossy().starts_with('.') || !entry.path().is_file() {
            continue;
        }
        files.push(entry.path());
    }
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    Ok(files)
}

/// Analyzes every regular file of `dir` on a pool of `jobs` threads. The
/// result is ordered by file name.
pub fn run_batch(dir: &Path, jobs: usize, options: RunOptions) -> Result<Vec<BatchEntry>, CliError> {
    let files = batch_files(dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Validation(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        files
            .par_iter()
            .map(|p| BatchEntry {
                file: p.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default(),
                result: load(p).and_then(|c| analyze_curve(&c, options)),
            })
            .collect()
    }))
}

pub fn batch_summary(entries: &[BatchEntry]) -> Value {
    let mut counts = std::collections::BTreeMap::new();
    for v in ["Certified", "NotCertified", "Reducible", "error"] {
        counts.insert(v.to_string(), 0usize);
    }
    let mut failures = Vec::new();
    for e in entries {
        match &e.result {
            Ok((_, v)) => *counts.get_mut(v.as_str()).expect("known verdict") += 1,
            Err(err) => {
                *counts.get_mut("error").expect("error slot") += 1;
                failures.push(json!({ "file": e.file, "error": err.kind(), "message": err.message() }));
            }
        }
    }
    let counts: serde_json::Map<String, Value> =
        counts.into_iter().map(|(k, v)| (k, Value::String(v.to_string()))).collect();
    let mut entries_out = report::header();
    entries_out.extend([
        ("files", Value::String(entries.len().to_string())),
        ("counts", Value::Object(counts)),
        ("failures", Value::Array(failures)),
    ]);
    Value::Object(entries_out.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

/// The combined batch document: the summary and every per-file report.
pub fn batch_document(entries: &[BatchEntry]) -> Value {
    let reports: Vec<Value> = entries
        .iter()
        .map(|e| match &e.result {
            Ok((report, v)) => json!({ "file": e.file, "verdict": v.as_str(), "report": report }),
            Err(err) => json!({ "file": e.file, "verdict": "error", "error": err.kind(), "message": err.message() }),
        })
        .collect();
    json!({
        "schema_version": report::SCHEMA_VERSION,
        "summary": batch_summary(entries),
        "reports": reports,
    })
}

pub fn batch_exit_code(entries: &[BatchEntry]) -> i32 {
    if entries.iter().any(|e| e.result.is_err()) {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    }
}
