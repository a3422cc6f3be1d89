//! File-driven evaluation: survey z-tests and metric CSVs.
//!
//! | file            | header                 |
//! |-----------------|------------------------|
//! | survey          | `question,response`    |
//! | regression      | `pred,gold` (numbers)  |
//! | stance labels   | `pred,gold` (labels)   |
//! | summaries       | `candidate,reference`  |

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use perspectra_core::evalstats::{
    bootstrap_ztest, classification_scores, mse, rouge2, ClassificationScores, MetricError, Question, StatsError,
    SurveySample, ZTestResult,
};
use perspectra_core::stance::StanceLabel;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("cannot read `{}`: {message}", path.display())]
    Read { path: PathBuf, message: String },
    #[error("`{}`: expected header `{expected}`, found `{found}`", path.display())]
    Header {
        path: PathBuf,
        expected: &'static str,
        found: String,
    },
    #[error("`{}` row {row}: {message}", path.display())]
    Row { path: PathBuf, row: usize, message: String },
    #[error("question `{question}`: {source}")]
    Stats {
        question: &'static str,
        #[source]
        source: StatsError,
    },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// Reads a two-column CSV, checking the header, and returns the rows with
/// their 1-based data row numbers.
fn read_pairs(path: &Path, expected: &'static str) -> Result<Vec<(usize, String, String)>, EvalError> {
    let read_err = |e: csv::Error| EvalError::Read {
        path: path.to_path_buf(),
        message: e.to_string(),
    };
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(read_err)?;
    let found = reader.headers().map_err(read_err)?.iter().collect::<Vec<_>>().join(",");
    if found != expected {
        return Err(EvalError::Header {
            path: path.to_path_buf(),
            expected,
            found,
        });
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| EvalError::Row {
            path: path.to_path_buf(),
            row: i + 1,
            message: e.to_string(),
        })?;
        rows.push((i + 1, record[0].to_string(), record[1].to_string()));
    }
    Ok(rows)
}

fn row_err(path: &Path, row: usize, message: impl Into<String>) -> EvalError {
    EvalError::Row {
        path: path.to_path_buf(),
        row,
        message: message.into(),
    }
}

/// Groups survey rows by question, in the canonical question order.
pub fn read_survey(path: &Path) -> Result<Vec<SurveySample>, EvalError> {
    let mut by_question: BTreeMap<Question, Vec<u8>> = BTreeMap::new();
    for (row, q, r) in read_pairs(path, "question,response")? {
        let question: Question = q.parse().map_err(|e: StatsError| row_err(path, row, e.to_string()))?;
        let response = match r.as_str() {
            "0" => 0,
            "1" => 1,
            other => return Err(row_err(path, row, format!("response `{other}` is not 0 or 1"))),
        };
        by_question.entry(question).or_default().push(response);
    }
    Ok(by_question
        .into_iter()
        .map(|(q, v)| SurveySample::new(q, v).expect("values checked above"))
        .collect())
}

#[derive(Debug, Clone, Copy)]
pub struct ZTestOptions {
    pub p0: f64,
    /// Replicate size; `None` uses each question's response count.
    pub sample_size: Option<usize>,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for ZTestOptions {
    fn default() -> Self {
        ZTestOptions {
            p0: 0.5,
            sample_size: None,
            repeats: 1000,
            seed: 0,
        }
    }
}

pub fn ztest_report(samples: &[SurveySample], opts: ZTestOptions) -> Result<BTreeMap<String, ZTestResult>, EvalError> {
    let mut out = BTreeMap::new();
    for s in samples {
        let n = opts.sample_size.unwrap_or(s.len());
        let result = bootstrap_ztest(s, opts.p0, n, opts.repeats, opts.seed).map_err(|source| EvalError::Stats {
            question: s.question.as_str(),
            source,
        })?;
        out.insert(s.question.as_str().to_string(), result);
    }
    Ok(out)
}

fn parse_f64(path: &Path, row: usize, s: &str) -> Result<f64, EvalError> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| row_err(path, row, format!("`{s}` is not a finite number")))
}

pub fn mse_from_csv(path: &Path) -> Result<f64, EvalError> {
    let rows = read_pairs(path, "pred,gold")?;
    let mut pred = Vec::with_capacity(rows.len());
    let mut gold = Vec::with_capacity(rows.len());
    for (row, p, g) in rows {
        pred.push(parse_f64(path, row, &p)?);
        gold.push(parse_f64(path, row, &g)?);
    }
    Ok(mse(&pred, &gold)?)
}

pub fn stance_scores_from_csv(path: &Path) -> Result<ClassificationScores, EvalError> {
    let rows = read_pairs(path, "pred,gold")?;
    let mut pred = Vec::with_capacity(rows.len());
    let mut gold = Vec::with_capacity(rows.len());
    for (row, p, g) in rows {
        let parse = |s: &str| s.parse::<StanceLabel>().map_err(|e| row_err(path, row, e.to_string()));
        pred.push(parse(&p)?);
        gold.push(parse(&g)?);
    }
    Ok(classification_scores(&pred, &gold)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RougeSummary {
    pub n: usize,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Mean ROUGE-2 over candidate/reference pairs.
pub fn rouge_from_csv(path: &Path) -> Result<RougeSummary, EvalError> {
    let rows = read_pairs(path, "candidate,reference")?;
    if rows.is_empty() {
        return Err(MetricError::Empty.into());
    }
    let n = rows.len();
    let (mut p, mut r, mut f) = (0.0, 0.0, 0.0);
    for (_, c, reference) in &rows {
        let s = rouge2(c, reference);
        p += s.precision;
        r += s.recall;
        f += s.f1;
    }
    let n_f = n as f64;
    Ok(RougeSummary {
        n,
        precision: p / n_f,
        recall: r / n_f,
        f1: f / n_f,
    })
}

/// Combined report; absent sections are omitted from the JSON.
#[derive(Debug, Default, Serialize)]
pub struct EvalReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ztest: Option<BTreeMap<String, ZTestResult>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mse: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stance: Option<ClassificationScores>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rouge2: Option<RougeSummary>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn survey_groups_by_question() {
        let f = file("question,response\npreference,1\norganization,0\npreference,0\nPreference,1\n");
        let s = read_survey(f.path()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].question, Question::Organization);
        assert_eq!(s[1].responses(), [1, 0, 1]);
    }

    #[test]
    fn survey_row_errors() {
        let f = file("question,response\npreference,2\n");
        assert!(matches!(read_survey(f.path()), Err(EvalError::Row { row: 1, .. })));
        let f = file("question,response\nspeed,1\n");
        assert!(matches!(read_survey(f.path()), Err(EvalError::Row { row: 1, .. })));
        let f = file("q,r\npreference,1\n");
        assert!(matches!(read_survey(f.path()), Err(EvalError::Header { .. })));
    }

    #[test]
    fn report_equals_library_call() {
        let mut csv = String::from("question,response\n");
        for i in 0..40 {
            csv.push_str(&format!("informativeness,{}\n", u8::from(i % 3 != 0)));
        }
        let f = file(&csv);
        let samples = read_survey(f.path()).unwrap();
        let opts = ZTestOptions { seed: 4, repeats: 50, ..Default::default() };
        let report = ztest_report(&samples, opts).unwrap();
        let direct = bootstrap_ztest(&samples[0], 0.5, 40, 50, 4).unwrap();
        assert_eq!(report["informativeness"], direct);
    }

    #[test]
    fn metric_files() {
        assert_eq!(mse_from_csv(file("pred,gold\n0,1\n1,1\n").path()).unwrap(), 0.5);
        let s = stance_scores_from_csv(file("pred,gold\nsupport,support\nrefute,neutral\n").path()).unwrap();
        assert_eq!(s.accuracy, 0.5);
        let r = rouge_from_csv(file("candidate,reference\na b c d,a b c e\n").path()).unwrap();
        assert!((r.f1 - 2.0 / 3.0).abs() < 1e-12);
        assert!(matches!(mse_from_csv(file("pred,gold\nx,1\n").path()), Err(EvalError::Row { row: 1, .. })));
    }
}
