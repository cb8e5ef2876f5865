//! Reports: JSON or CSV, both parseable back into the same results.
//!
//! CSV metadata travels in `#` comment lines ahead of the header row
//! `check_id,input,lhs,rhs,ratio,pass,ms`.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{CheckResult, Pass, SuiteError};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Parse(format!("unknown format {s:?} (json|csv)"))),
        }
    }
}

/// A `(check, input)` pair that raised an error instead of producing a row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorRow {
    pub check_id: String,
    pub input: String,
    pub error: String,
}

impl From<&SuiteError> for ErrorRow {
    fn from(e: &SuiteError) -> Self {
        ErrorRow { check_id: e.check_id.clone(), input: e.input.clone(), error: e.error.to_string() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Totals {
    pub proved_exact: usize,
    pub ratio_only: usize,
    pub failed: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    /// Seconds since the epoch; absent in deterministic mode.
    #[serde(default)]
    pub generated_at: Option<u64>,
    pub corpus: String,
    pub checks: Vec<String>,
    pub total_ms: u64,
    pub totals: Totals,
    pub results: Vec<CheckResult>,
    #[serde(default)]
    pub errors: Vec<ErrorRow>,
}

impl Report {
    /// Splits suite output into rows and errors. `deterministic` drops the
    /// timestamp and zeroes every timing.
    pub fn new(
        corpus: impl Into<String>,
        checks: &[&str],
        outcomes: Vec<std::result::Result<CheckResult, SuiteError>>,
        deterministic: bool,
    ) -> Self {
        let mut results = Vec::new();
        let mut errors = Vec::new();
        for o in outcomes {
            match o {
                Ok(mut r) => {
                    if deterministic {
                        r.elapsed_ms = 0;
                    }
                    results.push(r)
                }
                Err(e) => errors.push(ErrorRow::from(&e)),
            }
        }
        let generated_at = (!deterministic).then(|| {
            std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
        });
        let mut report = Report {
            tool: "sumprod".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            generated_at,
            corpus: corpus.into(),
            checks: checks.iter().map(|s| s.to_string()).collect(),
            total_ms: 0,
            totals: Totals::default(),
            results,
            errors,
        };
        report.recount();
        report
    }

    fn recount(&mut self) {
        let count = |p: Pass| self.results.iter().filter(|r| r.pass == p).count();
        self.totals = Totals {
            proved_exact: count(Pass::ProvedExact),
            ratio_only: count(Pass::RatioOnly),
            failed: count(Pass::Failed),
            errors: self.errors.len(),
        };
        self.total_ms = self.results.iter().map(|r| r.elapsed_ms).sum();
    }

    /// Rows plus errors; one per requested applicable pair.
    pub fn len(&self) -> usize {
        self.results.len() + self.errors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn has_failures(&self) -> bool {
        self.totals.failed > 0
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        let _ = writeln!(out, "# tool: {}", self.tool);
        let _ = writeln!(out, "# version: {}", self.version);
        if let Some(t) = self.generated_at {
            let _ = writeln!(out, "# generated_at: {t}");
        }
        let _ = writeln!(out, "# corpus: {}", self.corpus);
        let _ = writeln!(out, "# checks: {}", self.checks.join(","));
        for e in &self.errors {
            let _ = writeln!(out, "# error: {}", serde_json::to_string(e).map_err(|e| Error::Parse(e.to_string()))?);
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["check_id", "input", "lhs", "rhs", "ratio", "pass", "ms"]).map_err(csv_err)?;
        for r in &self.results {
            w.write_record([
                r.check_id.as_str(),
                r.input.as_str(),
                r.lhs.as_str(),
                r.rhs.as_str(),
                &r.ratio.to_string(),
                r.pass.as_str(),
                &r.elapsed_ms.to_string(),
            ])
            .map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
        out.push_str(&String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?);
        Ok(out)
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

/// Writes `report` to `path`, or returns it as a string when `path` is `None`.
pub fn emit_report(report: &Report, format: Format, path: Option<&Path>) -> Result<String> {
    let text = report.render(format)?;
    if let Some(p) = path {
        std::fs::write(p, &text)?;
    }
    Ok(text)
}

pub fn parse_json(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("report json: {e}")))
}

pub fn parse_csv(text: &str) -> Result<Report> {
    let mut report = Report {
        tool: String::new(),
        version: String::new(),
        generated_at: None,
        corpus: String::new(),
        checks: Vec::new(),
        total_ms: 0,
        totals: Totals::default(),
        results: Vec::new(),
        errors: Vec::new(),
    };
    let mut body = String::new();
    for line in text.lines() {
        let Some(meta) = line.strip_prefix('#') else {
            body.push_str(line);
            body.push('\n');
            continue;
        };
        let (key, value) = meta.trim_start().split_once(':').ok_or_else(|| Error::Parse(format!("bad header {line:?}")))?;
        let value = value.strip_prefix(' ').unwrap_or(value);
        match key {
            "tool" => report.tool = value.into(),
            "version" => report.version = value.into(),
            "generated_at" => report.generated_at = Some(value.parse().map_err(|_| Error::Parse(format!("bad timestamp {value:?}")))?),
            "corpus" => report.corpus = value.into(),
            "checks" => report.checks = value.split(',').filter(|s| !s.is_empty()).map(String::from).collect(),
            "error" => report.errors.push(serde_json::from_str(value).map_err(|e| Error::Parse(e.to_string()))?),
            _ => return Err(Error::Parse(format!("unknown header {key:?}"))),
        }
    }
    let mut rd = csv::Reader::from_reader(body.as_bytes());
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().collect::<Vec<_>>() != ["check_id", "input", "lhs", "rhs", "ratio", "pass", "ms"] {
        return Err(Error::Parse(format!("unexpected csv header {header:?}")));
    }
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let field = |i: usize| rec.get(i).unwrap_or_default().to_string();
        report.results.push(CheckResult {
            check_id: field(0),
            input: field(1),
            lhs: field(2),
            rhs: field(3),
            ratio: field(4).parse().map_err(|_| Error::Parse(format!("bad ratio {:?}", field(4))))?,
            pass: field(5).parse()?,
            elapsed_ms: field(6).parse().map_err(|_| Error::Parse(format!("bad ms {:?}", field(6))))?,
        });
    }
    report.recount();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(id: &str, ratio: f64, pass: Pass) -> CheckResult {
        CheckResult {
            check_id: id.into(),
            input: "geo(q=2,n=4,start=1)".into(),
            lhs: "729/4".into(),
            rhs: "855".into(),
            ratio,
            pass,
            elapsed_ms: 3,
        }
    }

    fn sample() -> Report {
        let rows = vec![
            Ok(row("lemma_key", 729.0 / 4.0 / 855.0, Pass::ProvedExact)),
            Ok(row("elekes", 0.1 + 0.2, Pass::RatioOnly)),
            Ok(row("trip", f64::INFINITY, Pass::RatioOnly)),
            Err(SuiteError { check_id: "prop7".into(), input: "x, \"y\"".into(), error: Error::Parse("bad, worse".into()) }),
        ];
        Report::new("mixed", &["lemma_key", "elekes", "trip", "prop7"], rows, true)
    }

    #[test]
    fn json_round_trip() {
        let r = sample();
        let back = parse_json(&r.to_json().unwrap()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.totals.proved_exact, 1);
        assert_eq!(back.len(), 4);
    }

    #[test]
    fn csv_round_trip() {
        let r = sample();
        let text = r.to_csv().unwrap();
        assert!(text.contains("check_id,input,lhs,rhs,ratio,pass,ms"));
        assert_eq!(parse_csv(&text).unwrap(), r);
    }

    #[test]
    fn empty_report() {
        let r = Report::new("none", &[], Vec::new(), false);
        assert!(r.generated_at.is_some());
        for f in [Format::Json, Format::Csv] {
            let text = r.render(f).unwrap();
            let back = if f == Format::Json { parse_json(&text) } else { parse_csv(&text) }.unwrap();
            assert!(back.is_empty());
            assert_eq!(back, r);
        }
    }

    #[test]
    fn field_order_is_stable() {
        let text = sample().to_json().unwrap();
        let pos = |k: &str| text.find(&format!("\"{k}\"")).unwrap();
        assert!(pos("tool") < pos("version") && pos("version") < pos("corpus") && pos("corpus") < pos("results"));
        let first = text.find("\"check_id\"").unwrap();
        assert!(first < text[first..].find("\"pass\"").unwrap() + first);
    }

    #[test]
    fn writes_file() {
        let dir = std::env::temp_dir().join(format!("sumprod-report-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("r.csv");
        let text = emit_report(&sample(), Format::Csv, Some(&path)).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text);
        assert!(emit_report(&sample(), Format::Csv, Some(&dir.join("no/such/dir.csv"))).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
