//! Serialization of tables and suite results.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::Format;
use crate::error::{Error, Result};
use crate::verify::VerificationSuiteResult;

pub const SCHEMA_VERSION: u32 = 1;

/// Seventeen significant digits, enough to re-parse every `f64` exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table with a fixed header.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "{}", self.header.join(","))?;
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(|f| escape(f)).collect();
            writeln!(w, "{}", fields.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("utf-8")
    }
}

fn escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Splits one CSV line, honouring quoted fields.
pub fn parse_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match (c, quoted) {
            ('"', true) if chars.peek() == Some(&'"') => {
                cur.push('"');
                chars.next();
            }
            ('"', _) => quoted = !quoted,
            (',', false) => fields.push(std::mem::take(&mut cur)),
            _ => cur.push(c),
        }
    }
    fields.push(cur);
    fields
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suites: Vec<VerificationSuiteResult>,
    pub passed: usize,
    pub failures: usize,
    pub inconclusive: usize,
}

impl SuiteReport {
    pub fn new(mut suites: Vec<VerificationSuiteResult>) -> Self {
        suites.sort_by_key(|s| s.suite);
        Self {
            schema_version: SCHEMA_VERSION,
            passed: suites.iter().map(|s| s.passed).sum(),
            failures: suites.iter().map(|s| s.failed).sum(),
            inconclusive: suites.iter().map(|s| s.inconclusive).sum(),
            suites,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse("suite report", "<json>", e.to_string()))
    }

    pub fn summary_line(&self) -> String {
        let names: Vec<&str> = self.suites.iter().map(|s| s.suite.name()).collect();
        format!(
            "{}: {} passed, {} failures, {} inconclusive",
            names.join(","),
            self.passed,
            self.failures,
            self.inconclusive
        )
    }
}

pub fn suite_table(results: &[VerificationSuiteResult]) -> Table {
    let mut t = Table::new(vec!["suite", "case", "status", "margin", "detail"]);
    for r in results {
        for c in &r.cases {
            t.push(vec![
                r.suite.name().to_string(),
                c.name.clone(),
                serde_json::to_value(c.status)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_string))
                    .unwrap_or_default(),
                c.margin.map(fmt_float).unwrap_or_default(),
                c.detail.clone(),
            ]);
        }
    }
    t
}

/// Renders suite results; the report is refused when there are none.
pub fn emit_report(results: &[VerificationSuiteResult], format: Format) -> Result<String> {
    if results.is_empty() {
        return Err(Error::InvalidArgument("no suite results to report".into()));
    }
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&SuiteReport::new(results.to_vec()))
                .map_err(|e| Error::Io(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut sorted = results.to_vec();
            sorted.sort_by_key(|s| s.suite);
            suite_table(&sorted).to_csv()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{CaseResult, CaseStatus, SuiteId};

    fn result(status: CaseStatus) -> VerificationSuiteResult {
        VerificationSuiteResult::new(
            SuiteId::ThreeGap,
            vec![CaseResult {
                name: "z=0.1".into(),
                status,
                margin: Some(0.1),
                detail: "a, \"quoted\" detail".into(),
            }],
        )
    }

    #[test]
    fn floats_round_trip_exactly() {
        for x in [0.1, 1.0 / 3.0, 1e-300, 0.999_999_999_999_999_9, 5e-324, 123456.789] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn passing_suite_reports_zero_failures() {
        let json = emit_report(&[result(CaseStatus::Pass)], Format::Json).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["failures"], 0);
        assert_eq!(v["schema_version"], SCHEMA_VERSION);
        let back = SuiteReport::from_json(&json).unwrap();
        assert_eq!(back.suites[0], result(CaseStatus::Pass));
    }

    #[test]
    fn empty_results_are_refused() {
        assert!(emit_report(&[], Format::Json).is_err());
    }

    #[test]
    fn csv_quotes_detail() {
        let csv = emit_report(&[result(CaseStatus::Fail)], Format::Csv).unwrap();
        let line = csv.lines().nth(1).unwrap();
        let fields = parse_csv_line(line);
        assert_eq!(fields[2], "fail");
        assert_eq!(fields[3].parse::<f64>().unwrap(), 0.1);
        assert_eq!(fields[4], "a, \"quoted\" detail");
    }
}
