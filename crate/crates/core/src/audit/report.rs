use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{AuditCase, AuditReport, CaseParams, IdentityId, Verdict};
use crate::error::Error;
use crate::numerics::GaussianRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Jsonl,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "jsonl" => Ok(ReportFormat::Jsonl),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::Parse { pos: 0, msg: format!("unknown report format {other:?}") }),
        }
    }
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    identity: IdentityId,
    params: &'a CaseParams,
    reference: &'a Option<GaussianRational>,
    claimed: &'a Option<GaussianRational>,
    residual: &'a Option<GaussianRational>,
    verdict: Verdict,
    error: &'a Option<String>,
}

pub const CSV_HEADER: &str = "identity,n,m,t,a,d,reference,claimed,residual,verdict";

fn quoted(x: &Option<GaussianRational>) -> String {
    x.as_ref().map(|v| format!("\"{v}\"")).unwrap_or_default()
}

fn csv_line(case: &AuditCase) -> String {
    let p = &case.params;
    format!(
        "{},{},{},{},\"{}\",\"{}\",{},{},{},{}",
        case.identity,
        p.n,
        p.m.map(|m| m.to_string()).unwrap_or_default(),
        p.t,
        p.a,
        p.d,
        quoted(&case.reference),
        quoted(&case.claimed),
        quoted(&case.residual),
        case.verdict
    )
}

/// Writes one record per case. Output depends only on the report contents.
pub fn emit_report(report: &AuditReport, format: ReportFormat, out: &mut impl Write) -> io::Result<()> {
    match format {
        ReportFormat::Jsonl => {
            for case in &report.cases {
                let record = JsonRecord {
                    identity: case.identity,
                    params: &case.params,
                    reference: &case.reference,
                    claimed: &case.claimed,
                    residual: &case.residual,
                    verdict: case.verdict,
                    error: &case.error,
                };
                serde_json::to_writer(&mut *out, &record)?;
                out.write_all(b"\n")?;
            }
        }
        ReportFormat::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for case in &report.cases {
                writeln!(out, "{}", csv_line(case))?;
            }
        }
    }
    out.flush()
}

/// Identifies a case across runs: identity, `n`, `m`, `t` and the scalar pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ExpectedKey {
    pub identity: String,
    pub n: u32,
    pub m: Option<usize>,
    pub t: u64,
    pub a: String,
    pub d: String,
}

impl ExpectedKey {
    fn of(case: &AuditCase) -> Self {
        ExpectedKey {
            identity: case.identity.name().to_string(),
            n: case.params.n,
            m: case.params.m,
            t: case.params.t,
            a: case.params.a.to_string(),
            d: case.params.d.to_string(),
        }
    }
}

#[derive(Deserialize)]
struct ExpectedParams {
    n: u32,
    m: Option<usize>,
    t: u64,
    a: GaussianRational,
    d: GaussianRational,
}

#[derive(Deserialize)]
struct ExpectedRecord {
    identity: IdentityId,
    params: ExpectedParams,
    verdict: Verdict,
}

fn bad_data(line: usize, msg: impl std::fmt::Display) -> io::Error {
    io::Error::new(io::ErrorKind::InvalidData, format!("expected-verdict file line {line}: {msg}"))
}

/// Reads an expected-verdict file: either a JSONL report or a CSV report (detected
/// by its header). Only the case coordinates and verdicts are used.
pub fn read_expected(input: impl BufRead) -> io::Result<BTreeMap<ExpectedKey, Verdict>> {
    let mut out = BTreeMap::new();
    let mut csv = false;
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if idx == 0 && line.trim() == CSV_HEADER {
            csv = true;
            continue;
        }
        let (key, verdict) = if csv {
            parse_csv_line(&line).ok_or_else(|| bad_data(lineno, "malformed CSV record"))?
        } else {
            let rec: ExpectedRecord = serde_json::from_str(&line).map_err(|e| bad_data(lineno, e))?;
            let key = ExpectedKey {
                identity: rec.identity.name().to_string(),
                n: rec.params.n,
                m: rec.params.m,
                t: rec.params.t,
                a: rec.params.a.to_string(),
                d: rec.params.d.to_string(),
            };
            (key, rec.verdict)
        };
        out.insert(key, verdict);
    }
    Ok(out)
}

fn parse_csv_line(line: &str) -> Option<(ExpectedKey, Verdict)> {
    // Canonical scalars never contain commas or quotes.
    let fields: Vec<&str> = line.split(',').map(|f| f.trim_matches('"')).collect();
    if fields.len() != 10 {
        return None;
    }
    let identity: IdentityId = fields[0].parse().ok()?;
    let m = if fields[2].is_empty() { None } else { Some(fields[2].parse().ok()?) };
    let a: GaussianRational = fields[4].parse().ok()?;
    let d: GaussianRational = fields[5].parse().ok()?;
    let verdict = serde_json::from_value(serde_json::Value::String(fields[9].to_string())).ok()?;
    Some((
        ExpectedKey {
            identity: identity.name().to_string(),
            n: fields[1].parse().ok()?,
            m,
            t: fields[3].parse().ok()?,
            a: a.to_string(),
            d: d.to_string(),
        },
        verdict,
    ))
}

/// A case whose verdict differs from the expectation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unexpected {
    pub key: ExpectedKey,
    pub expected: Verdict,
    pub actual: Verdict,
}

/// Cases whose verdict differs from `expected`. Cases absent from `expected` are unconstrained.
pub fn compare_expected(report: &AuditReport, expected: &BTreeMap<ExpectedKey, Verdict>) -> Vec<Unexpected> {
    report
        .cases
        .iter()
        .filter_map(|case| {
            let key = ExpectedKey::of(case);
            let &want = expected.get(&key)?;
            (want != case.verdict).then_some(Unexpected { key, expected: want, actual: case.verdict })
        })
        .collect()
}
