//! CSV formats for citation lists, percentile curves and indicator rankings.
//!
//! All files are UTF-8, comma separated, with a header row:
//!
//! ```text
//! citation list  id,citations[,secondary_citations][,actor]
//! curve          percentile,count
//! ranking        name,field,period,p,p_top50,p_top10,p_top1
//! ```
//!
//! Numbers are written with 17 significant digits (`%.17g`), which reads
//! back to the same `f64`.

use std::io::{Read, Write};

use thiserror::Error;

use crate::empirical::{CitationList, PaperRecord};
use crate::leiden::{ExtendedRow, IndicatorRow};
use crate::lognormal::{CurvePoint, PercentileCurve};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Line { line: u64, message: String },
    #[error("{0}")]
    File(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn at_line(record: &csv::StringRecord, message: impl Into<String>) -> FormatError {
    FormatError::Line {
        line: record.position().map_or(0, |p| p.line()),
        message: message.into(),
    }
}

/// `%.17g`: 17 significant digits, trailing zeros removed, exponent form
/// outside `[1e-5, 1e17)`.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn parse_f64(record: &csv::StringRecord, idx: usize, name: &str) -> Result<f64, FormatError> {
    let raw = record.get(idx).unwrap_or("").trim();
    raw.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| at_line(record, format!("{name}: expected a number, got '{raw}'")))
}

fn optional(record: &csv::StringRecord, idx: Option<usize>) -> Option<&str> {
    idx.and_then(|i| record.get(i))
        .map(str::trim)
        .filter(|s| !s.is_empty())
}

fn reader<R: Read>(input: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::Headers)
        .from_reader(input)
}

fn writer<W: Write>(output: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(output)
}

fn column(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h == name)
}

fn require_columns(headers: &csv::StringRecord, expected: &[&str]) -> Result<(), FormatError> {
    let got: Vec<&str> = headers.iter().take(expected.len()).collect();
    if got != expected {
        return Err(FormatError::Line {
            line: 1,
            message: format!(
                "header must start with '{}', found '{}'",
                expected.join(","),
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    Ok(())
}

pub fn read_citation_list<R: Read>(input: R) -> Result<CitationList, FormatError> {
    let mut rdr = reader(input);
    let headers = rdr.headers()?.clone();
    require_columns(&headers, &["id", "citations"])?;
    let secondary = column(&headers, "secondary_citations");
    let actor = column(&headers, "actor");
    for h in headers.iter().skip(2) {
        if h != "secondary_citations" && h != "actor" {
            return Err(FormatError::Line {
                line: 1,
                message: format!("unknown column '{h}'"),
            });
        }
    }
    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let citations = parse_f64(&row, 1, "citations")?;
        if citations < 0.0 {
            return Err(at_line(
                &row,
                format!("citations must be nonnegative, got {citations}"),
            ));
        }
        let secondary_citations = optional(&row, secondary)
            .map(|s| {
                s.parse::<u64>().map_err(|_| {
                    at_line(
                        &row,
                        format!("secondary_citations: expected a nonnegative integer, got '{s}'"),
                    )
                })
            })
            .transpose()?;
        records.push(PaperRecord {
            id: optional(&row, Some(0)).map(str::to_owned),
            citations,
            secondary_citations,
            actor: optional(&row, actor).map(str::to_owned),
        });
    }
    CitationList::new(records).map_err(|e| FormatError::File(e.to_string()))
}

pub fn write_citation_list<W: Write>(list: &CitationList, output: W) -> Result<(), FormatError> {
    let has_secondary = list
        .records()
        .iter()
        .any(|r| r.secondary_citations.is_some());
    let has_actor = list.records().iter().any(|r| r.actor.is_some());
    let mut w = writer(output);
    let mut header = vec!["id", "citations"];
    if has_secondary {
        header.push("secondary_citations");
    }
    if has_actor {
        header.push("actor");
    }
    w.write_record(&header)?;
    for (i, r) in list.records().iter().enumerate() {
        let mut row = vec![
            r.id.clone().unwrap_or_else(|| (i + 1).to_string()),
            format_number(r.citations),
        ];
        if has_secondary {
            row.push(
                r.secondary_citations
                    .map(|s| s.to_string())
                    .unwrap_or_default(),
            );
        }
        if has_actor {
            row.push(r.actor.clone().unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_curve<R: Read>(input: R) -> Result<PercentileCurve, FormatError> {
    let mut rdr = reader(input);
    let headers = rdr.headers()?.clone();
    require_columns(&headers, &["percentile", "count"])?;
    let mut points = Vec::new();
    for row in rdr.records() {
        let row = row?;
        points.push(CurvePoint {
            percentile: parse_f64(&row, 0, "percentile")?,
            count: parse_f64(&row, 1, "count")?,
        });
    }
    PercentileCurve::new(points).map_err(|e| FormatError::File(e.to_string()))
}

pub fn write_curve<W: Write>(curve: &PercentileCurve, output: W) -> Result<(), FormatError> {
    let mut w = writer(output);
    w.write_record(["percentile", "count"])?;
    for p in curve.points() {
        w.write_record([format_number(p.percentile), format_number(p.count)])?;
    }
    w.flush()?;
    Ok(())
}

pub const RANKING_COLUMNS: [&str; 7] = [
    "name", "field", "period", "p", "p_top50", "p_top10", "p_top1",
];

/// Reads a ranking file. Header problems fail the whole file; a malformed
/// row only fails that row.
pub fn read_rankings<R: Read>(
    input: R,
) -> Result<Vec<Result<IndicatorRow, FormatError>>, FormatError> {
    let mut rdr = reader(input);
    let headers = rdr.headers()?.clone();
    require_columns(&headers, &RANKING_COLUMNS)?;
    let mut rows = Vec::new();
    for row in rdr.records() {
        let row = row?;
        rows.push(parse_ranking_row(&row));
    }
    Ok(rows)
}

fn parse_ranking_row(row: &csv::StringRecord) -> Result<IndicatorRow, FormatError> {
    let name = optional(row, Some(0))
        .ok_or_else(|| at_line(row, "name is empty"))?
        .to_owned();
    let opt_num = |idx: usize, col: &str| -> Result<Option<f64>, FormatError> {
        match optional(row, Some(idx)) {
            None => Ok(None),
            Some(_) => parse_f64(row, idx, col).map(Some),
        }
    };
    let ind = IndicatorRow {
        field: optional(row, Some(1)).map(str::to_owned),
        period: optional(row, Some(2)).map(str::to_owned),
        p_total: opt_num(3, "p")?,
        p_top50: opt_num(4, "p_top50")?,
        p_top10: parse_f64(row, 5, "p_top10")?,
        p_top1: parse_f64(row, 6, "p_top1")?,
        name,
    };
    ind.validate().map_err(|e| at_line(row, e.to_string()))?;
    Ok(ind)
}

fn target_column(t: f64) -> String {
    format!("p_top{t}")
}

/// Writes input columns, then `alpha,coefficient`, then one `p_top<t>`
/// column per target.
pub fn write_extended<W: Write>(
    rows: &[ExtendedRow],
    targets: &[f64],
    output: W,
) -> Result<(), FormatError> {
    let mut w = writer(output);
    let mut header: Vec<String> = RANKING_COLUMNS.iter().map(|s| s.to_string()).collect();
    header.push("alpha".into());
    header.push("coefficient".into());
    header.extend(targets.iter().map(|&t| target_column(t)));
    w.write_record(&header)?;
    for r in rows {
        let b = &r.base;
        let mut row = vec![
            b.name.clone(),
            b.field.clone().unwrap_or_default(),
            b.period.clone().unwrap_or_default(),
            b.p_total.map(format_number).unwrap_or_default(),
            b.p_top50.map(format_number).unwrap_or_default(),
            format_number(b.p_top10),
            format_number(b.p_top1),
            format_number(r.fit.exponent),
            format_number(r.fit.coefficient),
        ];
        row.extend(r.extended.iter().map(|e| format_number(e.value)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_rankings<W: Write>(rows: &[IndicatorRow], output: W) -> Result<(), FormatError> {
    let mut w = writer(output);
    w.write_record(RANKING_COLUMNS)?;
    for b in rows {
        w.write_record([
            b.name.clone(),
            b.field.clone().unwrap_or_default(),
            b.period.clone().unwrap_or_default(),
            b.p_total.map(format_number).unwrap_or_default(),
            b.p_top50.map(format_number).unwrap_or_default(),
            format_number(b.p_top10),
            format_number(b.p_top1),
        ])?;
    }
    w.flush()?;
    Ok(())
}
