//! CSV ingestion of World Development Indicators extracts.
//!
//! Three shapes are accepted: long (`year, indicator_code, value`), wide
//! (`year` plus one column per indicator) and the DataBank export (one row
//! per indicator with `Series Code` and columns such as `1976 [YR1976]`).
//! Empty cells and the `..` placeholder count as missing.

use std::collections::BTreeMap;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::config::{Layout, Role};
use crate::error::{Error, Result};
use crate::series::{Dataset, TimeSeries};

type Table = BTreeMap<String, BTreeMap<i32, Option<f64>>>;

const CODE_HEADERS: [&str; 4] = ["indicator_code", "indicator", "series code", "series_code"];

fn find(headers: &[String], names: &[&str]) -> Option<usize> {
    headers
        .iter()
        .position(|h| names.iter().any(|n| h.eq_ignore_ascii_case(n)))
}

/// Year of a DataBank column header such as `1976 [YR1976]` or `1976`.
fn year_header(h: &str) -> Option<i32> {
    let head = h.split_whitespace().next()?;
    if head.len() == 4 {
        head.parse().ok()
    } else {
        None
    }
}

pub fn detect_layout(headers: &[String]) -> Result<Layout> {
    let year = find(headers, &["year"]).is_some();
    let code = find(headers, &CODE_HEADERS).is_some();
    let value = find(headers, &["value"]).is_some();
    if year && code && value {
        Ok(Layout::Long)
    } else if year {
        Ok(Layout::Wide)
    } else if code && headers.iter().any(|h| year_header(h).is_some()) {
        Ok(Layout::Databank)
    } else {
        Err(Error::MissingColumn("year".into()))
    }
}

fn cell(raw: &str, row: usize, column: &str) -> Result<Option<f64>> {
    let v = raw.trim();
    if v.is_empty() || v == ".." {
        return Ok(None);
    }
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .map(Some)
        .ok_or_else(|| Error::NonNumericCell {
            row,
            column: column.to_string(),
            value: v.to_string(),
        })
}

fn year_cell(raw: &str, row: usize, column: &str) -> Result<i32> {
    raw.trim().parse().map_err(|_| Error::NonNumericCell {
        row,
        column: column.to_string(),
        value: raw.trim().to_string(),
    })
}

/// Reads the mapped columns into `column → year → value`. Row numbers in
/// errors are 1-based file lines, header included.
fn read_table(text: &str, wanted: &[&str], layout: Layout) -> Result<Table> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = rdr
        .headers()?
        .iter()
        .map(|h| h.trim_start_matches('\u{feff}').to_string())
        .collect();
    let layout = match layout {
        Layout::Auto => detect_layout(&headers)?,
        l => l,
    };
    let mut table: Table = BTreeMap::new();
    let missing = |c: &str| Error::MissingColumn(c.to_string());
    match layout {
        Layout::Long => {
            let yi = find(&headers, &["year"]).ok_or_else(|| missing("year"))?;
            let ci = find(&headers, &CODE_HEADERS).ok_or_else(|| missing("indicator_code"))?;
            let vi = find(&headers, &["value"]).ok_or_else(|| missing("value"))?;
            for (k, rec) in rdr.records().enumerate() {
                let rec = rec?;
                let row = k + 2;
                let code = rec.get(ci).unwrap_or("");
                if !wanted.contains(&code) {
                    continue;
                }
                let year = year_cell(rec.get(yi).unwrap_or(""), row, &headers[yi])?;
                let v = cell(rec.get(vi).unwrap_or(""), row, code)?;
                table.entry(code.to_string()).or_default().insert(year, v);
            }
        }
        Layout::Wide => {
            let yi = find(&headers, &["year"]).ok_or_else(|| missing("year"))?;
            let cols: Vec<(usize, &str)> = wanted
                .iter()
                .filter_map(|w| headers.iter().position(|h| h == w).map(|i| (i, *w)))
                .collect();
            for (_, w) in &cols {
                table.entry(w.to_string()).or_default();
            }
            for (k, rec) in rdr.records().enumerate() {
                let rec = rec?;
                let row = k + 2;
                let year = year_cell(rec.get(yi).unwrap_or(""), row, &headers[yi])?;
                for (i, w) in &cols {
                    let v = cell(rec.get(*i).unwrap_or(""), row, w)?;
                    table.entry(w.to_string()).or_default().insert(year, v);
                }
            }
        }
        Layout::Databank => {
            let ci = find(&headers, &CODE_HEADERS).ok_or_else(|| missing("Series Code"))?;
            let years: Vec<(usize, i32)> = headers
                .iter()
                .enumerate()
                .filter_map(|(i, h)| year_header(h).map(|y| (i, y)))
                .collect();
            for (k, rec) in rdr.records().enumerate() {
                let rec = rec?;
                let row = k + 2;
                let code = rec.get(ci).unwrap_or("");
                if !wanted.contains(&code) {
                    continue;
                }
                let entry = table.entry(code.to_string()).or_default();
                for (i, y) in &years {
                    entry.insert(*y, cell(rec.get(*i).unwrap_or(""), row, &headers[*i])?);
                }
            }
        }
        Layout::Auto => unreachable!(),
    }
    Ok(table)
}

/// Parses CSV text and returns one series per mapped role over `span`,
/// named by [`Role::series_name`] and ordered gdp, fdi, rem, aid, then
/// gdp_growth when mapped.
pub fn parse_wdi_csv(
    text: &str,
    variables: &BTreeMap<String, Role>,
    span: [i32; 2],
    layout: Layout,
) -> Result<Dataset> {
    let wanted: Vec<&str> = variables.keys().map(String::as_str).collect();
    let table = read_table(text, &wanted, layout)?;
    let mut by_role: Vec<(&Role, &String)> = variables.iter().map(|(c, r)| (r, c)).collect();
    by_role.sort();
    let mut series = Vec::with_capacity(by_role.len());
    for (role, column) in by_role {
        let values = table
            .get(column)
            .ok_or_else(|| Error::MissingColumn(column.clone()))?;
        let mut v = Vec::with_capacity((span[1] - span[0] + 1) as usize);
        for year in span[0]..=span[1] {
            match values.get(&year).copied().flatten() {
                Some(x) => v.push(x),
                None => {
                    return Err(Error::GapInYears {
                        series: column.clone(),
                        year,
                    })
                }
            }
        }
        series.push(TimeSeries::new(role.series_name(), span[0], v)?);
    }
    Dataset::new(series)
}

/// Reads a WDI extract from disk; see [`parse_wdi_csv`].
pub fn ingest_wdi_csv(
    path: &Path,
    variables: &BTreeMap<String, Role>,
    span: [i32; 2],
    layout: Layout,
) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)?;
    parse_wdi_csv(&text, variables, span, layout)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
