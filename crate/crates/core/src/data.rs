//! Price panels: CSV ingestion, returns, and calendar bucketing.
//!
//! Canonical CSV: a header row `date,<ticker>,...`, ISO-8601 dates, `.` as
//! decimal separator, an empty cell for a missing price.

use std::fs;
use std::io::Write;
use std::path::Path;

use chrono::{Datelike, NaiveDate};
use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::panel::ReturnsMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct PricePanel {
    pub dates: Vec<NaiveDate>,
    pub tickers: Vec<String>,
    /// T×N prices, NaN where an asset does not trade.
    pub prices: Array2<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ReturnsKind {
    #[default]
    Simple,
    Log,
}

/// Inclusive calendar range of one bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BucketSpec {
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl BucketSpec {
    pub fn new(start: NaiveDate, end: NaiveDate) -> Result<Self> {
        if start > end {
            return Err(Error::InvalidConfig(format!(
                "bucket start {start} is after end {end}"
            )));
        }
        Ok(Self { start, end })
    }

    /// Consecutive buckets of `years` calendar years each, starting 1 January `first_year`.
    pub fn calendar_years(first_year: i32, years: i32, count: usize) -> Vec<Self> {
        (0..count as i32)
            .filter_map(|i| {
                let y0 = first_year + i * years;
                let start = NaiveDate::from_ymd_opt(y0, 1, 1)?;
                let end = NaiveDate::from_ymd_opt(y0 + years - 1, 12, 31)?;
                Some(Self { start, end })
            })
            .collect()
    }

    /// Last panel date strictly before `start`, the date that fixes membership.
    pub fn membership_date(&self, dates: &[NaiveDate]) -> Option<NaiveDate> {
        dates.iter().rev().find(|d| **d < self.start).copied()
    }

    pub fn label(&self) -> String {
        format!("{}-{}", self.start.year(), self.end.year())
    }
}

pub fn load_prices(path: impl AsRef<Path>) -> Result<PricePanel> {
    let text = fs::read_to_string(path)?;
    parse_prices(&text)
}

pub fn parse_prices(text: &str) -> Result<PricePanel> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| csv_error(&e, 1))?.clone();
    if header.len() < 2 || !header[0].eq_ignore_ascii_case("date") {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "header must be `date,<ticker>,...`".into(),
        });
    }
    let tickers: Vec<String> = header.iter().skip(1).map(str::to_owned).collect();
    let n = tickers.len();

    let mut rows: Vec<(NaiveDate, Vec<f64>)> = Vec::new();
    for (idx, record) in reader.records().enumerate() {
        let line = idx + 2;
        let record = record.map_err(|e| csv_error(&e, line))?;
        if record.len() != n + 1 {
            return Err(Error::Parse {
                line,
                column: record.len().min(n + 1),
                message: format!("expected {} fields, found {}", n + 1, record.len()),
            });
        }
        let date = NaiveDate::parse_from_str(&record[0], "%Y-%m-%d").map_err(|e| Error::Parse {
            line,
            column: 1,
            message: format!("bad date `{}`: {e}", &record[0]),
        })?;
        let values = record
            .iter()
            .skip(1)
            .enumerate()
            .map(|(j, cell)| {
                if cell.is_empty() {
                    Ok(f64::NAN)
                } else {
                    cell.parse::<f64>().map_err(|e| Error::Parse {
                        line,
                        column: j + 2,
                        message: format!("bad number `{cell}`: {e}"),
                    })
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push((date, values));
    }

    if rows.windows(2).any(|w| w[0].0 > w[1].0) {
        log::warn!("price rows are not in date order; sorting");
        rows.sort_by_key(|r| r.0);
    }
    if let Some(w) = rows.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(Error::DuplicateDate(w[0].0));
    }

    let mut prices = Array2::from_elem((rows.len(), n), f64::NAN);
    for (i, (_, values)) in rows.iter().enumerate() {
        for (j, v) in values.iter().enumerate() {
            prices[[i, j]] = *v;
        }
    }
    Ok(PricePanel {
        dates: rows.into_iter().map(|r| r.0).collect(),
        tickers,
        prices,
    })
}

fn csv_error(e: &csv::Error, line: usize) -> Error {
    let line = e.position().map_or(line, |p| p.line() as usize);
    Error::Parse {
        line,
        column: 0,
        message: e.to_string(),
    }
}

/// Canonical CSV text; floats use the shortest representation that parses back exactly.
pub fn format_panel(panel: &PricePanel) -> String {
    let mut out = String::from("date");
    for t in &panel.tickers {
        out.push(',');
        out.push_str(t);
    }
    out.push('\n');
    for (i, d) in panel.dates.iter().enumerate() {
        out.push_str(&d.format("%Y-%m-%d").to_string());
        for v in panel.prices.row(i) {
            out.push(',');
            if !v.is_nan() {
                out.push_str(&v.to_string());
            }
        }
        out.push('\n');
    }
    out
}

pub fn write_panel(panel: &PricePanel, path: impl AsRef<Path>) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(format_panel(panel).as_bytes())?;
    Ok(())
}

/// Period returns, one row per date after the first.
///
/// Rows before an asset's first valid price are NaN. Interior gaps carry the
/// last price forward (zero return). After the last valid price every return
/// is exactly zero, so a de-listed asset stops contributing variance.
pub fn compute_returns(panel: &PricePanel, kind: ReturnsKind) -> Result<ReturnsMatrix> {
    let (t, n) = panel.prices.dim();
    if t < 2 {
        return Err(Error::EmptyPanel { rows: t, cols: n });
    }
    let mut out = Array2::from_elem((t - 1, n), f64::NAN);
    for j in 0..n {
        let col = panel.prices.column(j);
        let valid = |v: f64| v.is_finite() && v > 0.0;
        let Some(first) = col.iter().position(|&v| valid(v)) else {
            continue;
        };
        let last = col.iter().rposition(|&v| valid(v)).unwrap_or(first);
        let mut prev = col[first];
        for i in (first + 1)..t {
            let r = if i > last {
                0.0
            } else {
                let cur = if valid(col[i]) { col[i] } else { prev };
                let r = match kind {
                    ReturnsKind::Simple => cur / prev - 1.0,
                    ReturnsKind::Log => (cur / prev).ln(),
                };
                prev = cur;
                r
            };
            out[[i - 1, j]] = r;
        }
    }
    ReturnsMatrix::with_labels(out, panel.tickers.clone(), Some(panel.dates[1..].to_vec()))
}

/// One return panel per bucket, holding the assets with a valid price on the
/// bucket's membership date and following them to the bucket's end.
pub fn bucketize(panel: &PricePanel, buckets: &[BucketSpec]) -> Result<Vec<ReturnsMatrix>> {
    bucketize_with(panel, buckets, ReturnsKind::Simple)
}

pub fn bucketize_with(
    panel: &PricePanel,
    buckets: &[BucketSpec],
    kind: ReturnsKind,
) -> Result<Vec<ReturnsMatrix>> {
    buckets
        .iter()
        .map(|spec| bucket_returns(panel, spec, kind))
        .collect()
}

fn bucket_returns(panel: &PricePanel, spec: &BucketSpec, kind: ReturnsKind) -> Result<ReturnsMatrix> {
    let empty = Error::EmptyBucket {
        start: spec.start,
        end: spec.end,
    };
    // with no earlier date the first in-bucket date fixes membership
    let anchor = match spec.membership_date(&panel.dates) {
        Some(d) => panel.dates.iter().position(|x| *x == d),
        None => panel.dates.iter().position(|x| *x >= spec.start),
    }
    .ok_or_else(|| empty.clone())?;
    let stop = panel
        .dates
        .iter()
        .rposition(|d| *d <= spec.end)
        .ok_or_else(|| empty.clone())?;
    if stop <= anchor {
        return Err(empty);
    }
    let members: Vec<usize> = (0..panel.tickers.len())
        .filter(|&j| {
            let v = panel.prices[[anchor, j]];
            v.is_finite() && v > 0.0
        })
        .collect();
    if members.is_empty() {
        return Err(empty);
    }
    let sub = PricePanel {
        dates: panel.dates[anchor..=stop].to_vec(),
        tickers: members.iter().map(|&j| panel.tickers[j].clone()).collect(),
        prices: Array2::from_shape_fn((stop - anchor + 1, members.len()), |(i, k)| {
            panel.prices[[anchor + i, members[k]]]
        }),
    };
    compute_returns(&sub, kind)
}

pub fn load_bucket_specs(path: impl AsRef<Path>) -> Result<Vec<BucketSpec>> {
    let text = fs::read_to_string(path)?;
    parse_bucket_specs(&text)
}

pub fn parse_bucket_specs(text: &str) -> Result<Vec<BucketSpec>> {
    let specs: Vec<BucketSpec> = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    for s in &specs {
        BucketSpec::new(s.start, s.end)?;
    }
    Ok(specs)
}
