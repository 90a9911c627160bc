//! CSV ingestion of empirical price series.
//!
//! Input files are header-full CSVs with one date column (ISO `YYYY-MM-DD`)
//! and one price column, picked out by name so files with extra columns
//! (open/high/low/volume, ...) load as-is. Validation is strict: dates must
//! be strictly increasing, prices strictly positive and finite, and every
//! complaint carries the file line it came from.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use chrono::NaiveDate;

use crate::error::{Error, Result};
use crate::fmt::float17;

/// A validated date/price history.
#[derive(Clone, Debug, PartialEq)]
pub struct PriceSeries {
    dates: Vec<NaiveDate>,
    prices: Vec<f64>,
    label: String,
}

impl PriceSeries {
    /// Wrap pre-parsed columns, running the same validation as the CSV
    /// loader (equal lengths, non-empty, strictly increasing dates,
    /// positive finite prices).
    pub fn new(dates: Vec<NaiveDate>, prices: Vec<f64>, label: impl Into<String>) -> Result<Self> {
        if dates.len() != prices.len() {
            return Err(Error::InvalidConfig(format!(
                "{} dates vs {} prices",
                dates.len(),
                prices.len()
            )));
        }
        if dates.is_empty() {
            return Err(Error::EmptyInput);
        }
        for (i, pair) in dates.windows(2).enumerate() {
            if pair[0] >= pair[1] {
                return Err(Error::RowValidation {
                    line: i as u64 + 2,
                    message: format!(
                        "dates must be strictly increasing ({} then {})",
                        pair[0], pair[1]
                    ),
                });
            }
        }
        for (i, &p) in prices.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 {
                return Err(Error::RowValidation {
                    line: i as u64 + 2,
                    message: format!("price must be positive and finite, got {p}"),
                });
            }
        }
        Ok(PriceSeries { dates, prices, label: label.into() })
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    /// Short human name of the series (the file stem for loaded files).
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    /// Write a `date,price` CSV that [`read_price_csv`] loads back into an
    /// identical series (prices carry 17 significant digits).
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "date,price")?;
        for (d, &p) in self.dates.iter().zip(&self.prices) {
            writeln!(w, "{},{}", d.format("%Y-%m-%d"), float17(p))?;
        }
        Ok(())
    }

    pub fn write_csv_path(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        self.write_csv(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }
}

/// Load a price CSV from disk; the series label is the file stem.
pub fn load_price_csv(path: &Path, date_col: &str, price_col: &str) -> Result<PriceSeries> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let label = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    read_price_csv(file, date_col, price_col, label)
        .map_err(|e| e.with_context(format!("loading {}", path.display())))
}

/// Parse a price CSV from any reader.
///
/// `date_col` and `price_col` name the columns to use; a missing name is a
/// schema error listing what the header does contain. Rows are validated as
/// described at the module level, and errors carry 1-based file lines.
pub fn read_price_csv<R: Read>(
    reader: R,
    date_col: &str,
    price_col: &str,
    label: impl Into<String>,
) -> Result<PriceSeries> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::MissingColumn {
            name: name.to_string(),
            available: headers.iter().map(str::to_owned).collect(),
        })
    };
    let date_idx = col(date_col)?;
    let price_idx = col(price_col)?;

    let mut dates = Vec::new();
    let mut prices = Vec::new();
    let mut prev: Option<NaiveDate> = None;
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |message: String| Error::RowValidation { line, message };

        let date_str = record
            .get(date_idx)
            .ok_or_else(|| bad(format!("row has no field {date_idx}")))?;
        let date = NaiveDate::parse_from_str(date_str, "%Y-%m-%d")
            .map_err(|e| bad(format!("bad date {date_str:?}: {e}")))?;
        if let Some(p) = prev {
            if date <= p {
                return Err(bad(format!(
                    "dates must be strictly increasing ({p} then {date})"
                )));
            }
        }

        let price_str = record
            .get(price_idx)
            .ok_or_else(|| bad(format!("row has no field {price_idx}")))?;
        let price: f64 = price_str
            .parse()
            .map_err(|_| bad(format!("bad price {price_str:?}")))?;
        if !price.is_finite() || price <= 0.0 {
            return Err(bad(format!("price must be positive and finite, got {price}")));
        }

        prev = Some(date);
        dates.push(date);
        prices.push(price);
    }
    if dates.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(PriceSeries { dates, prices, label: label.into() })
}
