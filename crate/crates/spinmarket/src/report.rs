//! The JSON analysis report: a stable, versioned, byte-reproducible record
//! of everything [`build_report`](crate::stats::build_report) measured.
//!
//! Floats are serialized with 17 significant digits through a custom
//! formatter, so every f64 round-trips exactly and identical inputs produce
//! identical bytes. Each report carries a `provenance` block — either the
//! full simulation parameter set (seed, generator, parameters) or the
//! source file identity (path, sha256, columns) — plus the version of this
//! package that wrote it.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};
use sha2::{Digest, Sha256};

use crate::dynamics::ModelParams;
use crate::error::{Error, Result};
use crate::market::Mapping;
use crate::stats::{AcfCurve, PowerLawFit, StatsReport};

/// Version of the report layout. Bump on breaking changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Pretty JSON with every float printed as `{:.16e}`.
struct Fmt17<'a> {
    inner: PrettyFormatter<'a>,
}

impl<'a> Fmt17<'a> {
    fn new() -> Self {
        Fmt17 { inner: PrettyFormatter::new() }
    }
}

impl<'a> Formatter for Fmt17<'a> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_array(writer)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object(writer)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + io::Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.inner.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(writer)
    }
}

/// Serialize any value as pretty JSON with 17-significant-digit floats and a
/// trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = Serializer::with_formatter(&mut buf, Fmt17::new());
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    String::from_utf8(buf).map_err(|e| Error::Parse(format!("report is not utf-8: {e}")))
}

/// [`to_json_string`] straight to a file.
pub fn write_json_path<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let text = to_json_string(value)?;
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    w.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

/// Hex sha256 of a file's contents (streamed).
pub fn sha256_hex(path: &Path) -> Result<String> {
    let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let read = file.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if read == 0 {
            break;
        }
        hasher.update(&buf[..read]);
    }
    Ok(format!("{:x}", hasher.finalize()))
}

/// Where a report's underlying return series came from.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Provenance {
    Simulated {
        seed: u64,
        /// Name of the random stream family ("chacha8").
        generator: String,
        params: ModelParams,
        mapping: Mapping,
        code_version: String,
    },
    Empirical {
        path: String,
        sha256: String,
        date_column: String,
        price_column: String,
        delta_t: usize,
        code_version: String,
    },
}

impl Provenance {
    pub fn simulated(params: &ModelParams, mapping: Mapping) -> Self {
        Provenance::Simulated {
            seed: params.seed,
            generator: "chacha8".to_string(),
            params: params.clone(),
            mapping,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn empirical(
        path: &Path,
        sha256: String,
        date_column: &str,
        price_column: &str,
        delta_t: usize,
    ) -> Self {
        Provenance::Empirical {
            path: path.display().to_string(),
            sha256,
            date_column: date_column.to_string(),
            price_column: price_column.to_string(),
            delta_t,
            code_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Autocorrelation curve as serialized in the report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AcfDoc {
    pub lags: Vec<usize>,
    pub rho: Vec<f64>,
    /// Sample size the curve was estimated from.
    pub n: usize,
}

impl From<&AcfCurve> for AcfDoc {
    fn from(curve: &AcfCurve) -> Self {
        AcfDoc {
            lags: (0..=curve.max_lag()).collect(),
            rho: curve.rho().to_vec(),
            n: curve.n(),
        }
    }
}

/// Power-law fit as serialized in the report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PowerLawDoc {
    #[serde(rename = "A")]
    pub amplitude: f64,
    pub eta: f64,
    pub r2: f64,
    pub window: [usize; 2],
    pub n_points: usize,
    pub n_dropped: usize,
}

impl From<&PowerLawFit> for PowerLawDoc {
    fn from(fit: &PowerLawFit) -> Self {
        PowerLawDoc {
            amplitude: fit.amplitude,
            eta: fit.eta,
            r2: fit.r_squared,
            window: [fit.window.0, fit.window.1],
            n_points: fit.n_points,
            n_dropped: fit.n_dropped,
        }
    }
}

/// Notes on how the statistics were obtained.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportMeta {
    pub shapiro: ShapiroMeta,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ShapiroMeta {
    /// Sample size the test actually ran on.
    pub n_used: usize,
    pub subsampled: bool,
    /// Reduction applied above the supported size.
    pub method: String,
}

/// The on-disk analysis report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportDoc {
    pub schema_version: u32,
    pub n: usize,
    pub skewness: f64,
    pub kurtosis_raw: f64,
    pub kurtosis_excess: f64,
    pub jb_stat: f64,
    pub jb_pvalue: f64,
    pub sw_stat: f64,
    pub sw_pvalue: f64,
    pub acf_returns: AcfDoc,
    pub acf_abs_returns: AcfDoc,
    pub powerlaw: PowerLawDoc,
    pub meta: ReportMeta,
    pub provenance: Provenance,
}

impl ReportDoc {
    pub fn from_stats(stats: &StatsReport, provenance: Provenance) -> Self {
        ReportDoc {
            schema_version: SCHEMA_VERSION,
            n: stats.n,
            skewness: stats.skewness,
            kurtosis_raw: stats.kurtosis_raw,
            kurtosis_excess: stats.kurtosis_raw - 3.0,
            jb_stat: stats.jb_stat,
            jb_pvalue: stats.jb_pvalue,
            sw_stat: stats.sw_stat,
            sw_pvalue: stats.sw_pvalue,
            acf_returns: AcfDoc::from(&stats.acf_returns),
            acf_abs_returns: AcfDoc::from(&stats.acf_abs_returns),
            powerlaw: PowerLawDoc::from(&stats.powerlaw),
            meta: ReportMeta {
                shapiro: ShapiroMeta {
                    n_used: stats.sw_n_used,
                    subsampled: stats.sw_subsampled,
                    method: "stride-subsample".to_string(),
                },
            },
            provenance,
        }
    }

    pub fn write_path(&self, path: &Path) -> Result<()> {
        write_json_path(self, path)
    }

    /// Load a report, rejecting documents written under a different schema
    /// version.
    pub fn read_path(path: &Path) -> Result<ReportDoc> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let doc: ReportDoc = serde_json::from_reader(BufReader::new(file))
            .map_err(Error::Json)
            .map_err(|e| e.with_context(format!("reading report {}", path.display())))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::SchemaMismatch {
                expected: SCHEMA_VERSION,
                found: doc.schema_version,
            });
        }
        Ok(doc)
    }
}
