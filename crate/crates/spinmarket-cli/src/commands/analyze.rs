//! `spinmarket analyze`: statistics of an empirical price CSV.

use std::path::PathBuf;

use clap::Args;
use spinmarket::report::{sha256_hex, Provenance, ReportDoc};
use spinmarket::{build_report, ingest, stats, Result};

use crate::config::{merge_stats_window, pick, FileConfig};

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Price CSV to analyze
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Name of the ISO-date column
    #[arg(long)]
    pub date_col: Option<String>,
    /// Name of the price column
    #[arg(long)]
    pub price_col: Option<String>,
    /// Return stride in rows (1 = consecutive observations)
    #[arg(long)]
    pub delta_t: Option<usize>,
    /// Largest autocorrelation lag in the report
    #[arg(long)]
    pub max_lag: Option<usize>,
    /// Power-law fit window "LO,HI" (inclusive lags)
    #[arg(long)]
    pub fit_window: Option<String>,
    /// TOML config file (flags override it)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(args: &AnalyzeArgs) -> Result<()> {
    let file = FileConfig::load_opt(args.config.as_ref())?;
    let csv = pick(args.csv.clone(), file.csv.clone(), PathBuf::new());
    if csv.as_os_str().is_empty() {
        return Err(spinmarket::Error::InvalidConfig(
            "analyze needs a price file: pass --csv or set csv in the config".into(),
        ));
    }
    let date_col =
        pick(args.date_col.clone(), file.date_col.clone(), "Date".to_string());
    let price_col =
        pick(args.price_col.clone(), file.price_col.clone(), "Adj Close".to_string());
    let delta_t = pick(args.delta_t, file.delta_t, 1);
    let (max_lag, fit_window) = merge_stats_window(args.max_lag, args.fit_window.as_ref(), &file)?;
    let out = pick(args.out.clone(), file.out, PathBuf::from("out"));

    let prices = ingest::load_price_csv(&csv, &date_col, &price_col)?;
    let returns = stats::log_returns(prices.prices(), delta_t)?.standardize()?;
    let report = build_report(&returns, max_lag, fit_window)?;

    std::fs::create_dir_all(&out).map_err(|e| spinmarket::Error::io(&out, e))?;
    let provenance =
        Provenance::empirical(&csv, sha256_hex(&csv)?, &date_col, &price_col, delta_t);
    let doc = ReportDoc::from_stats(&report, provenance);
    doc.write_path(&out.join("report.json"))?;
    report.acf_returns.write_csv_path(&out.join("acf_returns.csv"))?;
    report.acf_abs_returns.write_csv_path(&out.join("acf_abs_returns.csv"))?;

    println!(
        "{}: n={} eta={:.4} (r2={:.3}) kurtosis={:.3} jb_p={:.3e} sw_p={:.3e}",
        prices.label(),
        report.n,
        report.powerlaw.eta,
        report.powerlaw.r_squared,
        report.kurtosis_raw,
        report.jb_pvalue,
        report.sw_pvalue
    );
    println!("wrote {}", out.display());
    Ok(())
}
