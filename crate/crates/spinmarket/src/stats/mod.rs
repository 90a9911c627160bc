//! Stylized-facts statistics: moments, normality tests, autocorrelations
//! and the power-law decay fit, plus the one-call [`build_report`] pipeline.

pub mod acf;
pub mod moments;
pub mod normal;
pub mod powerlaw;
pub mod shapiro;

pub use acf::{acf, AcfCurve};
pub use moments::{jarque_bera, jarque_bera_from_moments, kurtosis, skewness};
pub use powerlaw::{fit_power_law, PowerLawFit, MIN_FIT_POINTS};
pub use shapiro::{shapiro_wilk, shapiro_wilk_auto, ShapiroWilk};

use crate::error::{Error, Result};
use crate::market::{ReturnSeries, Source};

/// Default largest autocorrelation lag.
pub const DEFAULT_MAX_LAG: usize = 150;
/// Default inclusive lag window of the power-law fit.
pub const DEFAULT_FIT_WINDOW: (usize, usize) = (1, 150);

/// Log returns of a positive price series at stride `delta_t`:
/// `r_t = ln(p_t) - ln(p_{t - delta_t})` for `t = delta_t..len`.
///
/// The result is *not* standardized; callers standardize explicitly before
/// computing statistics. Any price at or below zero is a domain error
/// identifying the offending index.
pub fn log_returns(prices: &[f64], delta_t: usize) -> Result<ReturnSeries> {
    if delta_t == 0 {
        return Err(Error::InvalidConfig("delta_t must be >= 1".into()));
    }
    for (index, &p) in prices.iter().enumerate() {
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::NonPositivePrice { index, value: p });
        }
    }
    if prices.len() <= delta_t {
        return Err(Error::InsufficientData(format!(
            "{} prices yield no returns at delta_t = {delta_t}",
            prices.len()
        )));
    }
    let values: Vec<f64> =
        (delta_t..prices.len()).map(|t| prices[t].ln() - prices[t - delta_t].ln()).collect();
    Ok(ReturnSeries::new(values, delta_t, Source::Empirical, false))
}

/// Everything [`build_report`] measures on one return series.
#[derive(Clone, Debug)]
pub struct StatsReport {
    pub n: usize,
    pub skewness: f64,
    /// Raw (non-excess) kurtosis; 3 for a normal distribution.
    pub kurtosis_raw: f64,
    pub jb_stat: f64,
    pub jb_pvalue: f64,
    pub sw_stat: f64,
    pub sw_pvalue: f64,
    /// Sample size the Shapiro-Wilk test ran on (after any subsampling).
    pub sw_n_used: usize,
    pub sw_subsampled: bool,
    pub acf_returns: AcfCurve,
    pub acf_abs_returns: AcfCurve,
    /// Power-law fit of the absolute-return autocorrelation decay.
    pub powerlaw: PowerLawFit,
}

/// Run the full battery on a standardized return series.
///
/// Computes moments with the Jarque-Bera test, the Shapiro-Wilk test
/// (stride-subsampled above its supported size), autocorrelations of the
/// returns and their absolute values at lags `0..=max_lag`, and the
/// power-law decay fit of the absolute-return curve over `fit_window`.
pub fn build_report(
    returns: &ReturnSeries,
    max_lag: usize,
    fit_window: (usize, usize),
) -> Result<StatsReport> {
    if !returns.standardized() {
        return Err(Error::InvalidConfig(
            "statistics run on standardized returns; call standardize() first".into(),
        ));
    }
    let values = returns.values();
    let n = values.len();

    let skew = skewness(values).map_err(|e| e.with_context("skewness of returns"))?;
    let kurt = kurtosis(values).map_err(|e| e.with_context("kurtosis of returns"))?;
    let (jb_stat, jb_pvalue) =
        jarque_bera(values).map_err(|e| e.with_context("jarque-bera test of returns"))?;
    let sw = shapiro_wilk_auto(values)
        .map_err(|e| e.with_context("shapiro-wilk test of returns"))?;

    let acf_returns =
        acf(values, max_lag).map_err(|e| e.with_context("autocorrelation of returns"))?;
    let abs_values: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    let acf_abs_returns = acf(&abs_values, max_lag)
        .map_err(|e| e.with_context("autocorrelation of absolute returns"))?;
    let powerlaw = fit_power_law(&acf_abs_returns, fit_window)
        .map_err(|e| e.with_context("power-law fit of the absolute-return autocorrelation"))?;

    Ok(StatsReport {
        n,
        skewness: skew,
        kurtosis_raw: kurt,
        jb_stat,
        jb_pvalue,
        sw_stat: sw.w,
        sw_pvalue: sw.p_value,
        sw_n_used: sw.n_used,
        sw_subsampled: sw.subsampled,
        acf_returns,
        acf_abs_returns,
        powerlaw,
    })
}
