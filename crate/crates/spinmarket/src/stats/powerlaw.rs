//! Power-law fit of an autocorrelation decay.
//!
//! Models `rho(tau) = A * tau^(-eta)` on a lag window by ordinary least
//! squares of `ln rho` on `ln tau`. Only lags with strictly positive `rho`
//! enter the regression (the logarithm of the rest is undefined — for a
//! noisy, nearly-flat curve negative excursions are expected and simply
//! dropped, but their count is reported).

use crate::error::{Error, Result};
use crate::stats::acf::AcfCurve;

/// Fewest positive-`rho` lags the regression accepts.
pub const MIN_FIT_POINTS: usize = 5;

/// Result of fitting `rho(tau) = A * tau^(-eta)` on `window`.
#[derive(Clone, Copy, Debug)]
pub struct PowerLawFit {
    /// Amplitude `A = exp(intercept)`.
    pub amplitude: f64,
    /// Decay exponent (positive for a decaying curve).
    pub eta: f64,
    /// Coefficient of determination of the log-log regression.
    pub r_squared: f64,
    /// Inclusive lag window `(lo, hi)` the fit was asked to use.
    pub window: (usize, usize),
    /// Number of lags that actually entered the regression.
    pub n_points: usize,
    /// Lags in the window skipped because `rho <= 0`.
    pub n_dropped: usize,
}

/// Fit the decay of `curve` over the inclusive lag window `(lo, hi)`.
///
/// `lo` must be at least 1 (lag 0 is pinned at 1 and has `ln tau`
/// undefined), the window must lie inside the curve, and at least
/// [`MIN_FIT_POINTS`] positive lags must survive.
pub fn fit_power_law(curve: &AcfCurve, window: (usize, usize)) -> Result<PowerLawFit> {
    let (lo, hi) = window;
    if lo < 1 || lo > hi {
        return Err(Error::InvalidConfig(format!(
            "power-law window ({lo}, {hi}) must satisfy 1 <= lo <= hi"
        )));
    }
    if hi > curve.max_lag() {
        return Err(Error::InvalidConfig(format!(
            "power-law window reaches lag {hi} but the curve stops at {}",
            curve.max_lag()
        )));
    }

    let mut xs = Vec::with_capacity(hi - lo + 1);
    let mut ys = Vec::with_capacity(hi - lo + 1);
    let mut dropped = 0usize;
    for lag in lo..=hi {
        let r = curve.rho()[lag];
        if r > 0.0 {
            xs.push((lag as f64).ln());
            ys.push(r.ln());
        } else {
            dropped += 1;
        }
    }
    let k = xs.len();
    if k < MIN_FIT_POINTS {
        return Err(Error::InsufficientData(format!(
            "power-law fit needs at least {MIN_FIT_POINTS} positive lags in ({lo}, {hi}), found {k}"
        )));
    }

    let kf = k as f64;
    let x_mean = xs.iter().sum::<f64>() / kf;
    let y_mean = ys.iter().sum::<f64>() / kf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (&x, &y) in xs.iter().zip(&ys) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    if sxx.is_nan() || sxx <= 0.0 {
        return Err(Error::InsufficientData(
            "power-law fit window collapses to a single distinct lag".into(),
        ));
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;

    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for (&x, &y) in xs.iter().zip(&ys) {
        let fitted = intercept + slope * x;
        ss_res += (y - fitted) * (y - fitted);
        ss_tot += (y - y_mean) * (y - y_mean);
    }
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };

    Ok(PowerLawFit {
        amplitude: intercept.exp(),
        eta: -slope,
        r_squared,
        window,
        n_points: k,
        n_dropped: dropped,
    })
}
