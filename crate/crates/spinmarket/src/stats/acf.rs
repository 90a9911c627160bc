//! Sample autocorrelation function.
//!
//! The estimator is the biased one: both the lag-`tau` covariance and the
//! variance use the full-sample mean and the divisor `n`,
//!
//! ```text
//! rho(tau) = sum_{t=0}^{n-1-tau} (x_t - xbar)(x_{t+tau} - xbar)
//!          / sum_{t=0}^{n-1}   (x_t - xbar)^2
//! ```
//!
//! which keeps `|rho| <= 1` for every lag and is the standard choice when
//! the curve feeds a spectral or decay-rate estimate.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::fmt::float17;

/// An autocorrelation curve at lags `0..=max_lag` of a length-`n` sample.
#[derive(Clone, Debug)]
pub struct AcfCurve {
    rho: Vec<f64>,
    n: usize,
}

impl AcfCurve {
    /// Wrap precomputed values; `rho[lag]` indexed from lag 0. Intended for
    /// tests and synthetic curves — [`acf`] is the estimator.
    pub fn new(rho: Vec<f64>, n: usize) -> Self {
        AcfCurve { rho, n }
    }

    pub fn max_lag(&self) -> usize {
        self.rho.len() - 1
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    /// Sample size the curve was estimated from.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Half-width of the usual +-2/sqrt(n) white-noise band.
    pub fn noise_band(&self) -> f64 {
        2.0 / (self.n as f64).sqrt()
    }

    /// Write `lag,rho` rows, floats with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "lag,rho")?;
        for (lag, &r) in self.rho.iter().enumerate() {
            writeln!(w, "{},{}", lag, float17(r))?;
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

/// Estimate the autocorrelation of `values` at lags `0..=max_lag`.
///
/// Requires `values.len() > max_lag` and a non-zero sample variance. Lag 0
/// is pinned to exactly 1.
pub fn acf(values: &[f64], max_lag: usize) -> Result<AcfCurve> {
    let n = values.len();
    if n < 2 || n <= max_lag {
        return Err(Error::InsufficientData(format!(
            "acf at max_lag {max_lag} needs more than {max_lag} values, got {n}"
        )));
    }
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let denom: f64 = values.iter().map(|&x| (x - mean) * (x - mean)).sum();
    if denom.is_nan() || denom <= 0.0 {
        return Err(Error::DegenerateVariance("acf of a constant sample".into()));
    }
    let mut rho = Vec::with_capacity(max_lag + 1);
    rho.push(1.0);
    for lag in 1..=max_lag {
        let num: f64 =
            (0..n - lag).map(|t| (values[t] - mean) * (values[t + lag] - mean)).sum();
        rho.push(num / denom);
    }
    Ok(AcfCurve { rho, n })
}

#[cfg(test)]
// Frozen reference values keep 17 significant digits so they stay bit-exact.
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;

    const FIXTURE: [f64; 12] = [0.3, -1.2, 0.8, 2.5, -0.7, 0.1, 1.9, -2.2, 0.4, 1.1, -0.5, 0.9];

    #[test]
    fn reference_values() {
        // Frozen from an independent implementation of the same estimator.
        let want = [
            1.0,
            -0.3861410959712146,
            -0.35863858904028789,
            0.57029729251459915,
            -0.39689140565091729,
            -0.16393853595233882,
        ];
        let curve = acf(&FIXTURE, 5).unwrap();
        assert_eq!(curve.max_lag(), 5);
        assert_eq!(curve.n(), 12);
        for (lag, (&got, &w)) in curve.rho().iter().zip(&want).enumerate() {
            assert!((got - w).abs() < 1e-12, "lag {lag}: {got} vs {w}");
        }
    }

    #[test]
    fn lag_zero_is_exactly_one() {
        let curve = acf(&FIXTURE, 3).unwrap();
        assert_eq!(curve.rho()[0], 1.0);
    }

    #[test]
    fn alternating_series_hits_the_biased_bound() {
        // x = +1, -1, +1, ... has mean 0 and lag-1 autocorrelation
        // -(n-1)/n under the biased estimator.
        let n = 1000;
        let x: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let curve = acf(&x, 2).unwrap();
        assert!((curve.rho()[1] - (-(n as f64 - 1.0) / n as f64)).abs() < 1e-12);
        assert!((curve.rho()[1] + 0.999).abs() < 1e-12);
    }

    #[test]
    fn magnitudes_never_exceed_one() {
        // A few deterministic but rough series.
        for seed in 0..5u64 {
            let x: Vec<f64> = (0..257)
                .map(|i| ((i as f64 + seed as f64 * 13.7) * 0.7131).sin() * (i % 7) as f64)
                .collect();
            let curve = acf(&x, 256).unwrap();
            for (lag, &r) in curve.rho().iter().enumerate() {
                assert!(r.abs() <= 1.0 + 1e-12, "seed {seed} lag {lag}: rho = {r}");
            }
        }
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(acf(&FIXTURE, 12), Err(Error::InsufficientData(_))));
        assert!(matches!(acf(&[1.0], 0), Err(Error::InsufficientData(_))));
        assert!(matches!(acf(&[3.0; 50], 5), Err(Error::DegenerateVariance(_))));
    }

    #[test]
    fn csv_shape() {
        let curve = acf(&FIXTURE, 2).unwrap();
        let mut buf = Vec::new();
        curve.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "lag,rho");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "0,1.0000000000000000e0");
    }
}
