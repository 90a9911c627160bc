//! Sample moments and the Jarque-Bera normality test.
//!
//! All moments use the population convention (divisor `n`): skewness is
//! `m3 / m2^1.5` and kurtosis is the raw `m4 / m2^2`, so a normal sample
//! sits near 3. The Jarque-Bera statistic is
//!
//! ```text
//! JB = n / 6 * (S^2 + (K - 3)^2 / 4)
//! ```
//!
//! whose null distribution is chi-squared with two degrees of freedom; that
//! survival function has the closed form `exp(-JB / 2)`, which is used
//! directly rather than through a generic incomplete-gamma routine.

use crate::error::{Error, Result};

/// Central moments `(mean, m2, m3, m4)` with divisor `n` (two-pass).
fn central_moments(values: &[f64]) -> (f64, f64, f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in values {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    (mean, m2 / n, m3 / n, m4 / n)
}

/// Population skewness `m3 / m2^1.5`. Needs three values and a non-zero
/// variance.
pub fn skewness(values: &[f64]) -> Result<f64> {
    if values.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "skewness needs at least 3 values, got {}",
            values.len()
        )));
    }
    let (_, m2, m3, _) = central_moments(values);
    if m2.is_nan() || m2 <= 0.0 {
        return Err(Error::DegenerateVariance("skewness of a constant sample".into()));
    }
    Ok(m3 / m2.powf(1.5))
}

/// Raw (non-excess) population kurtosis `m4 / m2^2`. Needs four values and a
/// non-zero variance.
pub fn kurtosis(values: &[f64]) -> Result<f64> {
    if values.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "kurtosis needs at least 4 values, got {}",
            values.len()
        )));
    }
    let (_, m2, _, m4) = central_moments(values);
    if m2.is_nan() || m2 <= 0.0 {
        return Err(Error::DegenerateVariance("kurtosis of a constant sample".into()));
    }
    Ok(m4 / (m2 * m2))
}

/// Jarque-Bera statistic and p-value from a sample size and precomputed
/// skewness / raw kurtosis.
pub fn jarque_bera_from_moments(n: usize, skewness: f64, kurtosis: f64) -> (f64, f64) {
    let excess = kurtosis - 3.0;
    let jb = n as f64 / 6.0 * (skewness * skewness + excess * excess / 4.0);
    (jb, (-jb / 2.0).exp())
}

/// Jarque-Bera test of a sample. Needs at least 10 values — below that the
/// chi-squared null is meaningless anyway.
pub fn jarque_bera(values: &[f64]) -> Result<(f64, f64)> {
    if values.len() < 10 {
        return Err(Error::InsufficientData(format!(
            "jarque-bera needs at least 10 values, got {}",
            values.len()
        )));
    }
    let s = skewness(values)?;
    let k = kurtosis(values)?;
    Ok(jarque_bera_from_moments(values.len(), s, k))
}
