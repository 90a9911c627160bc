//! Shapiro-Wilk W test for normality (Royston's algorithm).
//!
//! This is a port of Royston's 1995 algorithm as published in Applied
//! Statistics (the same one R and scipy expose): approximate normal-scores
//! weights with the two leading weights corrected by small-sample
//! polynomials, `W` computed as a squared correlation in the numerically
//! safe `1 - W` form, and p-values from a normalizing transformation of
//! `ln(1 - W)` — an exact arcsine law at `n = 3`, a log-gamma shift for
//! `4 <= n <= 11`, and a log-log location/scale fit for `n >= 12`.
//!
//! The supported sample size is `3..=5000`, the range the p-value
//! approximation was calibrated for. [`shapiro_wilk_auto`] reduces larger
//! samples with a deterministic stride subsample (every k-th observation in
//! the original order) before testing.

use crate::error::{Error, Result};
use crate::stats::normal::{std_normal_quantile, std_normal_sf};

pub const MIN_N: usize = 3;
pub const MAX_N: usize = 5000;

// Polynomial coefficients, ascending powers.
const C1: [f64; 6] = [0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056];
const C2: [f64; 6] = [0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633];
const C3: [f64; 4] = [0.544, -0.39978, 0.025054, -6.714e-4];
const C4: [f64; 4] = [1.3822, -0.77857, 0.062767, -0.0020322];
const C5: [f64; 4] = [-1.5861, -0.31082, -0.083751, 0.0038915];
const C6: [f64; 3] = [-0.4803, -0.082676, 0.0030302];
const G: [f64; 2] = [-2.273, 0.459];

fn poly(coef: &[f64], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Outcome of [`shapiro_wilk_auto`], recording whether subsampling was used.
#[derive(Clone, Copy, Debug)]
pub struct ShapiroWilk {
    pub w: f64,
    pub p_value: f64,
    /// Sample size the test actually ran on.
    pub n_used: usize,
    pub subsampled: bool,
}

/// Shapiro-Wilk test of `values` (unordered; a sorted copy is made).
///
/// Returns `(W, p_value)`. Sample sizes outside `3..=5000` and constant
/// samples are errors.
pub fn shapiro_wilk(values: &[f64]) -> Result<(f64, f64)> {
    let n = values.len();
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(Error::SampleSizeOutOfRange { n, min: MIN_N, max: MAX_N });
    }
    let mut x = values.to_vec();
    x.sort_unstable_by(f64::total_cmp);
    let range = x[n - 1] - x[0];
    if !range.is_finite() || range <= 0.0 {
        return Err(Error::DegenerateVariance(
            "shapiro-wilk needs a non-constant, finite sample".into(),
        ));
    }

    // Weights for the upper half, 1-based like the published algorithm.
    let nn2 = n / 2;
    let mut a = vec![0.0f64; nn2 + 1];
    if n == 3 {
        a[1] = std::f64::consts::FRAC_1_SQRT_2;
    } else {
        let an = n as f64;
        let mut summ2 = 0.0;
        for (i, slot) in a.iter_mut().enumerate().skip(1) {
            *slot = std_normal_quantile((i as f64 - 0.375) / (an + 0.25));
            summ2 += *slot * *slot;
        }
        summ2 *= 2.0;
        let ssumm2 = summ2.sqrt();
        let rsn = 1.0 / an.sqrt();
        let a1 = poly(&C1, rsn) - a[1] / ssumm2;
        let (i1, fac) = if n > 5 {
            let a2 = -a[2] / ssumm2 + poly(&C2, rsn);
            let fac = ((summ2 - 2.0 * a[1] * a[1] - 2.0 * a[2] * a[2])
                / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2))
                .sqrt();
            a[2] = a2;
            (3, fac)
        } else {
            let fac = ((summ2 - 2.0 * a[1] * a[1]) / (1.0 - 2.0 * a1 * a1)).sqrt();
            (2, fac)
        };
        a[1] = a1;
        // The raw normal scores of the lower half are negative; the division
        // by -fac normalizes and flips them into upper-half weights.
        for slot in a.iter_mut().take(nn2 + 1).skip(i1) {
            *slot /= -fac;
        }
    }

    // Signed coefficient paired with the i-th order statistic (1-based).
    let coef = |i: usize| -> f64 {
        let j = n + 1 - i;
        match i.cmp(&j) {
            std::cmp::Ordering::Less => -a[i],
            std::cmp::Ordering::Greater => a[j],
            std::cmp::Ordering::Equal => 0.0,
        }
    };

    // W as a squared correlation, accumulated in the 1 - W form so samples
    // that are almost exactly normal do not lose all their precision.
    let nf = n as f64;
    let sa = (1..=n).map(coef).sum::<f64>() / nf;
    let sx = x.iter().map(|&v| v / range).sum::<f64>() / nf;
    let (mut ssa, mut ssx, mut sax) = (0.0, 0.0, 0.0);
    for i in 1..=n {
        let asa = coef(i) - sa;
        let xsx = x[i - 1] / range - sx;
        ssa += asa * asa;
        ssx += xsx * xsx;
        sax += asa * xsx;
    }
    let ssassx = (ssa * ssx).sqrt();
    let mut w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    if w1.is_nan() || w1 < 1e-99 {
        // Guards the logarithm below against rounding W past 1.
        w1 = 1e-99;
    }
    let w = 1.0 - w1;

    let p = if n == 3 {
        const PI6: f64 = 6.0 / std::f64::consts::PI;
        // asin(sqrt(3/4)) = pi/3: the W statistic of a sorted triple cannot
        // fall below 3/4, and the arcsine law starts from that floor.
        const STQR: f64 = std::f64::consts::FRAC_PI_3;
        (PI6 * (w.clamp(0.0, 1.0).sqrt().asin() - STQR)).clamp(0.0, 1.0)
    } else {
        let an = n as f64;
        let y = w1.ln();
        if n <= 11 {
            let gamma = poly(&G, an);
            if y >= gamma {
                1e-99
            } else {
                let y = -(gamma - y).ln();
                let m = poly(&C3, an);
                let s = poly(&C4, an).exp();
                std_normal_sf((y - m) / s)
            }
        } else {
            let xx = an.ln();
            let m = poly(&C5, xx);
            let s = poly(&C6, xx).exp();
            std_normal_sf((y - m) / s)
        }
    };
    Ok((w, p))
}

/// [`shapiro_wilk`] with automatic stride subsampling above [`MAX_N`].
///
/// For `n > 5000` every `ceil(n / 5000)`-th observation (in the original
/// time order) is kept, which preserves the marginal distribution the test
/// looks at while staying inside the calibrated range — and is deterministic,
/// so reports are reproducible.
pub fn shapiro_wilk_auto(values: &[f64]) -> Result<ShapiroWilk> {
    let n = values.len();
    if n <= MAX_N {
        let (w, p_value) = shapiro_wilk(values)?;
        return Ok(ShapiroWilk { w, p_value, n_used: n, subsampled: false });
    }
    let stride = n.div_ceil(MAX_N);
    let sub: Vec<f64> = values.iter().copied().step_by(stride).collect();
    let (w, p_value) = shapiro_wilk(&sub)?;
    Ok(ShapiroWilk { w, p_value, n_used: sub.len(), subsampled: true })
}
