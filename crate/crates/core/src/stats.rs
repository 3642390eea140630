//! Empirical distribution, Kolmogorov–Smirnov distance, Hill tail index
//! and sample moments.

use serde::Serialize;

use crate::error::{Error, Result};

/// Non-empty sample, sorted ascending at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<f64>,
}

impl SampleSet {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("sample set must be non-empty"));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::domain("sample set contains NaN"));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Fraction of samples `≤ x`.
pub fn empirical_cdf(s: &SampleSet, x: f64) -> f64 {
    s.values.partition_point(|&v| v <= x) as f64 / s.len() as f64
}

/// Kolmogorov–Smirnov statistic with the asymptotic 1% critical value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    pub n: usize,
    pub threshold_1pct: f64,
}

impl KsResult {
    pub fn passes(&self) -> bool {
        self.statistic < self.threshold_1pct
    }
}

/// Asymptotic 1% critical value of the one-sample KS statistic.
pub fn ks_threshold_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// `max_i max(i/n − F(x_i), F(x_i) − (i−1)/n)`.
pub fn ks_statistic(s: &SampleSet, cdf: impl Fn(f64) -> f64) -> KsResult {
    let n = s.len();
    let nf = n as f64;
    let statistic = s
        .values
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / nf - f;
            let below = f - i as f64 / nf;
            above.max(below)
        })
        .fold(0.0, f64::max);
    KsResult {
        statistic,
        n,
        threshold_1pct: ks_threshold_1pct(n),
    }
}

/// Default number of upper order statistics, `⌊√n⌋`.
pub fn hill_default_k(n: usize) -> usize {
    (n as f64).sqrt() as usize
}

/// Hill estimate of the tail index from the `k` largest `|x|`:
/// `α̂ = k / Σ_{i=1..k} ln(|x|_{(n−i+1)} / |x|_{(n−k)})`.
pub fn hill_estimator(s: &SampleSet, k: usize) -> Result<f64> {
    let mut mags: Vec<f64> = s.values.iter().map(|v| v.abs()).filter(|&v| v > 0.0).collect();
    let n = mags.len();
    if k < 2 || k >= n {
        return Err(Error::domain(format!(
            "Hill estimator needs 2 <= k < number of positive magnitudes ({n}), got k={k}"
        )));
    }
    mags.sort_by(f64::total_cmp);
    let threshold = mags[n - k - 1];
    let sum: f64 = mags[n - k..].iter().map(|&v| (v / threshold).ln()).sum();
    if !(sum > 0.0) {
        return Err(Error::domain("Hill estimator is degenerate: no spread above the threshold"));
    }
    Ok(k as f64 / sum)
}

/// Mean and unbiased variance.
pub fn sample_moments(s: &SampleSet) -> Result<(f64, f64)> {
    let n = s.len();
    if n < 2 {
        return Err(Error::domain("sample moments need at least two values"));
    }
    let nf = n as f64;
    let mean = s.values.iter().sum::<f64>() / nf;
    let ss: f64 = s.values.iter().map(|v| (v - mean) * (v - mean)).sum();
    Ok((mean, ss / (nf - 1.0)))
}
