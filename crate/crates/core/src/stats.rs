//! Small empirical-statistics helpers shared by the Monte Carlo drivers.

use crate::error::{Error, Result};
use serde::Serialize;

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample variance.
pub fn variance(x: &[f64]) -> f64 {
    let m = mean(x);
    x.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (x.len() as f64 - 1.0)
}

/// Unbiased 2×2 covariance of paired samples.
pub fn empirical_cov(values: &[(f64, f64)]) -> Result<[[f64; 2]; 2]> {
    if values.len() < 2 {
        return Err(Error::Domain(format!("covariance needs at least 2 samples, got {}", values.len())));
    }
    let n = values.len() as f64;
    let (mx, my) = values.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (mx / n, my / n);
    let mut c = [[0.0; 2]; 2];
    for &(x, y) in values {
        let (dx, dy) = (x - mx, y - my);
        c[0][0] += dx * dx;
        c[0][1] += dx * dy;
        c[1][1] += dy * dy;
    }
    c[0][0] /= n - 1.0;
    c[0][1] /= n - 1.0;
    c[1][1] /= n - 1.0;
    c[1][0] = c[0][1];
    Ok(c)
}

/// Empirical distribution function of a sample.
#[derive(Debug, Clone, Serialize)]
pub struct Ecdf {
    sorted: Vec<f64>,
}

impl Ecdf {
    pub fn new(values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ecdf { sorted }
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    pub fn values(&self) -> &[f64] {
        &self.sorted
    }
}

/// Two-sided Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_distance<F: Fn(f64) -> f64>(ecdf: &Ecdf, cdf: F) -> f64 {
    let n = ecdf.len() as f64;
    ecdf.sorted.iter().enumerate().fold(0.0, |d, (k, &x)| {
        let f = cdf(x);
        d.max((k as f64 + 1.0) / n - f).max(f - k as f64 / n)
    })
}

/// Two-sample Kolmogorov–Smirnov distance.
pub fn ks_two_sample(a: &Ecdf, b: &Ecdf) -> f64 {
    let mut d: f64 = 0.0;
    for &x in a.sorted.iter().chain(b.sorted.iter()) {
        d = d.max((a.eval(x) - b.eval(x)).abs());
    }
    d
}

/// Least-squares slope of y on x.
pub fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

/// A Bernoulli proportion and its standard error.
pub fn proportion(hits: u64, n: u64) -> (f64, f64) {
    let p = hits as f64 / n as f64;
    (p, (p * (1.0 - p) / n as f64).sqrt())
}
