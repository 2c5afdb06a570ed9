//! Features about where values sit relative to the series: extremum
//! positions, mean crossings, runs, mass quantiles, and peaks.
//!
//! Comparisons against the mean are strict, so values equal to the mean
//! count as neither above nor below.

use super::basic::mean;

/// Relative index of the first occurrence of the maximum, in [0, 1).
pub fn first_location_of_maximum(x: &[f64]) -> f64 {
    first_location_of(x, |a, b| a > b)
}

/// Relative index of the first occurrence of the minimum, in [0, 1).
pub fn first_location_of_minimum(x: &[f64]) -> f64 {
    first_location_of(x, |a, b| a < b)
}

fn first_location_of(x: &[f64], better: impl Fn(f64, f64) -> bool) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    let mut best = 0;
    for (i, &v) in x.iter().enumerate().skip(1) {
        if better(v, x[best]) {
            best = i;
        }
    }
    best as f64 / x.len() as f64
}

pub fn count_above_mean(x: &[f64]) -> f64 {
    let mu = mean(x);
    x.iter().filter(|&&v| v > mu).count() as f64
}

pub fn count_below_mean(x: &[f64]) -> f64 {
    let mu = mean(x);
    x.iter().filter(|&&v| v < mu).count() as f64
}

/// Length of the longest run of consecutive values strictly above the mean.
pub fn longest_strike_above_mean(x: &[f64]) -> f64 {
    let mu = mean(x);
    longest_run(x, |v| v > mu)
}

/// Length of the longest run of consecutive values strictly below the mean.
pub fn longest_strike_below_mean(x: &[f64]) -> f64 {
    let mu = mean(x);
    longest_run(x, |v| v < mu)
}

fn longest_run(x: &[f64], pred: impl Fn(f64) -> bool) -> f64 {
    let (mut longest, mut current) = (0usize, 0usize);
    for &v in x {
        if pred(v) {
            current += 1;
            longest = longest.max(current);
        } else {
            current = 0;
        }
    }
    longest as f64
}

/// Relative index by which a fraction q of the total absolute mass has
/// accumulated. NaN when the series has zero total absolute mass.
pub fn index_mass_quantile(x: &[f64], q: f64) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    let total: f64 = x.iter().map(|v| v.abs()).sum();
    if total == 0.0 {
        return f64::NAN;
    }
    let target = q * total;
    let mut cumulative = 0.0;
    for (i, &v) in x.iter().enumerate() {
        cumulative += v.abs();
        if cumulative >= target {
            return (i + 1) as f64 / x.len() as f64;
        }
    }
    1.0
}

/// Number of interior values strictly greater than all neighbors up to
/// `support` positions away on both sides.
pub fn number_peaks(x: &[f64], support: usize) -> f64 {
    if x.len() <= 2 * support {
        return 0.0;
    }
    let mut peaks = 0;
    for i in support..x.len() - support {
        let is_peak = (1..=support).all(|j| x[i] > x[i - j] && x[i] > x[i + j]);
        if is_peak {
            peaks += 1;
        }
    }
    peaks as f64
}
