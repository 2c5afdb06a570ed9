//! Lag-based nonlinearity measures, autocorrelation, and sample entropy.

use super::basic::{mean, standard_deviation, variance};

/// Mean of x[i+2L]·x[i+L]·x[i], a third-order nonlinearity statistic.
/// NaN unless n > 2·lag.
pub fn c3(x: &[f64], lag: usize) -> f64 {
    if x.len() <= 2 * lag || lag == 0 {
        return f64::NAN;
    }
    let terms = x.len() - 2 * lag;
    let sum: f64 = (0..terms).map(|i| x[i + 2 * lag] * x[i + lag] * x[i]).sum();
    sum / terms as f64
}

/// Mean of x[i+2L]²·x[i+L] − x[i+L]·x[i]², which changes sign under time
/// reversal. NaN unless n > 2·lag.
pub fn time_reversal_asymmetry_statistic(x: &[f64], lag: usize) -> f64 {
    if x.len() <= 2 * lag || lag == 0 {
        return f64::NAN;
    }
    let terms = x.len() - 2 * lag;
    let sum: f64 = (0..terms)
        .map(|i| {
            let (a, b, c) = (x[i + 2 * lag], x[i + lag], x[i]);
            a * a * b - b * c * c
        })
        .sum();
    sum / terms as f64
}

/// Lag-L autocorrelation normalized by the population variance:
/// Σ (x[i]−μ)(x[i+L]−μ) / ((n−L)·σ²). NaN for constant series or n ≤ lag.
pub fn autocorrelation(x: &[f64], lag: usize) -> f64 {
    if x.len() <= lag {
        return f64::NAN;
    }
    let var = variance(x);
    if var == 0.0 {
        return f64::NAN;
    }
    let mu = mean(x);
    let sum: f64 = (0..x.len() - lag)
        .map(|i| (x[i] - mu) * (x[i + lag] - mu))
        .sum();
    sum / ((x.len() - lag) as f64 * var)
}

/// Sample entropy with embedding dimension m = 2 and tolerance
/// r = 0.2 · population standard deviation.
///
/// Both template lengths use the same n − m start offsets, matches are
/// Chebyshev distances ≤ r over unordered pairs, and the result is
/// −ln(A/B) for (m+1)-matches A and m-matches B. NaN when n < 4, when the
/// series is constant (r = 0), or when either match count is zero.
pub fn sample_entropy(x: &[f64]) -> f64 {
    const M: usize = 2;
    if x.len() < M + 2 {
        return f64::NAN;
    }
    let r = 0.2 * standard_deviation(x);
    if r == 0.0 || !r.is_finite() {
        return f64::NAN;
    }
    let templates = x.len() - M;
    let (mut a, mut b) = (0u64, 0u64);
    for i in 0..templates {
        for j in i + 1..templates {
            let d_m = chebyshev(&x[i..i + M], &x[j..j + M]);
            if d_m <= r {
                b += 1;
                let d_last = (x[i + M] - x[j + M]).abs();
                if d_last.max(d_m) <= r {
                    a += 1;
                }
            }
        }
    }
    if a == 0 || b == 0 {
        return f64::NAN;
    }
    -((a as f64 / b as f64).ln())
}

fn chebyshev(p: &[f64], q: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}
