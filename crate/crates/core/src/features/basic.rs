//! Moment, extremum, and quantile features.
//!
//! `variance` and `standard_deviation` are population moments (divide by n);
//! skewness and kurtosis are the bias-adjusted G1 and G2 statistics. All
//! functions return NaN where the statistic is undefined; the extraction
//! layer turns NaN into an imputed zero.

/// Sum of squared values.
pub fn abs_energy(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn sum_values(x: &[f64]) -> f64 {
    x.iter().sum()
}

pub fn mean(x: &[f64]) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    sum_values(x) / x.len() as f64
}

pub fn minimum(x: &[f64]) -> f64 {
    x.iter().copied().fold(f64::NAN, f64::min)
}

pub fn maximum(x: &[f64]) -> f64 {
    x.iter().copied().fold(f64::NAN, f64::max)
}

/// Population variance (denominator n).
pub fn variance(x: &[f64]) -> f64 {
    central_moments(x).map_or(f64::NAN, |m| m.m2)
}

/// Population standard deviation.
pub fn standard_deviation(x: &[f64]) -> f64 {
    variance(x).sqrt()
}

/// Adjusted Fisher-Pearson standardized third moment G1.
///
/// NaN for n < 3 or a constant series, where the bias correction or the
/// normalization is undefined.
pub fn skewness(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let Some(m) = central_moments(x) else {
        return f64::NAN;
    };
    if x.len() < 3 || m.m2 == 0.0 {
        return f64::NAN;
    }
    let g1 = m.m3 / (m.m2 * m.m2.sqrt());
    g1 * (n * (n - 1.0)).sqrt() / (n - 2.0)
}

/// Adjusted excess kurtosis G2. NaN for n < 4 or a constant series.
pub fn kurtosis(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let Some(m) = central_moments(x) else {
        return f64::NAN;
    };
    if x.len() < 4 || m.m2 == 0.0 {
        return f64::NAN;
    }
    let g2 = m.m4 / (m.m2 * m.m2) - 3.0;
    ((n + 1.0) * g2 + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0))
}

/// Quantile with linear interpolation between order statistics.
pub fn quantile(x: &[f64], q: f64) -> f64 {
    if x.is_empty() || !(0.0..=1.0).contains(&q) {
        return f64::NAN;
    }
    let mut sorted = x.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    quantile_sorted(&sorted, q)
}

/// Quantile of an already ascending-sorted slice.
pub fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn median(x: &[f64]) -> f64 {
    quantile(x, 0.5)
}

struct CentralMoments {
    m2: f64,
    m3: f64,
    m4: f64,
}

fn central_moments(x: &[f64]) -> Option<CentralMoments> {
    if x.is_empty() {
        return None;
    }
    let n = x.len() as f64;
    let mu = mean(x);
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in x {
        let d = v - mu;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    Some(CentralMoments {
        m2: m2 / n,
        m3: m3 / n,
        m4: m4 / n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn small_series_by_hand() {
        let x = [1.0, 2.0, 3.0];
        assert_eq!(mean(&x), 2.0);
        assert_eq!(abs_energy(&x), 14.0);
        assert_relative_eq!(variance(&x), 2.0 / 3.0);
        assert_eq!(maximum(&x), 3.0);
        assert_eq!(minimum(&x), 1.0);
        assert_relative_eq!(standard_deviation(&x), (2.0f64 / 3.0).sqrt());
    }

    #[test]
    fn quantile_interpolates_between_order_statistics() {
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0], 0.5), 2.5);
        // h = 3 * 0.3 = 0.9, so 1 + 0.9 * (2 - 1).
        assert_relative_eq!(quantile(&[1.0, 2.0, 3.0, 6.0], 0.3), 1.9);
        assert_eq!(quantile(&[5.0], 0.7), 5.0);
        assert_eq!(quantile(&[3.0, 1.0, 2.0], 0.0), 1.0);
        assert_eq!(quantile(&[3.0, 1.0, 2.0], 1.0), 3.0);
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), 2.5);
    }

    #[test]
    fn skewness_matches_scipy_bias_corrected_value() {
        // scipy.stats.skew([1, 2, 3, 6], bias=False)
        assert_relative_eq!(
            skewness(&[1.0, 2.0, 3.0, 6.0]),
            1.1903401282789947,
            max_relative = 1e-14
        );
        assert!(skewness(&[1.0, 2.0]).is_nan());
        assert!(skewness(&[5.0, 5.0, 5.0, 5.0]).is_nan());
    }

    #[test]
    fn kurtosis_matches_scipy_bias_corrected_value() {
        // scipy.stats.kurtosis([1, 2, 3, 6, 2], bias=False)
        assert_relative_eq!(
            kurtosis(&[1.0, 2.0, 3.0, 6.0, 2.0]),
            2.607742878013153,
            max_relative = 1e-14
        );
        assert!(kurtosis(&[1.0, 2.0, 3.0]).is_nan());
        assert!(kurtosis(&[2.0, 2.0, 2.0, 2.0]).is_nan());
    }

    #[test]
    fn symmetric_series_has_zero_skew() {
        assert_relative_eq!(skewness(&[1.0, 2.0, 3.0, 4.0, 5.0]), 0.0);
    }

    #[test]
    fn empty_and_single_element_edges() {
        assert!(mean(&[]).is_nan());
        assert!(minimum(&[]).is_nan());
        assert_eq!(abs_energy(&[]), 0.0);
        assert_eq!(variance(&[7.0]), 0.0);
        assert!(quantile(&[], 0.5).is_nan());
    }
}
