//! Features of consecutive differences.

/// Sum of absolute differences between consecutive values. NaN for n < 2.
pub fn absolute_sum_of_changes(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return f64::NAN;
    }
    x.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// Mean absolute difference between consecutive values. NaN for n < 2.
pub fn mean_abs_change(x: &[f64]) -> f64 {
    absolute_sum_of_changes(x) / (x.len() as f64 - 1.0)
}

/// Mean difference, which telescopes to (last − first) / (n − 1).
pub fn mean_change(x: &[f64]) -> f64 {
    if x.len() < 2 {
        return f64::NAN;
    }
    (x[x.len() - 1] - x[0]) / (x.len() as f64 - 1.0)
}

/// Mean of the central second-difference approximation. NaN for n < 3.
pub fn mean_second_derivative_central(x: &[f64]) -> f64 {
    if x.len() < 3 {
        return f64::NAN;
    }
    let sum: f64 = x.windows(3).map(|w| (w[2] - 2.0 * w[1] + w[0]) / 2.0).sum();
    sum / (x.len() as f64 - 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_point_example() {
        let x = [1.0, 3.0, 2.0];
        assert_eq!(absolute_sum_of_changes(&x), 3.0);
        assert_eq!(mean_abs_change(&x), 1.5);
        assert_eq!(mean_change(&x), 0.5);
    }

    #[test]
    fn single_central_term() {
        // (4 - 2*2 + 1) / 2
        assert_eq!(mean_second_derivative_central(&[1.0, 2.0, 4.0]), 0.5);
    }

    #[test]
    fn constant_series_has_zero_changes() {
        let x = [4.0; 6];
        assert_eq!(absolute_sum_of_changes(&x), 0.0);
        assert_eq!(mean_abs_change(&x), 0.0);
        assert_eq!(mean_change(&x), 0.0);
        assert_eq!(mean_second_derivative_central(&x), 0.0);
    }

    #[test]
    fn short_series_are_undefined() {
        assert!(absolute_sum_of_changes(&[1.0]).is_nan());
        assert!(mean_abs_change(&[1.0]).is_nan());
        assert!(mean_change(&[1.0]).is_nan());
        assert!(mean_second_derivative_central(&[1.0, 2.0]).is_nan());
    }

    #[test]
    fn linear_series_second_derivative_is_zero() {
        let x: Vec<f64> = (0..10).map(|i| 3.0 * i as f64 + 1.0).collect();
        assert_eq!(mean_second_derivative_central(&x), 0.0);
        assert_eq!(mean_change(&x), 3.0);
    }
}
