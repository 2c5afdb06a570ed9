//! Features obtained by fitting models to the series: a least-squares line
//! against sample index, an order-10 autoregression, the cubic drift term of
//! a Langevin model, and the augmented Dickey-Fuller unit-root test.

use crate::features::basic::{mean, quantile_sorted};
use crate::linalg;
use statrs::distribution::{ContinuousCDF, Normal, StudentsT};

/// Order of the autoregressive fit.
pub const AR_ORDER: usize = 10;

/// Number of quantile bins used by the Langevin drift fit.
pub const FRIEDRICH_BINS: usize = 30;

/// Least-squares line of the series against t = 0..n−1.
#[derive(Debug, Clone, Copy)]
pub struct LinearTrend {
    pub slope: f64,
    pub intercept: f64,
    pub rvalue: f64,
    pub pvalue: f64,
    pub stderr: f64,
}

/// Ordinary least-squares regression of x on the sample index, with the
/// two-sided p-value of the slope's t-test and the slope's standard error.
/// All fields are NaN for n < 2.
pub fn linear_trend(x: &[f64]) -> LinearTrend {
    let n = x.len();
    if n < 2 {
        return LinearTrend {
            slope: f64::NAN,
            intercept: f64::NAN,
            rvalue: f64::NAN,
            pvalue: f64::NAN,
            stderr: f64::NAN,
        };
    }
    let nf = n as f64;
    let tmean = (nf - 1.0) / 2.0;
    let ymean = mean(x);
    let (mut ssxm, mut ssym, mut ssxym) = (0.0, 0.0, 0.0);
    for (i, &v) in x.iter().enumerate() {
        let dt = i as f64 - tmean;
        let dy = v - ymean;
        ssxm += dt * dt;
        ssym += dy * dy;
        ssxym += dt * dy;
    }
    ssxm /= nf;
    ssym /= nf;
    ssxym /= nf;
    let rvalue = if ssym == 0.0 {
        0.0
    } else {
        (ssxym / (ssxm * ssym).sqrt()).clamp(-1.0, 1.0)
    };
    let slope = ssxym / ssxm;
    let intercept = ymean - slope * tmean;
    let (pvalue, stderr) = if n == 2 {
        (if x[0] == x[1] { 1.0 } else { 0.0 }, 0.0)
    } else {
        let df = nf - 2.0;
        // The tiny offset keeps the t statistic finite when |r| = 1, the
        // same guard scipy's linregress applies.
        const TINY: f64 = 1e-20;
        let t = rvalue * (df / ((1.0 - rvalue + TINY) * (1.0 + rvalue + TINY))).sqrt();
        let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 1");
        let pvalue = 2.0 * dist.cdf(-t.abs());
        let stderr = ((1.0 - rvalue * rvalue) * ssym / ssxm / df).sqrt();
        (pvalue, stderr)
    };
    LinearTrend {
        slope,
        intercept,
        rvalue,
        pvalue,
        stderr,
    }
}

/// Least-squares autoregression of order 10 with intercept.
///
/// Returns `[intercept, lag‑1 coefficient, ..., lag‑10 coefficient]`, or all
/// NaN when the series is too short (n < 12) or the design matrix is
/// rank-deficient (which includes 12 ≤ n < 21, where the system is
/// underdetermined).
pub fn ar_coefficients(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n < AR_ORDER + 2 {
        return vec![f64::NAN; AR_ORDER + 1];
    }
    let rows = n - AR_ORDER;
    let y = &x[AR_ORDER..];
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(AR_ORDER + 1);
    cols.push(vec![1.0; rows]);
    for j in 1..=AR_ORDER {
        cols.push(x[AR_ORDER - j..n - j].to_vec());
    }
    linalg::lstsq(&cols, y).unwrap_or_else(|| vec![f64::NAN; AR_ORDER + 1])
}

/// Coefficients of a cubic polynomial drift fitted to quantile-binned
/// (value, increment) pairs, in ascending-degree order `[c0, c1, c2, c3]`.
///
/// The n−1 pairs (x[i], x[i+1]−x[i]) are partitioned into 30 quantile bins
/// of the value coordinate (duplicate bin edges merged, bins right-closed),
/// each non-empty bin is reduced to its mean value and mean increment, and
/// the cubic is fitted to those bin means. All NaN when n < 31 or fewer than
/// 4 bins are non-empty.
pub fn friedrich_coefficients(x: &[f64]) -> [f64; 4] {
    const NAN4: [f64; 4] = [f64::NAN; 4];
    let n = x.len();
    if n < FRIEDRICH_BINS + 1 {
        return NAN4;
    }
    let signal = &x[..n - 1];
    let mut sorted = signal.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mut edges: Vec<f64> = (0..=FRIEDRICH_BINS)
        .map(|j| quantile_sorted(&sorted, j as f64 / FRIEDRICH_BINS as f64))
        .collect();
    edges.dedup();
    if edges.len() < 2 {
        return NAN4;
    }
    let nbins = edges.len() - 1;
    let interior = &edges[1..nbins];
    let mut sum_signal = vec![0.0; nbins];
    let mut sum_delta = vec![0.0; nbins];
    let mut counts = vec![0usize; nbins];
    for (i, &v) in signal.iter().enumerate() {
        let bin = interior.partition_point(|&e| e < v);
        sum_signal[bin] += v;
        sum_delta[bin] += x[i + 1] - v;
        counts[bin] += 1;
    }
    let (mut means_s, mut means_d) = (Vec::new(), Vec::new());
    for b in 0..nbins {
        if counts[b] > 0 {
            means_s.push(sum_signal[b] / counts[b] as f64);
            means_d.push(sum_delta[b] / counts[b] as f64);
        }
    }
    if means_s.len() < 4 {
        return NAN4;
    }
    let cols: Vec<Vec<f64>> = (0..4)
        .map(|deg| means_s.iter().map(|&s| s.powi(deg)).collect())
        .collect();
    match linalg::lstsq(&cols, &means_d) {
        Some(c) => [c[0], c[1], c[2], c[3]],
        None => NAN4,
    }
}

/// Augmented Dickey-Fuller test result.
#[derive(Debug, Clone, Copy)]
pub struct AdfOutcome {
    pub teststat: f64,
    pub pvalue: f64,
    pub usedlag: f64,
}

impl AdfOutcome {
    fn undefined() -> AdfOutcome {
        AdfOutcome {
            teststat: f64::NAN,
            pvalue: f64::NAN,
            usedlag: f64::NAN,
        }
    }
}

/// Augmented Dickey-Fuller unit-root test with a constant term.
///
/// The difference lag order is chosen by AIC over 0..=⌊12·(n/100)^¼⌋ on a
/// common sample trimmed to the maximum candidate lag, then the regression
/// is refitted at the chosen lag on its maximal sample. The t statistic of
/// the lagged-level coefficient is the test statistic and its p-value comes
/// from the MacKinnon regression-surface approximation. All NaN when n < 15
/// or the regression is degenerate (collinear design or zero residual).
pub fn augmented_dickey_fuller(x: &[f64]) -> AdfOutcome {
    let n = x.len();
    if n < 15 {
        return AdfOutcome::undefined();
    }
    let maxlag = ((12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize).min(n / 2 - 2);
    let xdiff: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();

    let design = |trim: usize, lags: usize| -> (Vec<Vec<f64>>, &[f64]) {
        let rows = xdiff.len() - trim;
        let mut cols = Vec::with_capacity(lags + 2);
        cols.push(vec![1.0; rows]);
        cols.push(x[trim..n - 1].to_vec());
        for j in 1..=lags {
            cols.push(xdiff[trim - j..xdiff.len() - j].to_vec());
        }
        (cols, &xdiff[trim..])
    };

    let mut best: Option<(f64, usize)> = None;
    let common_rows = (xdiff.len() - maxlag) as f64;
    for lag in 0..=maxlag {
        let (cols, y) = design(maxlag, lag);
        let Some(fit) = linalg::lstsq_fit(&cols, y) else {
            continue;
        };
        if fit.ssr <= 0.0 {
            continue;
        }
        let llf = -common_rows / 2.0
            * ((2.0 * std::f64::consts::PI).ln() + (fit.ssr / common_rows).ln() + 1.0);
        let aic = -2.0 * llf + 2.0 * (lag + 2) as f64;
        if best.map_or(true, |(b, _)| aic < b) {
            best = Some((aic, lag));
        }
    }
    let Some((_, usedlag)) = best else {
        return AdfOutcome::undefined();
    };

    let (cols, y) = design(usedlag, usedlag);
    let rows = y.len();
    let params = cols.len();
    let Some(fit) = linalg::lstsq_fit(&cols, y) else {
        return AdfOutcome::undefined();
    };
    if fit.ssr <= 0.0 || rows <= params {
        return AdfOutcome::undefined();
    }
    let s2 = fit.ssr / (rows - params) as f64;
    let se = (s2 * fit.xtx_inv_diag[1]).sqrt();
    if se == 0.0 || !se.is_finite() {
        return AdfOutcome::undefined();
    }
    let teststat = fit.coeffs[1] / se;
    AdfOutcome {
        teststat,
        pvalue: mackinnon_pvalue(teststat),
        usedlag: usedlag as f64,
    }
}

/// MacKinnon regression-surface p-value for a constant-only unit-root test
/// on a single series.
pub fn mackinnon_pvalue(teststat: f64) -> f64 {
    const TAU_MAX: f64 = 2.74;
    const TAU_MIN: f64 = -18.83;
    const TAU_STAR: f64 = -1.61;
    const SMALL_P: [f64; 3] = [2.1659, 1.4412, 0.038269];
    const LARGE_P: [f64; 4] = [1.7339, 0.93202, -0.12745, -0.010368];
    if teststat > TAU_MAX {
        return 1.0;
    }
    if teststat < TAU_MIN {
        return 0.0;
    }
    let probit = if teststat <= TAU_STAR {
        polyval(&SMALL_P, teststat)
    } else {
        polyval(&LARGE_P, teststat)
    };
    Normal::new(0.0, 1.0).expect("unit normal").cdf(probit)
}

/// Evaluates a polynomial given ascending-degree coefficients.
fn polyval(ascending: &[f64], x: f64) -> f64 {
    ascending.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}
