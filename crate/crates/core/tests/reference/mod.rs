//! Plain, independent reference implementations used only by the
//! acceptance suite. Nothing here calls into the crate's numeric code:
//! spectra come from a naive DFT, least squares from refined normal
//! equations backed by nalgebra's Cholesky and inverse, special functions
//! from local continued-fraction and rational approximations, and every
//! statistic is written as a direct transcription of its definition with
//! no caching or algebraic shortcuts.

use jobclust_core::features::{AdfAttr, Feature, FftAttr, Param, TrendAttr};

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

fn population_variance(x: &[f64]) -> f64 {
    let mu = mean(x);
    x.iter().map(|v| (v - mu) * (v - mu)).sum::<f64>() / x.len() as f64
}

fn population_std(x: &[f64]) -> f64 {
    population_variance(x).sqrt()
}

fn ascending(x: &[f64]) -> Vec<f64> {
    let mut sorted = x.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("values are not NaN"));
    sorted
}

fn quantile(x: &[f64], q: f64) -> f64 {
    let sorted = ascending(x);
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

// ---------------------------------------------------------------------
// Linear algebra via nalgebra.

fn design_matrix(cols: &[Vec<f64>]) -> nalgebra::DMatrix<f64> {
    let rows = cols[0].len();
    nalgebra::DMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}

/// Least-squares solve through the normal equations, with one step of
/// iterative refinement to recover the digits the squared condition number
/// costs. None when XᵀX is not positive definite, which covers both
/// underdetermined and collinear designs.
fn lstsq(cols: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let a = design_matrix(cols);
    let b = nalgebra::DVector::from_column_slice(y);
    let chol = nalgebra::Cholesky::new(a.transpose() * &a)?;
    let mut beta = chol.solve(&(a.transpose() * &b));
    let residual = &b - &a * &beta;
    beta += chol.solve(&(a.transpose() * &residual));
    Some(beta.iter().copied().collect())
}

struct Ols {
    coeffs: Vec<f64>,
    ssr: f64,
    /// Diagonal of (XᵀX)⁻¹ for coefficient standard errors.
    xtx_inv_diag: Vec<f64>,
}

fn ols(cols: &[Vec<f64>], y: &[f64]) -> Option<Ols> {
    let coeffs = lstsq(cols, y)?;
    let a = design_matrix(cols);
    let beta = nalgebra::DVector::from_column_slice(&coeffs);
    let residuals = nalgebra::DVector::from_column_slice(y) - &a * &beta;
    let ssr = residuals.norm_squared();
    let xtx_inv = (a.transpose() * &a).try_inverse()?;
    Some(Ols {
        coeffs,
        ssr,
        xtx_inv_diag: (0..cols.len()).map(|j| xtx_inv[(j, j)]).collect(),
    })
}

// ---------------------------------------------------------------------
// Special functions.

/// Natural log of the gamma function (Lanczos approximation).
fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 6] = [
        76.18009172947146,
        -86.50532032941677,
        24.01409824083091,
        -1.231739572450155,
        0.1208650973866179e-2,
        -0.5395239384953e-5,
    ];
    let mut series = 1.000000000190015;
    for (i, c) in COEFFS.iter().enumerate() {
        series += c / (x + 1.0 + i as f64);
    }
    let tmp = x + 5.5;
    (x + 0.5) * tmp.ln() - tmp + (2.5066282746310005 * series / x).ln()
}

/// Continued fraction for the regularized incomplete beta (Lentz's method).
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 3e-16;
    const FPMIN: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < FPMIN {
        d = FPMIN;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = 1.0 + aa / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

/// Regularized incomplete beta function I_x(a, b).
fn incomplete_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let bt = (ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b)
        + a * x.ln()
        + b * (1.0 - x).ln())
    .exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        bt * beta_continued_fraction(a, b, x) / a
    } else {
        1.0 - bt * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

/// Two-sided p-value of a Student's t statistic with `df` degrees of
/// freedom, via the incomplete-beta identity.
fn student_t_two_sided(t: f64, df: f64) -> f64 {
    incomplete_beta(df / 2.0, 0.5, df / (df + t * t))
}

/// Complementary error function, rational Chebyshev fit (|err| < 1.2e-7).
fn erfc_approx(x: f64) -> f64 {
    let z = x.abs();
    let t = 1.0 / (1.0 + 0.5 * z);
    let ans = t
        * (-z * z - 1.26551223
            + t * (1.00002368
                + t * (0.37409196
                    + t * (0.09678418
                        + t * (-0.18628806
                            + t * (0.27886807
                                + t * (-1.13520398
                                    + t * (1.48851587
                                        + t * (-0.82215223 + t * 0.17087277)))))))))
        .exp();
    if x >= 0.0 {
        ans
    } else {
        2.0 - ans
    }
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc_approx(-z / std::f64::consts::SQRT_2)
}

// ---------------------------------------------------------------------
// Spectra via naive DFT.

/// One-sided DFT magnitudes |X_k| for k = 0..⌊n/2⌋, summed term by term.
fn dft_magnitudes(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..=n / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (t, &v) in x.iter().enumerate() {
                let angle = -2.0 * std::f64::consts::PI * (k * t) as f64 / n as f64;
                re += v * angle.cos();
                im += v * angle.sin();
            }
            re.hypot(im)
        })
        .collect()
}

/// Spectrum moments [centroid, variance, skew, kurtosis] computed from raw
/// moments and converted to central ones, the opposite path from a direct
/// central-moment accumulation.
fn fft_aggregated(x: &[f64]) -> [f64; 4] {
    if x.len() < 2 {
        return [f64::NAN; 4];
    }
    let w = dft_magnitudes(x);
    let total: f64 = w.iter().sum();
    if total == 0.0 {
        return [f64::NAN; 4];
    }
    let raw = |p: i32| -> f64 {
        w.iter()
            .enumerate()
            .map(|(i, &wi)| (i as f64).powi(p) * wi)
            .sum::<f64>()
            / total
    };
    let (m1, m2, m3, m4) = (raw(1), raw(2), raw(3), raw(4));
    let mu2 = m2 - m1 * m1;
    let mu3 = m3 - 3.0 * m1 * m2 + 2.0 * m1 * m1 * m1;
    let mu4 = m4 - 4.0 * m1 * m3 + 6.0 * m1 * m1 * m2 - 3.0 * m1 * m1 * m1 * m1;
    let (skew, kurt) = if mu2 == 0.0 {
        (f64::NAN, f64::NAN)
    } else {
        (mu3 / (mu2 * mu2.sqrt()), mu4 / (mu2 * mu2))
    };
    [m1, mu2, skew, kurt]
}

/// Welch PSD: Hann-windowed (sin² form), mean-detrended segments of length
/// min(256, n) with 50% overlap, naive DFT per segment, one-sided doubling
/// except at DC and an even-length Nyquist bin.
fn welch_density(x: &[f64], coeff: usize) -> f64 {
    let n = x.len();
    if n == 0 {
        return f64::NAN;
    }
    let nperseg = n.min(256);
    let bins = nperseg / 2 + 1;
    if coeff >= bins {
        return f64::NAN;
    }
    let window: Vec<f64> = if nperseg == 1 {
        vec![1.0]
    } else {
        // sin² form of the periodic Hann taper.
        (0..nperseg)
            .map(|k| {
                let s = (std::f64::consts::PI * k as f64 / nperseg as f64).sin();
                s * s
            })
            .collect()
    };
    let win_norm: f64 = window.iter().map(|w| w * w).sum();
    let step = nperseg - nperseg / 2;
    let mut acc = 0.0;
    let mut segments = 0;
    let mut start = 0;
    while start + nperseg <= n {
        let segment = &x[start..start + nperseg];
        let mu = mean(segment);
        let tapered: Vec<f64> = segment
            .iter()
            .zip(&window)
            .map(|(&v, &w)| (v - mu) * w)
            .collect();
        let (mut re, mut im) = (0.0, 0.0);
        for (t, &v) in tapered.iter().enumerate() {
            let angle = -2.0 * std::f64::consts::PI * (coeff * t) as f64 / nperseg as f64;
            re += v * angle.cos();
            im += v * angle.sin();
        }
        let mut power = (re * re + im * im) / win_norm;
        let one_sided_interior = coeff > 0 && !(nperseg % 2 == 0 && coeff == nperseg / 2);
        if one_sided_interior {
            power *= 2.0;
        }
        acc += power;
        segments += 1;
        start += step;
    }
    acc / segments as f64
}

// ---------------------------------------------------------------------
// Model fits.

/// [slope, intercept, rvalue, pvalue, stderr] of x regressed on 0..n-1,
/// following the conventions of a textbook simple linear regression with a
/// guarded correlation and a two-sided slope t-test.
fn linear_trend(x: &[f64]) -> [f64; 5] {
    let n = x.len();
    if n < 2 {
        return [f64::NAN; 5];
    }
    let nf = n as f64;
    let tmean = (nf - 1.0) / 2.0;
    let ymean = mean(x);
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (i, &v) in x.iter().enumerate() {
        let dt = i as f64 - tmean;
        let dy = v - ymean;
        sxx += dt * dt;
        syy += dy * dy;
        sxy += dt * dy;
    }
    sxx /= nf;
    syy /= nf;
    sxy /= nf;
    let rvalue = if syy == 0.0 {
        0.0
    } else {
        (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)
    };
    let slope = sxy / sxx;
    let intercept = ymean - slope * tmean;
    if n == 2 {
        let pvalue = if x[0] == x[1] { 1.0 } else { 0.0 };
        return [slope, intercept, rvalue, pvalue, 0.0];
    }
    let df = nf - 2.0;
    const TINY: f64 = 1e-20;
    let t = rvalue * (df / ((1.0 - rvalue + TINY) * (1.0 + rvalue + TINY))).sqrt();
    let pvalue = student_t_two_sided(t, df);
    let stderr = ((1.0 - rvalue * rvalue) * syy / sxx / df).sqrt();
    [slope, intercept, rvalue, pvalue, stderr]
}

/// [intercept, lag-1..lag-10 coefficients] of an order-10 autoregression.
fn ar_coefficients(x: &[f64]) -> Vec<f64> {
    const ORDER: usize = 10;
    let n = x.len();
    if n < ORDER + 2 {
        return vec![f64::NAN; ORDER + 1];
    }
    let rows = n - ORDER;
    let mut cols = vec![vec![1.0; rows]];
    for j in 1..=ORDER {
        cols.push(x[ORDER - j..n - j].to_vec());
    }
    lstsq(&cols, &x[ORDER..]).unwrap_or_else(|| vec![f64::NAN; ORDER + 1])
}

/// Ascending coefficients [c0..c3] of a cubic drift fitted to 30-quantile
/// bin means of (value, increment) pairs.
fn friedrich_coefficients(x: &[f64]) -> [f64; 4] {
    const BINS: usize = 30;
    const NAN4: [f64; 4] = [f64::NAN; 4];
    let n = x.len();
    if n < BINS + 1 {
        return NAN4;
    }
    let signal = &x[..n - 1];
    let sorted = ascending(signal);
    // Bin edges are the j/30 quantiles of the sorted signal. The edge values
    // come straight out of the data, so the interpolation position must be
    // computed as (len - 1) * q with q = j / 30; a different association
    // order can move an edge by one ulp and flip a boundary point's bin.
    let mut edges: Vec<f64> = (0..=BINS)
        .map(|j| {
            let h = (sorted.len() - 1) as f64 * (j as f64 / BINS as f64);
            let lo = h.floor() as usize;
            let hi = h.ceil() as usize;
            sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
        })
        .collect();
    edges.dedup();
    if edges.len() < 2 {
        return NAN4;
    }
    let interior = &edges[1..edges.len() - 1];
    let nbins = edges.len() - 1;
    let mut bucket_values = vec![Vec::new(); nbins];
    let mut bucket_deltas = vec![Vec::new(); nbins];
    for (i, &v) in signal.iter().enumerate() {
        let mut bin = 0;
        for &e in interior {
            if e < v {
                bin += 1;
            }
        }
        bucket_values[bin].push(v);
        bucket_deltas[bin].push(x[i + 1] - v);
    }
    let mut mean_values = Vec::new();
    let mut mean_deltas = Vec::new();
    for (vals, deltas) in bucket_values.iter().zip(&bucket_deltas) {
        if !vals.is_empty() {
            mean_values.push(mean(vals));
            mean_deltas.push(mean(deltas));
        }
    }
    if mean_values.len() < 4 {
        return NAN4;
    }
    let cols: Vec<Vec<f64>> = (0..4)
        .map(|deg| mean_values.iter().map(|&s| s.powi(deg)).collect())
        .collect();
    match lstsq(&cols, &mean_deltas) {
        Some(c) => [c[0], c[1], c[2], c[3]],
        None => NAN4,
    }
}

const MACKINNON_TAU_MAX: f64 = 2.74;
const MACKINNON_TAU_MIN: f64 = -18.83;
const MACKINNON_TAU_STAR: f64 = -1.61;
const MACKINNON_SMALL_P: [f64; 3] = [2.1659, 1.4412, 0.038269];
const MACKINNON_LARGE_P: [f64; 4] = [1.7339, 0.93202, -0.12745, -0.010368];

fn mackinnon_pvalue(teststat: f64) -> f64 {
    if teststat > MACKINNON_TAU_MAX {
        return 1.0;
    }
    if teststat < MACKINNON_TAU_MIN {
        return 0.0;
    }
    let poly: &[f64] = if teststat <= MACKINNON_TAU_STAR {
        &MACKINNON_SMALL_P
    } else {
        &MACKINNON_LARGE_P
    };
    let probit = poly
        .iter()
        .enumerate()
        .map(|(i, &c)| c * teststat.powi(i as i32))
        .sum::<f64>();
    normal_cdf(probit)
}

/// [teststat, pvalue, usedlag] of the constant-term unit-root test with
/// AIC lag selection over a common trimmed sample.
fn augmented_dickey_fuller(x: &[f64]) -> [f64; 3] {
    const NAN3: [f64; 3] = [f64::NAN; 3];
    let n = x.len();
    if n < 15 {
        return NAN3;
    }
    let maxlag = ((12.0 * (n as f64 / 100.0).powf(0.25)).floor() as usize).min(n / 2 - 2);
    let d: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();

    let design = |trim: usize, lags: usize| -> (Vec<Vec<f64>>, Vec<f64>) {
        let rows = d.len() - trim;
        let mut cols = vec![vec![1.0; rows], x[trim..n - 1].to_vec()];
        for j in 1..=lags {
            cols.push(d[trim - j..d.len() - j].to_vec());
        }
        (cols, d[trim..].to_vec())
    };

    let nobs = (d.len() - maxlag) as f64;
    let mut best: Option<(f64, usize)> = None;
    for lag in 0..=maxlag {
        let (cols, y) = design(maxlag, lag);
        let Some(fit) = ols(&cols, &y) else { continue };
        if fit.ssr <= 0.0 {
            continue;
        }
        let llf =
            -nobs / 2.0 * ((2.0 * std::f64::consts::PI).ln() + (fit.ssr / nobs).ln() + 1.0);
        let aic = -2.0 * llf + 2.0 * (lag + 2) as f64;
        if best.map_or(true, |(b, _)| aic < b) {
            best = Some((aic, lag));
        }
    }
    let Some((_, usedlag)) = best else {
        return NAN3;
    };

    let (cols, y) = design(usedlag, usedlag);
    let rows = y.len();
    let params = cols.len();
    let Some(fit) = ols(&cols, &y) else {
        return NAN3;
    };
    if fit.ssr <= 0.0 || rows <= params {
        return NAN3;
    }
    let s2 = fit.ssr / (rows - params) as f64;
    let se = (s2 * fit.xtx_inv_diag[1]).sqrt();
    if se == 0.0 || !se.is_finite() {
        return NAN3;
    }
    let teststat = fit.coeffs[1] / se;
    [teststat, mackinnon_pvalue(teststat), usedlag as f64]
}

// ---------------------------------------------------------------------
// Remaining per-series statistics, written as direct definitions.

fn binned_entropy(x: &[f64]) -> f64 {
    const BINS: usize = 10;
    if x.is_empty() {
        return f64::NAN;
    }
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == lo {
        return 0.0;
    }
    let mut counts = vec![0usize; BINS];
    for &v in x {
        let bin = (((v - lo) / (hi - lo)) * BINS as f64) as usize;
        counts[bin.min(BINS - 1)] += 1;
    }
    let mut h = 0.0;
    for &c in &counts {
        if c > 0 {
            let p = c as f64 / x.len() as f64;
            h -= p * p.ln();
        }
    }
    h
}

/// B then A counted from scratch over the same n − 2 template starts, each
/// with its own full Chebyshev scan.
fn sample_entropy(x: &[f64]) -> f64 {
    const M: usize = 2;
    let n = x.len();
    if n < M + 2 {
        return f64::NAN;
    }
    let r = 0.2 * population_std(x);
    if r == 0.0 || !r.is_finite() {
        return f64::NAN;
    }
    let count_matches = |template_len: usize| -> u64 {
        let starts = n - M;
        let mut matches = 0;
        for i in 0..starts {
            for j in i + 1..starts {
                let mut worst = 0.0f64;
                for k in 0..template_len {
                    worst = worst.max((x[i + k] - x[j + k]).abs());
                }
                if worst <= r {
                    matches += 1;
                }
            }
        }
        matches
    };
    let b = count_matches(M);
    let a = count_matches(M + 1);
    if a == 0 || b == 0 {
        return f64::NAN;
    }
    -((a as f64 / b as f64).ln())
}

fn autocorrelation(x: &[f64], lag: usize) -> f64 {
    if x.len() <= lag {
        return f64::NAN;
    }
    let var = population_variance(x);
    if var == 0.0 {
        return f64::NAN;
    }
    let mu = mean(x);
    let mut sum = 0.0;
    for i in 0..x.len() - lag {
        sum += (x[i] - mu) * (x[i + lag] - mu);
    }
    sum / ((x.len() - lag) as f64 * var)
}

fn index_mass_quantile(x: &[f64], q: f64) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    let total: f64 = x.iter().map(|v| v.abs()).sum();
    if total == 0.0 {
        return f64::NAN;
    }
    let mut cumulative = 0.0;
    for (i, &v) in x.iter().enumerate() {
        cumulative += v.abs();
        if cumulative >= q * total {
            return (i + 1) as f64 / x.len() as f64;
        }
    }
    1.0
}

fn number_peaks(x: &[f64], support: usize) -> f64 {
    let n = x.len();
    if n <= 2 * support {
        return 0.0;
    }
    let mut peaks = 0;
    for i in support..n - support {
        let mut is_peak = true;
        for j in 1..=support {
            if x[i] <= x[i - j] || x[i] <= x[i + j] {
                is_peak = false;
                break;
            }
        }
        if is_peak {
            peaks += 1;
        }
    }
    peaks as f64
}

fn skewness(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    if x.len() < 3 {
        return f64::NAN;
    }
    let mu = mean(x);
    let m2 = x.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n;
    let m3 = x.iter().map(|v| (v - mu).powi(3)).sum::<f64>() / n;
    if m2 == 0.0 {
        return f64::NAN;
    }
    (m3 / m2.powf(1.5)) * (n * (n - 1.0)).sqrt() / (n - 2.0)
}

fn kurtosis(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    if x.len() < 4 {
        return f64::NAN;
    }
    let mu = mean(x);
    let m2 = x.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / n;
    let m4 = x.iter().map(|v| (v - mu).powi(4)).sum::<f64>() / n;
    if m2 == 0.0 {
        return f64::NAN;
    }
    ((n + 1.0) * (m4 / (m2 * m2) - 3.0) + 6.0) * (n - 1.0) / ((n - 2.0) * (n - 3.0))
}

fn value_multiplicities(x: &[f64]) -> Vec<usize> {
    let sorted = ascending(x);
    let mut runs = Vec::new();
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i + 1;
        while j < sorted.len() && sorted[j] == sorted[i] {
            j += 1;
        }
        runs.push(j - i);
        i = j;
    }
    runs
}

/// Relative position of the first element no other element beats.
fn first_index_of(x: &[f64], beats: impl Fn(f64, f64) -> bool) -> f64 {
    let mut best = 0;
    for (i, &v) in x.iter().enumerate() {
        if beats(v, x[best]) {
            best = i;
        }
    }
    best as f64 / x.len() as f64
}

fn longest_run(x: &[f64], above: bool) -> f64 {
    let mu = mean(x);
    let (mut longest, mut current) = (0usize, 0usize);
    for &v in x {
        let hit = if above { v > mu } else { v < mu };
        if hit {
            current += 1;
            longest = longest.max(current);
        } else {
            current = 0;
        }
    }
    longest as f64
}

fn c3(x: &[f64], lag: usize) -> f64 {
    if x.len() <= 2 * lag {
        return f64::NAN;
    }
    let terms = x.len() - 2 * lag;
    let mut sum = 0.0;
    for i in 0..terms {
        sum += x[i + 2 * lag] * x[i + lag] * x[i];
    }
    sum / terms as f64
}

fn time_reversal_asymmetry(x: &[f64], lag: usize) -> f64 {
    if x.len() <= 2 * lag {
        return f64::NAN;
    }
    let terms = x.len() - 2 * lag;
    let mut sum = 0.0;
    for i in 0..terms {
        sum += x[i + 2 * lag] * x[i + 2 * lag] * x[i + lag] - x[i + lag] * x[i] * x[i];
    }
    sum / terms as f64
}

/// Reference value for one expanded feature column.
pub fn reference_value(x: &[f64], feature: Feature, param: Option<Param>) -> f64 {
    match (feature, param) {
        (Feature::AbsEnergy, None) => x.iter().map(|v| v * v).sum(),
        (Feature::AbsoluteSumOfChanges, None) => {
            if x.len() < 2 {
                f64::NAN
            } else {
                (1..x.len()).map(|i| (x[i] - x[i - 1]).abs()).sum()
            }
        }
        (Feature::ArCoefficient, Some(Param::Coeff(c))) => ar_coefficients(x)[c],
        (Feature::AugmentedDickeyFuller, Some(Param::Adf(attr))) => {
            let [teststat, pvalue, usedlag] = augmented_dickey_fuller(x);
            match attr {
                AdfAttr::Teststat => teststat,
                AdfAttr::Pvalue => pvalue,
                AdfAttr::Usedlag => usedlag,
            }
        }
        (Feature::Autocorrelation, Some(Param::Lag(l))) => autocorrelation(x, l),
        (Feature::BinnedEntropy, None) => binned_entropy(x),
        (Feature::C3, Some(Param::Lag(l))) => c3(x, l),
        (Feature::CountAboveMean, None) => {
            let mu = mean(x);
            x.iter().filter(|&&v| v > mu).count() as f64
        }
        (Feature::CountBelowMean, None) => {
            let mu = mean(x);
            x.iter().filter(|&&v| v < mu).count() as f64
        }
        (Feature::FftAggregated, Some(Param::Fft(attr))) => {
            let [centroid, variance, skew, kurt] = fft_aggregated(x);
            match attr {
                FftAttr::Centroid => centroid,
                FftAttr::Variance => variance,
                FftAttr::Skew => skew,
                FftAttr::Kurtosis => kurt,
            }
        }
        (Feature::FirstLocationOfMaximum, None) => first_index_of(x, |a, b| a > b),
        (Feature::FirstLocationOfMinimum, None) => first_index_of(x, |a, b| a < b),
        (Feature::FriedrichCoefficients, Some(Param::Coeff(c))) => friedrich_coefficients(x)[c],
        (Feature::IndexMassQuantile, Some(Param::Quantile(t))) => {
            index_mass_quantile(x, t as f64 / 10.0)
        }
        (Feature::Kurtosis, None) => kurtosis(x),
        (Feature::Length, None) => x.len() as f64,
        (Feature::LinearTrend, Some(Param::Trend(attr))) => {
            let [slope, intercept, rvalue, pvalue, stderr] = linear_trend(x);
            match attr {
                TrendAttr::Slope => slope,
                TrendAttr::Intercept => intercept,
                TrendAttr::Rvalue => rvalue,
                TrendAttr::Pvalue => pvalue,
                TrendAttr::Stderr => stderr,
            }
        }
        (Feature::LongestStrikeAboveMean, None) => longest_run(x, true),
        (Feature::LongestStrikeBelowMean, None) => longest_run(x, false),
        (Feature::Maximum, None) => x.iter().copied().fold(f64::NAN, f64::max),
        (Feature::Mean, None) => mean(x),
        (Feature::MeanAbsChange, None) => {
            if x.len() < 2 {
                f64::NAN
            } else {
                (1..x.len()).map(|i| (x[i] - x[i - 1]).abs()).sum::<f64>()
                    / (x.len() - 1) as f64
            }
        }
        (Feature::MeanChange, None) => {
            if x.len() < 2 {
                f64::NAN
            } else {
                // Mean of consecutive differences, not telescoped.
                (1..x.len()).map(|i| x[i] - x[i - 1]).sum::<f64>() / (x.len() - 1) as f64
            }
        }
        (Feature::MeanSecondDerivativeCentral, None) => {
            if x.len() < 3 {
                f64::NAN
            } else {
                (1..x.len() - 1)
                    .map(|i| (x[i + 1] - 2.0 * x[i] + x[i - 1]) / 2.0)
                    .sum::<f64>()
                    / (x.len() - 2) as f64
            }
        }
        (Feature::Median, None) => quantile(x, 0.5),
        (Feature::Minimum, None) => x.iter().copied().fold(f64::NAN, f64::min),
        (Feature::NumberPeaks, Some(Param::Support(s))) => number_peaks(x, s),
        (Feature::PercentageOfReoccurringDatapointsToAllDatapoints, None) => {
            let repeated: usize = value_multiplicities(x)
                .into_iter()
                .filter(|&run| run > 1)
                .sum();
            repeated as f64 / x.len() as f64
        }
        (Feature::PercentageOfReoccurringValuesToAllValues, None) => {
            let runs = value_multiplicities(x);
            runs.iter().filter(|&&run| run > 1).count() as f64 / runs.len() as f64
        }
        (Feature::Quantile, Some(Param::Quantile(t))) => quantile(x, t as f64 / 10.0),
        (Feature::SampleEntropy, None) => sample_entropy(x),
        (Feature::Skewness, None) => skewness(x),
        (Feature::SpktWelchDensity, Some(Param::Coeff(c))) => welch_density(x, c),
        (Feature::StandardDeviation, None) => population_std(x),
        (Feature::TimeReversalAsymmetryStatistic, Some(Param::Lag(l))) => {
            time_reversal_asymmetry(x, l)
        }
        (Feature::Variance, None) => population_variance(x),
        (feature, param) => unreachable!("no reference for {feature:?} {param:?}"),
    }
}

// ---------------------------------------------------------------------
// Clustering oracles.

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Mean silhouette computed per point from first principles: a(i) over the
/// point's own cluster, b(i) as the minimum mean distance to any other
/// non-empty cluster, singletons scoring zero.
pub fn brute_force_silhouette(data: &[Vec<f64>], labels: &[usize]) -> f64 {
    let n = data.len();
    let k = labels.iter().max().expect("non-empty") + 1;
    let mut sizes = vec![0usize; k];
    for &l in labels {
        sizes[l] += 1;
    }
    let mut total = 0.0;
    for i in 0..n {
        let own = labels[i];
        if sizes[own] == 1 {
            continue;
        }
        let mut a = 0.0;
        for j in 0..n {
            if j != i && labels[j] == own {
                a += euclidean(&data[i], &data[j]);
            }
        }
        a /= (sizes[own] - 1) as f64;
        let mut b = f64::INFINITY;
        for c in 0..k {
            if c == own || sizes[c] == 0 {
                continue;
            }
            let mut d = 0.0;
            for j in 0..n {
                if labels[j] == c {
                    d += euclidean(&data[i], &data[j]);
                }
            }
            b = b.min(d / sizes[c] as f64);
        }
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    total / n as f64
}
