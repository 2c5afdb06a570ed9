//! Frequency-domain features: aggregated FFT spectrum moments and Welch
//! power spectral density bins.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

/// Moments of the one-sided FFT magnitude spectrum, treated as an
/// unnormalized distribution over bin index: [centroid, variance, skew,
/// kurtosis]. Kurtosis is the raw (non-excess) fourth standardized moment.
///
/// All four are NaN for n < 2 or a zero total spectrum; skew and kurtosis
/// are NaN when the spectral variance is zero (all mass in one bin).
pub fn fft_aggregated(x: &[f64]) -> [f64; 4] {
    if x.len() < 2 {
        return [f64::NAN; 4];
    }
    let spectrum = magnitude_spectrum(x);
    let total: f64 = spectrum.iter().sum();
    if total == 0.0 {
        return [f64::NAN; 4];
    }
    let centroid = spectrum
        .iter()
        .enumerate()
        .map(|(i, w)| i as f64 * w)
        .sum::<f64>()
        / total;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for (i, w) in spectrum.iter().enumerate() {
        let d = i as f64 - centroid;
        let d2 = d * d;
        m2 += w * d2;
        m3 += w * d2 * d;
        m4 += w * d2 * d2;
    }
    m2 /= total;
    m3 /= total;
    m4 /= total;
    let (skew, kurtosis) = if m2 == 0.0 {
        (f64::NAN, f64::NAN)
    } else {
        (m3 / (m2 * m2.sqrt()), m4 / (m2 * m2))
    };
    [centroid, m2, skew, kurtosis]
}

/// One-sided magnitudes |X_k| for k = 0..⌊n/2⌋.
fn magnitude_spectrum(x: &[f64]) -> Vec<f64> {
    let mut buf: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(x.len()).process(&mut buf);
    buf[..=x.len() / 2].iter().map(|c| c.norm()).collect()
}

/// Welch power-spectral-density estimate at one bin index, or NaN when the
/// bin does not exist for the segment length.
pub fn spkt_welch_density(x: &[f64], coeff: usize) -> f64 {
    welch_psd(x).get(coeff).copied().unwrap_or(f64::NAN)
}

/// Welch PSD over Hann-windowed, mean-detrended segments of length
/// min(256, n) with 50% overlap, density scaling, and unit sampling rate.
/// Returns the one-sided estimate (segment_len / 2 + 1 bins).
pub fn welch_psd(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return Vec::new();
    }
    let nperseg = n.min(256);
    let step = nperseg - nperseg / 2;
    let window: Vec<f64> = if nperseg == 1 {
        vec![1.0]
    } else {
        (0..nperseg)
            .map(|k| {
                0.5 * (1.0 - (2.0 * std::f64::consts::PI * k as f64 / nperseg as f64).cos())
            })
            .collect()
    };
    let win_norm: f64 = window.iter().map(|w| w * w).sum();
    let fft = FftPlanner::new().plan_fft_forward(nperseg);
    let bins = nperseg / 2 + 1;
    let mut psd = vec![0.0; bins];
    let mut segments = 0usize;
    let mut buf = vec![Complex::new(0.0, 0.0); nperseg];
    let mut start = 0;
    while start + nperseg <= n {
        let segment = &x[start..start + nperseg];
        let mu: f64 = segment.iter().sum::<f64>() / nperseg as f64;
        for (slot, (&v, &w)) in buf.iter_mut().zip(segment.iter().zip(&window)) {
            *slot = Complex::new((v - mu) * w, 0.0);
        }
        fft.process(&mut buf);
        for (b, acc) in psd.iter_mut().enumerate() {
            let mut power = buf[b].norm_sqr() / win_norm;
            let interior = b > 0 && (nperseg % 2 == 1 || b < nperseg / 2);
            if interior {
                power *= 2.0;
            }
            *acc += power;
        }
        segments += 1;
        start += step;
    }
    for acc in &mut psd {
        *acc /= segments as f64;
    }
    psd
}
