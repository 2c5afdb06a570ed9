//! Features of value repetition and of the binned value distribution.

/// Fraction of distinct values that occur more than once.
pub fn percentage_of_reoccurring_values_to_all_values(x: &[f64]) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    let (mut distinct, mut reoccurring) = (0usize, 0usize);
    for run in value_runs(x) {
        distinct += 1;
        if run > 1 {
            reoccurring += 1;
        }
    }
    reoccurring as f64 / distinct as f64
}

/// Fraction of data points whose value occurs more than once.
pub fn percentage_of_reoccurring_datapoints_to_all_datapoints(x: &[f64]) -> f64 {
    if x.is_empty() {
        return f64::NAN;
    }
    let repeated_points: usize = value_runs(x).into_iter().filter(|&run| run > 1).sum();
    repeated_points as f64 / x.len() as f64
}

/// Shannon entropy (natural log) of a 10-bin equal-width histogram spanning
/// [min, max]. A constant series occupies one bin and scores 0.
pub fn binned_entropy(x: &[f64]) -> f64 {
    const BINS: usize = 10;
    if x.is_empty() {
        return f64::NAN;
    }
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = hi - lo;
    if width == 0.0 {
        return 0.0;
    }
    let mut counts = [0usize; BINS];
    for &v in x {
        let bin = (((v - lo) / width) * BINS as f64) as usize;
        counts[bin.min(BINS - 1)] += 1;
    }
    let n = x.len() as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Multiplicities of each distinct value, in ascending value order.
fn value_runs(x: &[f64]) -> Vec<usize> {
    let mut sorted = x.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
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
