//! Deterministic fixtures shared by the benchmark suite.

/// Uniform values in [0, 1) from a 31-bit linear congruential generator.
pub fn lcg_series(n: usize, seed: u64) -> Vec<f64> {
    let mut state = seed;
    (0..n)
        .map(|_| {
            state = (1103515245u64.wrapping_mul(state).wrapping_add(12345)) % (1 << 31);
            state as f64 / (1u64 << 31) as f64
        })
        .collect()
}

/// `n` points in `dims` dimensions around `centers` well-separated centers
/// assigned round-robin, with unit-box noise.
pub fn blobs(n: usize, dims: usize, centers: usize, seed: u64) -> Vec<Vec<f64>> {
    let raw = lcg_series(n * dims, seed);
    (0..n)
        .map(|i| {
            let offset = (i % centers) as f64 * 10.0;
            raw[i * dims..(i + 1) * dims]
                .iter()
                .map(|v| offset + v)
                .collect()
        })
        .collect()
}
