//! Small dense linear-algebra routines for the model-fitting extractors and
//! the PCA projection. Sizes here are tiny (tens of columns), so clarity and
//! determinism win over asymptotics.

/// Least-squares fit of `A·b = y` with per-coefficient statistics.
#[derive(Debug, Clone)]
pub struct LstsqFit {
    pub coeffs: Vec<f64>,
    /// Residual sum of squares.
    pub ssr: f64,
    /// Diagonal of `(AᵀA)⁻¹`, for coefficient standard errors.
    pub xtx_inv_diag: Vec<f64>,
}

/// Solves `min ‖A·b − y‖₂` by Householder QR. `cols` are the columns of `A`.
///
/// Columns are normalized internally so the rank test is scale-free, the way
/// polynomial-fitting routines condition a Vandermonde matrix. Returns `None`
/// when the system is rank deficient at working precision or has fewer rows
/// than columns.
pub fn lstsq(cols: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    lstsq_fit(cols, y).map(|f| f.coeffs)
}

pub fn lstsq_fit(cols: &[Vec<f64>], y: &[f64]) -> Option<LstsqFit> {
    let n = cols.len();
    let m = y.len();
    if n == 0 || m < n || cols.iter().any(|c| c.len() != m) {
        return None;
    }

    // Scale each column to unit norm; remember scales to undo at the end.
    let mut scales = Vec::with_capacity(n);
    let mut a = vec![vec![0.0; n]; m];
    for (j, col) in cols.iter().enumerate() {
        let norm = col.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return None;
        }
        scales.push(norm);
        for i in 0..m {
            a[i][j] = col[i] / norm;
        }
    }
    let mut qty = y.to_vec();

    const RANK_TOL: f64 = 1e-10;
    for k in 0..n {
        let norm = (k..m).map(|i| a[i][k] * a[i][k]).sum::<f64>().sqrt();
        if norm < RANK_TOL {
            return None;
        }
        let alpha = if a[k][k] >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0; m - k];
        v[0] = a[k][k] - alpha;
        for i in k + 1..m {
            v[i - k] = a[i][k];
        }
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        a[k][k] = alpha;
        for i in k + 1..m {
            a[i][k] = 0.0;
        }
        if vtv > 0.0 {
            for j in k + 1..n {
                let dot: f64 = (k..m).map(|i| v[i - k] * a[i][j]).sum();
                let f = 2.0 * dot / vtv;
                for i in k..m {
                    a[i][j] -= f * v[i - k];
                }
            }
            let dot: f64 = (k..m).map(|i| v[i - k] * qty[i]).sum();
            let f = 2.0 * dot / vtv;
            for i in k..m {
                qty[i] -= f * v[i - k];
            }
        }
    }

    // Back-substitute R·b = (Qᵀy)[..n].
    let mut coeffs = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = qty[i];
        for j in i + 1..n {
            s -= a[i][j] * coeffs[j];
        }
        coeffs[i] = s / a[i][i];
    }

    let ssr: f64 = (n..m).map(|i| qty[i] * qty[i]).sum();

    // Rows of R⁻¹ give the diagonal of (AᵀA)⁻¹ = R⁻¹·R⁻ᵀ.
    let mut xtx_inv_diag = vec![0.0; n];
    for i in 0..n {
        let mut row = vec![0.0; n];
        row[i] = 1.0 / a[i][i];
        for j in i + 1..n {
            let mut s = 0.0;
            for l in i..j {
                s -= row[l] * a[l][j];
            }
            row[j] = s / a[j][j];
        }
        xtx_inv_diag[i] = row.iter().map(|v| v * v).sum();
    }

    // Undo the column scaling.
    for j in 0..n {
        coeffs[j] /= scales[j];
        xtx_inv_diag[j] /= scales[j] * scales[j];
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return None;
    }
    Some(LstsqFit {
        coeffs,
        ssr,
        xtx_inv_diag,
    })
}

/// Eigen-decomposition of a symmetric matrix by the cyclic Jacobi method.
///
/// Returns `(eigenvalues, eigenvectors)` sorted by descending eigenvalue;
/// `eigenvectors[i]` is the unit eigenvector for `eigenvalues[i]`. The sweep
/// order is fixed, so results are deterministic.
pub fn symmetric_eigen(matrix: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let d = matrix.len();
    let mut a: Vec<Vec<f64>> = matrix.to_vec();
    let mut v = vec![vec![0.0; d]; d];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let frob: f64 = a
        .iter()
        .flat_map(|r| r.iter())
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt();
    let stop = 1e-14 * frob.max(f64::MIN_POSITIVE);

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..d {
            for q in p + 1..d {
                off += a[p][q] * a[p][q];
            }
        }
        if off.sqrt() <= stop {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                if a[p][q].abs() <= stop / (d as f64) {
                    continue;
                }
                let tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..d {
                    let aip = a[i][p];
                    let aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for j in 0..d {
                    let apj = a[p][j];
                    let aqj = a[q][j];
                    a[p][j] = c * apj - s * aqj;
                    a[q][j] = s * apj + c * aqj;
                }
                for i in 0..d {
                    let vip = v[i][p];
                    let viq = v[i][q];
                    v[i][p] = c * vip - s * viq;
                    v[i][q] = s * vip + c * viq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| a[j][j].partial_cmp(&a[i][i]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i][i]).collect();
    let eigenvectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&j| (0..d).map(|i| v[i][j]).collect())
        .collect();
    (eigenvalues, eigenvectors)
}
