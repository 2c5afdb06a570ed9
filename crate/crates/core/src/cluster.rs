//! K-means clustering with silhouette-driven choice of K.
//!
//! Fitting is deterministic for a given seed: restarts and k-means++ draws
//! come from a counter-based ChaCha stream, ties in assignment go to the
//! lowest centroid index, and the K sweep derives one sub-seed per K.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

const MAX_ITERATIONS: usize = 300;
const SHIFT_TOLERANCE: f64 = 1e-4;
const RESTARTS: u64 = 10;

/// A fitted K-means model. Centroids are the means of their members, every
/// cluster is non-empty, and `inertia` is the sum of squared distances of
/// each row to its centroid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansModel {
    pub k: usize,
    pub centroids: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub inertia: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Inertia after each Lloyd iteration of the winning restart.
    /// Diagnostic only; not serialized.
    #[serde(skip)]
    pub inertia_trace: Vec<f64>,
}

/// One K tried during a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KEvaluation {
    pub k: usize,
    pub silhouette: f64,
    pub inertia: f64,
}

/// Result of sweeping K over a range and keeping the best silhouette.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KSweepResult {
    pub kmin: usize,
    /// Upper end of the sweep actually run (clamped to rows - 1).
    pub kmax: usize,
    /// True when the requested kmax exceeded rows - 1 and was clamped.
    pub clamped: bool,
    pub evaluations: Vec<KEvaluation>,
    pub best_k: usize,
    pub best_silhouette: f64,
    /// Quality band of the best silhouette, see [`silhouette_quality`].
    pub quality: String,
    pub best_model: KMeansModel,
}

#[derive(Debug, Error, PartialEq)]
pub enum ClusterError {
    #[error("dimension mismatch: {detail}")]
    DimensionMismatch { detail: String },
    #[error("{n} rows are too few; at least {min} are needed")]
    TooFewRows { n: usize, min: usize },
    #[error("input contains a non-finite value")]
    NonFiniteInput,
    #[error("k = {k} is not usable with {n} rows")]
    InvalidK { k: usize, n: usize },
    #[error("silhouette needs at least two non-empty clusters")]
    SingleCluster,
}

/// Euclidean distance between two equally sized vectors.
pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "points must have equal dimension");
    sq_dist(a, b).sqrt()
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum()
}

/// Maps a silhouette score to the conventional quality bands.
pub fn silhouette_quality(s: f64) -> &'static str {
    if s > 0.71 {
        "excellent"
    } else if s > 0.51 {
        "acceptable"
    } else if s > 0.25 {
        "poor"
    } else {
        "not acceptable"
    }
}

fn validate(data: &[Vec<f64>]) -> Result<(usize, usize), ClusterError> {
    let n = data.len();
    if n == 0 {
        return Err(ClusterError::TooFewRows { n: 0, min: 1 });
    }
    let dim = data[0].len();
    if dim == 0 {
        return Err(ClusterError::DimensionMismatch {
            detail: "rows have zero columns".into(),
        });
    }
    for (i, row) in data.iter().enumerate() {
        if row.len() != dim {
            return Err(ClusterError::DimensionMismatch {
                detail: format!("row 0 has {dim} columns, row {i} has {}", row.len()),
            });
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(ClusterError::NonFiniteInput);
        }
    }
    Ok((n, dim))
}

/// Fits K-means with `RESTARTS` k-means++ initializations and keeps the
/// restart with the lowest inertia (first winner on exact ties).
pub fn kmeans_fit(data: &[Vec<f64>], k: usize, seed: u64) -> Result<KMeansModel, ClusterError> {
    let (n, _) = validate(data)?;
    if k == 0 || k > n {
        return Err(ClusterError::InvalidK { k, n });
    }
    let mut best: Option<KMeansModel> = None;
    for restart in 0..RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart));
        let model = lloyd(data, k, &mut rng);
        if best.as_ref().map_or(true, |b| model.inertia < b.inertia) {
            best = Some(model);
        }
    }
    Ok(best.expect("at least one restart ran"))
}

fn lloyd(data: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> KMeansModel {
    let n = data.len();
    let dim = data[0].len();
    let mut centroids = kmeanspp_init(data, k, rng);
    let mut labels = vec![0usize; n];
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let counts = assign(data, &centroids, &mut labels);
        let counts = repair_empty(data, &mut centroids, &mut labels, counts);
        let next = means(data, &labels, &counts, dim);
        let shift = centroids
            .iter()
            .zip(&next)
            .map(|(a, b)| euclidean(a, b))
            .fold(0.0f64, f64::max);
        centroids = next;
        let inertia = total_inertia(data, &labels, &centroids);
        if let Some(&previous) = trace.last() {
            debug_assert!(
                inertia <= previous * (1.0 + 1e-9) + 1e-12,
                "inertia rose from {previous} to {inertia}"
            );
        }
        trace.push(inertia);
        if shift < SHIFT_TOLERANCE {
            converged = true;
            break;
        }
    }
    KMeansModel {
        k,
        inertia: *trace.last().expect("at least one iteration"),
        centroids,
        labels,
        iterations,
        converged,
        inertia_trace: trace,
    }
}

fn kmeanspp_init(data: &[Vec<f64>], k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = data.len();
    let mut centroids: Vec<Vec<f64>> = Vec::with_capacity(k);
    centroids.push(data[rng.gen_range(0..n)].clone());
    let mut d2 = vec![f64::INFINITY; n];
    while centroids.len() < k {
        let last = centroids.last().expect("non-empty");
        for (i, p) in data.iter().enumerate() {
            d2[i] = d2[i].min(sq_dist(p, last));
        }
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            // Sample proportionally to squared distance via cumulative scan.
            let u = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = None;
            for (i, &w) in d2.iter().enumerate() {
                acc += w;
                if acc > u {
                    pick = Some(i);
                    break;
                }
            }
            pick.unwrap_or_else(|| {
                d2.iter().rposition(|&w| w > 0.0).expect("total > 0")
            })
        } else {
            rng.gen_range(0..n)
        };
        centroids.push(data[next].clone());
    }
    centroids
}

/// Assigns each row to its nearest centroid, lowest index on ties.
/// Returns per-cluster counts.
fn assign(data: &[Vec<f64>], centroids: &[Vec<f64>], labels: &mut [usize]) -> Vec<usize> {
    let mut counts = vec![0usize; centroids.len()];
    for (i, point) in data.iter().enumerate() {
        let mut best = 0;
        let mut best_d = sq_dist(point, &centroids[0]);
        for (c, centroid) in centroids.iter().enumerate().skip(1) {
            let d = sq_dist(point, centroid);
            if d < best_d {
                best = c;
                best_d = d;
            }
        }
        labels[i] = best;
        counts[best] += 1;
    }
    counts
}

/// Re-seats each empty cluster on the point farthest from its current
/// centroid, never draining a cluster to zero members.
fn repair_empty(
    data: &[Vec<f64>],
    centroids: &mut [Vec<f64>],
    labels: &mut [usize],
    mut counts: Vec<usize>,
) -> Vec<usize> {
    for empty in 0..centroids.len() {
        if counts[empty] > 0 {
            continue;
        }
        let mut donor = None;
        let mut donor_d = f64::NEG_INFINITY;
        for (i, point) in data.iter().enumerate() {
            if counts[labels[i]] < 2 {
                continue;
            }
            let d = sq_dist(point, &centroids[labels[i]]);
            if d > donor_d {
                donor = Some(i);
                donor_d = d;
            }
        }
        let donor = donor.expect("a cluster with more than one member exists");
        counts[labels[donor]] -= 1;
        labels[donor] = empty;
        counts[empty] = 1;
        centroids[empty] = data[donor].clone();
    }
    counts
}

fn means(data: &[Vec<f64>], labels: &[usize], counts: &[usize], dim: usize) -> Vec<Vec<f64>> {
    let mut sums = vec![vec![0.0; dim]; counts.len()];
    for (point, &label) in data.iter().zip(labels) {
        for (s, v) in sums[label].iter_mut().zip(point) {
            *s += v;
        }
    }
    for (sum, &count) in sums.iter_mut().zip(counts) {
        debug_assert!(count > 0, "clusters must be non-empty after repair");
        for s in sum.iter_mut() {
            *s /= count as f64;
        }
    }
    sums
}

fn total_inertia(data: &[Vec<f64>], labels: &[usize], centroids: &[Vec<f64>]) -> f64 {
    data.iter()
        .zip(labels)
        .map(|(point, &label)| sq_dist(point, &centroids[label]))
        .sum()
}

/// Mean silhouette coefficient of a labeled partition.
///
/// Runs in O(n^2) distance evaluations and O(n * k) memory. Singleton
/// clusters contribute 0, as does a point with zero distance to both its
/// own and the nearest other cluster.
pub fn silhouette_score(data: &[Vec<f64>], labels: &[usize]) -> Result<f64, ClusterError> {
    let (n, _) = validate(data)?;
    if labels.len() != n {
        return Err(ClusterError::DimensionMismatch {
            detail: format!("{n} rows but {} labels", labels.len()),
        });
    }
    if n < 2 {
        return Err(ClusterError::TooFewRows { n, min: 2 });
    }
    let k = labels.iter().max().expect("non-empty") + 1;
    let mut sizes = vec![0usize; k];
    for &l in labels {
        sizes[l] += 1;
    }
    if sizes.iter().filter(|&&s| s > 0).count() < 2 {
        return Err(ClusterError::SingleCluster);
    }
    let mut sums = vec![vec![0.0; k]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = euclidean(&data[i], &data[j]);
            sums[i][labels[j]] += d;
            sums[j][labels[i]] += d;
        }
    }
    let mut total = 0.0;
    for i in 0..n {
        let own = labels[i];
        if sizes[own] == 1 {
            continue;
        }
        let a = sums[i][own] / (sizes[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own && sizes[c] > 0)
            .map(|c| sums[i][c] / sizes[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        if denom > 0.0 {
            total += (b - a) / denom;
        }
    }
    Ok(total / n as f64)
}

/// Fits every K in `[kmin, kmax]` (kmax clamped to rows - 1) and keeps the
/// K with the highest silhouette, preferring the smaller K on exact ties.
/// Each K gets an independent sub-seed so results do not depend on sweep
/// order.
pub fn sweep_k(
    data: &[Vec<f64>],
    kmin: usize,
    kmax: usize,
    seed: u64,
) -> Result<KSweepResult, ClusterError> {
    let (n, _) = validate(data)?;
    if n < 3 {
        return Err(ClusterError::TooFewRows { n, min: 3 });
    }
    if kmin < 2 {
        return Err(ClusterError::InvalidK { k: kmin, n });
    }
    if kmax < kmin {
        return Err(ClusterError::InvalidK { k: kmax, n });
    }
    let top = kmax.min(n - 1);
    let clamped = top < kmax;
    if top < kmin {
        return Err(ClusterError::InvalidK { k: kmin, n });
    }
    let mut evaluations = Vec::with_capacity(top - kmin + 1);
    let mut best: Option<(usize, f64, KMeansModel)> = None;
    for k in kmin..=top {
        let model = kmeans_fit(data, k, seed ^ (k as u64))?;
        let silhouette = silhouette_score(data, &model.labels)?;
        evaluations.push(KEvaluation {
            k,
            silhouette,
            inertia: model.inertia,
        });
        if best.as_ref().map_or(true, |(_, s, _)| silhouette > *s) {
            best = Some((k, silhouette, model));
        }
    }
    let (best_k, best_silhouette, best_model) = best.expect("range is non-empty");
    Ok(KSweepResult {
        kmin,
        kmax: top,
        clamped,
        evaluations,
        best_k,
        best_silhouette,
        quality: silhouette_quality(best_silhouette).to_string(),
        best_model,
    })
}
