//! Ranking of cluster-separating features and projection of the top ones
//! into plottable axes.
//!
//! Ranking groups matrix columns by (kpi, feature, parameter) so a feature
//! measured on many nodes counts once: each cluster's centroid components
//! for the group are averaged, and the group's score is the
//! root-sum-of-squares of the differences between those per-cluster means
//! over all cluster pairs. For two clusters this is simply the absolute
//! difference.

mod svg;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cluster::KMeansModel;
use crate::features::{ColumnId, Feature, FeatureMatrix, Param};
use crate::linalg::symmetric_eigen;

/// One (kpi, feature, parameter) group scored by how far apart the cluster
/// centroids sit along its columns.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedFeature {
    /// 1-based position after sorting by descending distance.
    pub rank: usize,
    /// `{kpi}_{feature}` with `__{param}` appended when parameterized.
    pub label: String,
    pub kpi: String,
    pub feature: Feature,
    #[serde(
        serialize_with = "serialize_param",
        skip_serializing_if = "Option::is_none"
    )]
    pub param: Option<Param>,
    /// Root-sum-of-squares of per-cluster mean differences over all
    /// cluster pairs.
    pub distance: f64,
    /// Node-averaged centroid component per cluster.
    pub per_cluster_means: Vec<f64>,
}

fn serialize_param<S: serde::Serializer>(
    param: &Option<Param>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    match param {
        Some(p) => serializer.serialize_str(&p.render()),
        None => serializer.serialize_none(),
    }
}

impl<'de> Deserialize<'de> for RankedFeature {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            rank: usize,
            label: String,
            kpi: String,
            feature: Feature,
            #[serde(default)]
            param: Option<String>,
            distance: f64,
            per_cluster_means: Vec<f64>,
        }
        let wire = Wire::deserialize(deserializer)?;
        let param = match &wire.param {
            None => None,
            Some(s) => Some(wire.feature.parse_param(s).ok_or_else(|| {
                serde::de::Error::custom(format!(
                    "feature {} has no parameter {s:?}",
                    wire.feature.name()
                ))
            })?),
        };
        Ok(RankedFeature {
            rank: wire.rank,
            label: wire.label,
            kpi: wire.kpi,
            feature: wire.feature,
            param,
            distance: wire.distance,
            per_cluster_means: wire.per_cluster_means,
        })
    }
}

/// Axes for the scatter plots: one PCA score per job for each of the top
/// ranked features, plus the cluster assignment per job.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotFrame {
    pub jobs: Vec<String>,
    /// Ranked-feature labels, one per axis, in rank order.
    pub feature_labels: Vec<String>,
    /// `axes[f][j]` is the score of job `j` on feature `f`.
    pub axes: Vec<Vec<f64>>,
    /// Cluster id per job.
    pub clusters: Vec<usize>,
    /// Labels of axes whose projection was degenerate (zero variance);
    /// their scores are all zero.
    pub degenerate: Vec<String>,
}

#[derive(Debug, Error)]
pub enum RankVizError {
    #[error("layout has {layout_len} columns but centroids have {centroid_dim}")]
    LayoutMismatch {
        centroid_dim: usize,
        layout_len: usize,
    },
    #[error("{n} jobs are too few for a projection; at least 2 are needed")]
    TooFewJobs { n: usize },
    #[error("ranked feature {label} has no columns in the matrix")]
    MissingFeature { label: String },
    #[error("plot frame has no axes to draw")]
    EmptyFrame,
    #[error("dimension mismatch: {detail}")]
    DimensionMismatch { detail: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Scores every (kpi, feature, parameter) group of the layout by how far
/// apart the fitted centroids are along it, averaged over nodes.
pub fn rank_features(
    model: &KMeansModel,
    layout: &[ColumnId],
) -> Result<Vec<RankedFeature>, RankVizError> {
    let centroid_dim = model.centroids.first().map_or(0, Vec::len);
    if layout.len() != centroid_dim {
        return Err(RankVizError::LayoutMismatch {
            centroid_dim,
            layout_len: layout.len(),
        });
    }
    // Group column indices by (kpi, feature, param), across nodes.
    let mut groups: BTreeMap<(String, &'static str, String), Vec<usize>> = BTreeMap::new();
    for (i, col) in layout.iter().enumerate() {
        let key = (col.kpi.clone(), col.feature.name(), col.param_string());
        groups.entry(key).or_default().push(i);
    }
    let mut ranked: Vec<RankedFeature> = groups
        .into_iter()
        .map(|((kpi, _, _), indices)| {
            let first = &layout[indices[0]];
            let label = match &first.param {
                Some(p) => format!("{kpi}_{}__{}", first.feature.name(), p.render()),
                None => format!("{kpi}_{}", first.feature.name()),
            };
            let per_cluster_means: Vec<f64> = model
                .centroids
                .iter()
                .map(|c| indices.iter().map(|&i| c[i]).sum::<f64>() / indices.len() as f64)
                .collect();
            let mut sum_sq = 0.0;
            for (a, &m1) in per_cluster_means.iter().enumerate() {
                for &m2 in per_cluster_means.iter().skip(a + 1) {
                    sum_sq += (m1 - m2) * (m1 - m2);
                }
            }
            RankedFeature {
                rank: 0,
                label,
                kpi,
                feature: first.feature,
                param: first.param,
                distance: sum_sq.sqrt(),
                per_cluster_means,
            }
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.distance
            .partial_cmp(&a.distance)
            .expect("distances are finite")
            .then_with(|| a.label.cmp(&b.label))
    });
    for (i, r) in ranked.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    Ok(ranked)
}

/// First principal component of a row matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaProjection {
    /// Centered rows projected on the dominant eigenvector, one per row.
    pub scores: Vec<f64>,
    /// Variance explained (dominant eigenvalue of the covariance matrix).
    pub eigenvalue: f64,
    /// Unit loadings; the entry largest in magnitude is made positive.
    pub loadings: Vec<f64>,
    /// True when the input had no variance at all; scores are zeros.
    pub degenerate: bool,
}

/// Projects rows onto their first principal component.
///
/// Columns are mean-centered, the covariance uses the n-1 denominator, and
/// the eigenvector's sign is fixed by making its largest-magnitude loading
/// positive. A matrix with no variance yields an all-zero projection
/// flagged as degenerate rather than an error.
pub fn pca_one_component(rows: &[Vec<f64>]) -> Result<PcaProjection, RankVizError> {
    let n = rows.len();
    if n < 2 {
        return Err(RankVizError::TooFewJobs { n });
    }
    let d = rows[0].len();
    if d == 0 {
        return Err(RankVizError::DimensionMismatch {
            detail: "rows have zero columns".into(),
        });
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != d {
            return Err(RankVizError::DimensionMismatch {
                detail: format!("row 0 has {d} columns, row {i} has {}", row.len()),
            });
        }
    }
    let mean: Vec<f64> = (0..d)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let centered: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().zip(&mean).map(|(v, m)| v - m).collect())
        .collect();
    let mut cov = vec![vec![0.0; d]; d];
    for row in &centered {
        for i in 0..d {
            for j in i..d {
                cov[i][j] += row[i] * row[j];
            }
        }
    }
    for i in 0..d {
        for j in i..d {
            cov[i][j] /= (n - 1) as f64;
            cov[j][i] = cov[i][j];
        }
    }
    if cov.iter().all(|row| row.iter().all(|&v| v == 0.0)) {
        return Ok(PcaProjection {
            scores: vec![0.0; n],
            eigenvalue: 0.0,
            loadings: vec![0.0; d],
            degenerate: true,
        });
    }
    let (eigenvalues, eigenvectors) = symmetric_eigen(&cov);
    let mut loadings = eigenvectors[0].clone();
    let dominant = loadings
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).expect("finite"))
        .map(|(i, _)| i)
        .expect("d > 0");
    if loadings[dominant] < 0.0 {
        for l in &mut loadings {
            *l = -*l;
        }
    }
    let scores = centered
        .iter()
        .map(|row| row.iter().zip(&loadings).map(|(v, l)| v * l).sum())
        .collect();
    Ok(PcaProjection {
        scores,
        eigenvalue: eigenvalues[0],
        loadings,
        degenerate: false,
    })
}

/// Builds plot axes from the top `top_n` ranked features (at most the
/// number of ranked features). Each feature's (jobs x nodes) submatrix is
/// taken from the scaled matrix and reduced to one score per job with
/// [`pca_one_component`].
pub fn build_plot_frame(
    scaled: &FeatureMatrix,
    ranking: &[RankedFeature],
    clusters: &[usize],
    top_n: usize,
) -> Result<PlotFrame, RankVizError> {
    if clusters.len() != scaled.n_rows() {
        return Err(RankVizError::DimensionMismatch {
            detail: format!(
                "{} cluster labels for {} jobs",
                clusters.len(),
                scaled.n_rows()
            ),
        });
    }
    let take = top_n.min(ranking.len());
    let mut feature_labels = Vec::with_capacity(take);
    let mut axes = Vec::with_capacity(take);
    let mut degenerate = Vec::new();
    for ranked in &ranking[..take] {
        let indices: Vec<usize> = scaled
            .columns()
            .iter()
            .enumerate()
            .filter(|(_, c)| {
                c.kpi == ranked.kpi && c.feature == ranked.feature && c.param == ranked.param
            })
            .map(|(i, _)| i)
            .collect();
        if indices.is_empty() {
            return Err(RankVizError::MissingFeature {
                label: ranked.label.clone(),
            });
        }
        let rows: Vec<Vec<f64>> = scaled
            .values()
            .iter()
            .map(|row| indices.iter().map(|&i| row[i]).collect())
            .collect();
        let projection = pca_one_component(&rows)?;
        if projection.degenerate {
            degenerate.push(ranked.label.clone());
        }
        feature_labels.push(ranked.label.clone());
        axes.push(projection.scores);
    }
    Ok(PlotFrame {
        jobs: scaled.jobs().to_vec(),
        feature_labels,
        axes,
        clusters: clusters.to_vec(),
        degenerate,
    })
}

impl PlotFrame {
    /// Writes the frame as CSV: `job,<feature…>,cluster`.
    pub fn write_csv(&self, path: &Path) -> Result<(), RankVizError> {
        use std::io::Write;
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        write!(out, "job")?;
        for label in &self.feature_labels {
            write!(out, ",{label}")?;
        }
        writeln!(out, ",cluster")?;
        for (j, job) in self.jobs.iter().enumerate() {
            write!(out, "{job}")?;
            for axis in &self.axes {
                write!(out, ",{}", axis[j])?;
            }
            writeln!(out, ",{}", self.clusters[j])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Writes `plot2d.svg` when at least two axes exist and `plot3d.svg` when
/// at least three do; returns the paths written. A frame with no axes is
/// an error.
pub fn emit_plots(frame: &PlotFrame, out_dir: &Path) -> Result<Vec<PathBuf>, RankVizError> {
    if frame.axes.is_empty() {
        return Err(RankVizError::EmptyFrame);
    }
    let mut written = Vec::new();
    if frame.axes.len() >= 2 {
        let path = out_dir.join("plot2d.svg");
        std::fs::write(&path, svg::scatter_2d(frame))?;
        written.push(path);
    }
    if frame.axes.len() >= 3 {
        let path = out_dir.join("plot3d.svg");
        std::fs::write(&path, svg::scatter_3d(frame))?;
        written.push(path);
    }
    Ok(written)
}
