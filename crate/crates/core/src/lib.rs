//! Core library for clustering HPC jobs by the time-series behavior of their
//! node-level KPIs.
//!
//! The pipeline has four phases:
//!
//! 1. [`ingest`] raw telemetry and index it into per-(job, node, kpi) series,
//! 2. [`features`] extracts a fixed catalog of time-series features into a
//!    job-by-column matrix,
//! 3. [`select`] scales the matrix to [0, 1] and keeps informative columns,
//! 4. [`cluster`] groups jobs with K-means and picks K by silhouette score,
//!    then [`rankviz`] ranks the features that separate the clusters and
//!    projects the top ones for plotting.
//!
//! [`synth`] generates labeled synthetic workloads for end-to-end validation.

pub mod cluster;
pub mod features;
pub mod ingest;
mod linalg;
pub mod rankviz;
pub mod select;
pub mod synth;

pub use cluster::{KMeansModel, KSweepResult};
pub use features::{ColumnId, Extraction, Feature, FeatureMatrix, FeatureSpec, Param};
pub use ingest::{Dataset, KpiSample, Series, SeriesKey};
pub use rankviz::{PlotFrame, RankedFeature};
pub use select::{SelectionMode, SelectionReport};
pub use synth::WorkloadConfig;
