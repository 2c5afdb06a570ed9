//! The run report: a single JSON summary of every artifact a pipeline run
//! produced. Built strictly from the files on disk so that rerunning
//! `pipeline` with the same seed reproduces it byte for byte (it carries
//! no timestamps).

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use jobclust_core::features::FeatureMatrix;
use jobclust_core::rankviz::RankedFeature;
use jobclust_core::select::{SelectionMode, SelectionReport};

use crate::commands::{read_json, write_json_pretty, ClusteringFile};
use crate::config::PipelineConfig;

#[derive(Debug, Serialize)]
pub struct Report<'a> {
    /// Build identity of the binary that produced the run.
    pub version: &'static str,
    pub config: &'a PipelineConfig,
    pub matrix: MatrixSummary,
    /// Count of matrix cells imputed to zero during extraction.
    pub imputations: usize,
    pub selection: SelectionSummary,
    pub clustering: ClusteringSummary,
    /// The ten features furthest apart across cluster centroids.
    pub top_features: Vec<TopFeature>,
    /// Plot files the run produced, relative to the run directory.
    pub plots: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct MatrixSummary {
    pub jobs: usize,
    pub columns: usize,
}

#[derive(Debug, Serialize)]
pub struct SelectionSummary {
    pub mode: SelectionMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    pub n_selected: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct ClusteringSummary {
    pub mode: String,
    pub chosen: String,
    pub sweeps: BTreeMap<String, SweepSummary>,
}

#[derive(Debug, Serialize)]
pub struct SweepSummary {
    pub best_k: usize,
    pub best_silhouette: f64,
    pub quality: String,
}

#[derive(Debug, Serialize)]
pub struct TopFeature {
    pub rank: usize,
    pub label: String,
    pub distance: f64,
}

/// Summarizes the artifacts in `out` into `out/report.json`.
pub fn write_report(config: &PipelineConfig, out: &Path) -> Result<()> {
    let (columns, _) = FeatureMatrix::read_layout(&out.join("layout.json"))?;
    let jobs = count_lines(&out.join("features.csv"))?.saturating_sub(1);
    let imputations = count_lines(&out.join("imputation_log.jsonl"))?;

    let selection: SelectionReport = read_json(&out.join("selection_report.json"))?;
    let clustering: ClusteringFile = read_json(&out.join("clustering.json"))?;
    let ranking: Vec<RankedFeature> = read_json(&out.join("ranking.json"))?;

    let report = Report {
        version: env!("JOBCLUST_BUILD_VERSION"),
        config,
        matrix: MatrixSummary {
            jobs,
            columns: columns.len(),
        },
        imputations,
        selection: SelectionSummary {
            mode: selection.mode,
            p: selection.p,
            threshold: selection.threshold,
            n_selected: selection.selected.len(),
            note: selection.note,
        },
        clustering: ClusteringSummary {
            mode: clustering.mode.clone(),
            chosen: clustering.chosen.clone(),
            sweeps: clustering
                .sweeps
                .iter()
                .map(|(name, sweep)| {
                    (
                        name.clone(),
                        SweepSummary {
                            best_k: sweep.best_k,
                            best_silhouette: sweep.best_silhouette,
                            quality: sweep.quality.clone(),
                        },
                    )
                })
                .collect(),
        },
        top_features: ranking
            .iter()
            .take(10)
            .map(|r| TopFeature {
                rank: r.rank,
                label: r.label.clone(),
                distance: r.distance,
            })
            .collect(),
        plots: ["plot2d.svg", "plot3d.svg"]
            .iter()
            .filter(|name| out.join(name).exists())
            .map(|name| name.to_string())
            .collect(),
    };
    write_json_pretty(&out.join("report.json"), &report)
}

fn count_lines(path: &Path) -> Result<usize> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(file).lines().count())
}
