//! Subcommand implementations. Every stage reads its inputs from and
//! writes its artifacts into the run directory, so `pipeline` is exactly
//! the five stages composed, file handoff and all.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use jobclust_core::cluster::{sweep_k, KMeansModel, KSweepResult};
use jobclust_core::features::{extract_matrix, ColumnId, FeatureMatrix, FeatureSpec};
use jobclust_core::ingest::{self, Dataset, FileFormat, KpiSample};
use jobclust_core::rankviz::{build_plot_frame, emit_plots, rank_features, RankedFeature};
use jobclust_core::select::{
    literature_preset_select, min_max_scale, variance_threshold_select, SelectionMode,
};
use jobclust_core::synth;

use crate::config::{KpiMode, PipelineConfig};
use crate::report;

/// Everything the `cluster` stage learned, read back by `rank` and `plot`.
/// `chosen` names the sweep downstream stages use: `"all"` in all_kpi mode,
/// the best-scoring KPI in per_kpi mode.
#[derive(Debug, Serialize, Deserialize)]
pub struct ClusteringFile {
    pub mode: String,
    pub chosen: String,
    pub sweeps: BTreeMap<String, KSweepResult>,
    pub columns: BTreeMap<String, Vec<ColumnId>>,
}

impl ClusteringFile {
    pub fn chosen_model(&self) -> Result<(&KMeansModel, &[ColumnId])> {
        let sweep = self
            .sweeps
            .get(&self.chosen)
            .with_context(|| format!("clustering file has no sweep named {:?}", self.chosen))?;
        let columns = self
            .columns
            .get(&self.chosen)
            .with_context(|| format!("clustering file has no columns for {:?}", self.chosen))?;
        Ok((&sweep.best_model, columns))
    }
}

pub(crate) fn write_json_pretty<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut out = BufWriter::new(
        File::create(path).with_context(|| format!("creating {}", path.display()))?,
    );
    serde_json::to_writer_pretty(&mut out, value)
        .with_context(|| format!("writing {}", path.display()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    serde_json::from_reader(BufReader::new(file))
        .with_context(|| format!("parsing {}", path.display()))
}

fn require(path: &Path, produced_by: &str) -> Result<()> {
    if !path.exists() {
        bail!(
            "missing {}; run `jobclust {produced_by}` into this directory first",
            path.display()
        );
    }
    Ok(())
}

/// Generates the synthetic fixture: `telemetry.csv` plus the
/// `ground_truth.csv` regime assignment used to validate clustering.
pub fn cmd_synth(config: &PipelineConfig, out: &Path) -> Result<()> {
    let mut workload = synth::default_fixture();
    workload.jobs = config.synth_jobs;
    workload.nodes = config.synth_nodes;
    workload.series_len_min = config.synth_series_min;
    workload.series_len_max = config.synth_series_max;
    let generated = synth::generate(&workload, config.seed)?;

    let telemetry = out.join("telemetry.csv");
    let mut w = BufWriter::new(
        File::create(&telemetry).with_context(|| format!("creating {}", telemetry.display()))?,
    );
    ingest::write_csv(&mut w, &generated.samples)?;
    w.flush()?;

    let truth = out.join("ground_truth.csv");
    let mut w = BufWriter::new(
        File::create(&truth).with_context(|| format!("creating {}", truth.display()))?,
    );
    generated.write_ground_truth(&mut w)?;
    w.flush()?;
    Ok(())
}

/// Parses raw telemetry and extracts the full feature matrix:
/// `features.csv`, `layout.json`, `imputation_log.jsonl`.
pub fn cmd_extract(input: &Path, out: &Path) -> Result<()> {
    let dataset = load_telemetry(input)?;
    let extraction = extract_matrix(&dataset, &FeatureSpec::full());
    extraction.matrix.write_csv(&out.join("features.csv"))?;
    extraction.matrix.write_layout(&out.join("layout.json"))?;
    extraction.write_imputation_log(&out.join("imputation_log.jsonl"))?;
    Ok(())
}

fn load_telemetry(input: &Path) -> Result<Dataset> {
    if !input.exists() {
        bail!("input {} does not exist", input.display());
    }
    let mut samples: Vec<KpiSample> = Vec::new();
    if input.is_dir() {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(input)
            .with_context(|| format!("reading directory {}", input.display()))?
            .collect::<std::io::Result<Vec<_>>>()?
            .into_iter()
            .map(|entry| entry.path())
            .filter(|p| FileFormat::from_path(p).is_some())
            .collect();
        paths.sort();
        if paths.is_empty() {
            bail!("no .csv or .jsonl files in {}", input.display());
        }
        for path in paths {
            let format = FileFormat::from_path(&path).expect("paths were filtered by format");
            let parsed = ingest::parse_kpi_file(&path, format)
                .with_context(|| format!("parsing {}", path.display()))?;
            samples.extend(parsed);
        }
    } else {
        let format = FileFormat::from_path(input).with_context(|| {
            format!(
                "{} has an unsupported extension; expected .csv or .jsonl",
                input.display()
            )
        })?;
        samples = ingest::parse_kpi_file(input, format)
            .with_context(|| format!("parsing {}", input.display()))?;
    }
    Ok(ingest::assemble(samples)?)
}

/// Scales the matrix to [0, 1] and selects columns: `scaled.csv` (sharing
/// `layout.json`), `selection_report.json`, `selected.csv`,
/// `selected_layout.json`.
pub fn cmd_select(config: &PipelineConfig, out: &Path) -> Result<()> {
    let features_path = out.join("features.csv");
    let layout_path = out.join("layout.json");
    require(&features_path, "extract")?;
    require(&layout_path, "extract")?;

    let matrix = FeatureMatrix::load(&features_path, &layout_path)?;
    let scaled = min_max_scale(&matrix)?;
    scaled.write_csv(&out.join("scaled.csv"))?;

    let report = match config.selection_mode {
        SelectionMode::VarianceThreshold => variance_threshold_select(&scaled, config.p)?,
        SelectionMode::LiteraturePreset => literature_preset_select(&scaled)?,
    };
    write_json_pretty(&out.join("selection_report.json"), &report)?;
    if report.selected.is_empty() {
        eprintln!("warning: selection kept no columns; `cluster` will refuse to run on this");
    }

    let selected = scaled
        .select_columns(&report.selected)
        .expect("selected labels come from this matrix");
    selected.write_csv(&out.join("selected.csv"))?;
    selected.write_layout(&out.join("selected_layout.json"))?;
    Ok(())
}

/// Sweeps K over the selected matrix (whole, or per KPI) and records the
/// winning model: `sweep_<name>.json` per sweep plus `clustering.json`.
pub fn cmd_cluster(config: &PipelineConfig, out: &Path) -> Result<()> {
    let csv_path = out.join("selected.csv");
    let layout_path = out.join("selected_layout.json");
    require(&csv_path, "select")?;
    require(&layout_path, "select")?;

    let matrix = FeatureMatrix::load(&csv_path, &layout_path)?;
    if matrix.n_cols() == 0 {
        bail!("no columns were selected; rerun select with different settings");
    }

    let mut sweeps = BTreeMap::new();
    let mut columns = BTreeMap::new();
    match config.mode {
        KpiMode::AllKpi => {
            let sweep = sweep_k(matrix.values(), config.kmin, config.kmax, config.seed)?;
            warn_if_clamped("all", &sweep, config.kmax);
            write_json_pretty(&out.join("sweep_all.json"), &sweep)?;
            sweeps.insert("all".to_string(), sweep);
            columns.insert("all".to_string(), matrix.columns().to_vec());
        }
        KpiMode::PerKpi => {
            let kpis: BTreeSet<String> = matrix
                .columns()
                .iter()
                .map(|c| c.kpi.clone())
                .collect();
            for kpi in kpis {
                let indices: Vec<usize> = matrix
                    .columns()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| c.kpi == kpi)
                    .map(|(i, _)| i)
                    .collect();
                let sub: Vec<Vec<f64>> = matrix
                    .values()
                    .iter()
                    .map(|row| indices.iter().map(|&i| row[i]).collect())
                    .collect();
                let sweep = sweep_k(&sub, config.kmin, config.kmax, config.seed)
                    .with_context(|| format!("sweeping kpi {kpi}"))?;
                warn_if_clamped(&kpi, &sweep, config.kmax);
                write_json_pretty(&out.join(format!("sweep_{kpi}.json")), &sweep)?;
                columns.insert(
                    kpi.clone(),
                    indices.iter().map(|&i| matrix.columns()[i].clone()).collect(),
                );
                sweeps.insert(kpi, sweep);
            }
        }
    }

    // Best silhouette wins; ties go to the lexicographically first name.
    let mut chosen: Option<(&String, f64)> = None;
    for (name, sweep) in &sweeps {
        let better = match chosen {
            None => true,
            Some((_, best)) => sweep.best_silhouette > best,
        };
        if better {
            chosen = Some((name, sweep.best_silhouette));
        }
    }
    let chosen = chosen.expect("at least one sweep ran").0.clone();

    let file = ClusteringFile {
        mode: config.mode.to_string(),
        chosen,
        sweeps,
        columns,
    };
    write_json_pretty(&out.join("clustering.json"), &file)?;
    Ok(())
}

fn warn_if_clamped(name: &str, sweep: &KSweepResult, requested: usize) {
    if sweep.clamped {
        eprintln!(
            "warning: sweep {name}: kmax {requested} exceeds jobs - 1, clamped to {}",
            sweep.kmax
        );
    }
}

/// Ranks features of the chosen model by inter-centroid distance:
/// `ranking.json`.
pub fn cmd_rank(out: &Path) -> Result<()> {
    let clustering_path = out.join("clustering.json");
    require(&clustering_path, "cluster")?;
    let clustering: ClusteringFile = read_json(&clustering_path)?;
    let (model, columns) = clustering.chosen_model()?;
    let ranking = rank_features(model, columns)?;
    write_json_pretty(&out.join("ranking.json"), &ranking)?;
    Ok(())
}

/// Reduces the top-ranked features to one axis each and draws scatter
/// plots: `plot_frame.csv`, `plot2d.svg`, `plot3d.svg`.
pub fn cmd_plot(config: &PipelineConfig, out: &Path) -> Result<()> {
    let scaled_path = out.join("scaled.csv");
    let layout_path = out.join("layout.json");
    let clustering_path = out.join("clustering.json");
    let ranking_path = out.join("ranking.json");
    require(&layout_path, "extract")?;
    require(&scaled_path, "select")?;
    require(&clustering_path, "cluster")?;
    require(&ranking_path, "rank")?;

    let scaled = FeatureMatrix::load(&scaled_path, &layout_path)?;
    let clustering: ClusteringFile = read_json(&clustering_path)?;
    let (model, _) = clustering.chosen_model()?;
    let ranking: Vec<RankedFeature> = read_json(&ranking_path)?;

    let frame = build_plot_frame(&scaled, &ranking, &model.labels, config.top_n)?;
    if frame.axes.is_empty() {
        bail!("ranking is empty; nothing to plot");
    }
    for label in &frame.degenerate {
        eprintln!("warning: plot axis {label} has no variance; its scores collapse to zero");
    }
    if frame.axes.len() < 2 {
        eprintln!(
            "warning: only {} plot axis available; scatter plots need at least two",
            frame.axes.len()
        );
    }
    frame.write_csv(&out.join("plot_frame.csv"))?;
    emit_plots(&frame, out)?;
    Ok(())
}

/// Runs extract through plot on `input`, then writes `report.json`.
pub fn cmd_pipeline(config: &PipelineConfig, input: &Path, out: &Path) -> Result<()> {
    cmd_extract(input, out)?;
    cmd_select(config, out)?;
    cmd_cluster(config, out)?;
    cmd_rank(out)?;
    cmd_plot(config, out)?;
    report::write_report(config, out)?;
    Ok(())
}
