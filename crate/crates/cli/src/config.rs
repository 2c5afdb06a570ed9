//! Run configuration: defaults, overlaid by an optional `key = value` file,
//! overlaid by command-line flags.

use std::fmt;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use jobclust_core::select::SelectionMode;

/// Whether clustering runs on the whole matrix or once per KPI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KpiMode {
    AllKpi,
    PerKpi,
}

impl fmt::Display for KpiMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KpiMode::AllKpi => "all_kpi",
            KpiMode::PerKpi => "per_kpi",
        })
    }
}

/// Fully resolved settings for a run. Everything downstream reads from
/// this; it is also embedded verbatim in `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub mode: KpiMode,
    pub selection_mode: SelectionMode,
    /// Probability behind the variance threshold `p * (1 - p)`.
    pub p: f64,
    pub kmin: usize,
    pub kmax: usize,
    pub seed: u64,
    /// How many top-ranked features become plot axes.
    pub top_n: usize,
    pub synth_jobs: usize,
    pub synth_nodes: usize,
    pub synth_series_min: usize,
    pub synth_series_max: usize,
}

/// What the `--mode` flag refers to for a given subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeTarget {
    /// `select` reads `--mode` as the selection rule.
    Selection,
    /// Everything else reads `--mode` as the KPI mode.
    Kpi,
}

/// Values taken from command-line flags; `None` falls through to the
/// config file and then to defaults.
#[derive(Debug, Clone, Default)]
pub struct FlagOverrides {
    pub seed: Option<u64>,
    pub mode: Option<String>,
    pub p: Option<f64>,
    pub kmin: Option<usize>,
    pub kmax: Option<usize>,
}

#[derive(Debug, Default)]
struct RawConfig {
    mode: Option<KpiMode>,
    selection_mode: Option<SelectionMode>,
    p: Option<f64>,
    kmin: Option<usize>,
    kmax: Option<usize>,
    seed: Option<u64>,
    top_n: Option<usize>,
    synth_jobs: Option<usize>,
    synth_nodes: Option<usize>,
    synth_series_min: Option<usize>,
    synth_series_max: Option<usize>,
}

pub fn parse_kpi_mode(token: &str) -> Result<KpiMode> {
    match token {
        "all_kpi" => Ok(KpiMode::AllKpi),
        "per_kpi" => Ok(KpiMode::PerKpi),
        other => bail!("unknown mode {other:?}; expected all_kpi or per_kpi"),
    }
}

pub fn parse_selection_mode(token: &str) -> Result<SelectionMode> {
    match token {
        "variance" | "variance_threshold" => Ok(SelectionMode::VarianceThreshold),
        "literature" | "literature_preset" | "preset" => Ok(SelectionMode::LiteraturePreset),
        other => bail!(
            "unknown selection mode {other:?}; expected variance_threshold or literature_preset"
        ),
    }
}

/// Builds the effective configuration: defaults, then the file at
/// `config_path` (if any), then `flags`. `mode_target` decides which
/// setting the `--mode` flag addresses.
pub fn resolve_config(
    config_path: Option<&Path>,
    flags: &FlagOverrides,
    mode_target: ModeTarget,
) -> Result<PipelineConfig> {
    let mut raw = match config_path {
        Some(path) => parse_config_file(path)
            .with_context(|| format!("reading config {}", path.display()))?,
        None => RawConfig::default(),
    };
    if let Some(seed) = flags.seed {
        raw.seed = Some(seed);
    }
    if let Some(p) = flags.p {
        raw.p = Some(p);
    }
    if let Some(kmin) = flags.kmin {
        raw.kmin = Some(kmin);
    }
    if let Some(kmax) = flags.kmax {
        raw.kmax = Some(kmax);
    }
    if let Some(token) = &flags.mode {
        match mode_target {
            ModeTarget::Kpi => raw.mode = Some(parse_kpi_mode(token)?),
            ModeTarget::Selection => raw.selection_mode = Some(parse_selection_mode(token)?),
        }
    }
    let fixture = jobclust_core::synth::default_fixture();
    let mode = raw.mode.unwrap_or(KpiMode::AllKpi);
    let selection_mode = raw.selection_mode.unwrap_or(match mode {
        KpiMode::AllKpi => SelectionMode::VarianceThreshold,
        KpiMode::PerKpi => SelectionMode::LiteraturePreset,
    });
    Ok(PipelineConfig {
        mode,
        selection_mode,
        p: raw.p.unwrap_or(0.85),
        kmin: raw.kmin.unwrap_or(2),
        kmax: raw.kmax.unwrap_or(30),
        seed: raw.seed.unwrap_or(42),
        top_n: raw.top_n.unwrap_or(3),
        synth_jobs: raw.synth_jobs.unwrap_or(fixture.jobs),
        synth_nodes: raw.synth_nodes.unwrap_or(fixture.nodes),
        synth_series_min: raw.synth_series_min.unwrap_or(fixture.series_len_min),
        synth_series_max: raw.synth_series_max.unwrap_or(fixture.series_len_max),
    })
}

fn parse_config_file(path: &Path) -> Result<RawConfig> {
    let text = std::fs::read_to_string(path)?;
    let mut raw = RawConfig::default();
    for (index, line) in text.lines().enumerate() {
        let lineno = index + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            bail!("line {lineno}: expected `key = value`, got {trimmed:?}");
        };
        let key = key.trim();
        let value = value.trim();
        let bad_value =
            |what: &str| anyhow::anyhow!("line {lineno}: {key} expects {what}, got {value:?}");
        match key {
            "mode" => {
                raw.mode =
                    Some(parse_kpi_mode(value).with_context(|| format!("line {lineno}"))?);
            }
            "selection.mode" => {
                raw.selection_mode = Some(
                    parse_selection_mode(value).with_context(|| format!("line {lineno}"))?,
                );
            }
            "selection.p" => {
                raw.p = Some(value.parse().map_err(|_| bad_value("a number"))?);
            }
            "cluster.kmin" => {
                raw.kmin = Some(value.parse().map_err(|_| bad_value("an integer"))?);
            }
            "cluster.kmax" => {
                raw.kmax = Some(value.parse().map_err(|_| bad_value("an integer"))?);
            }
            "seed" => {
                raw.seed = Some(value.parse().map_err(|_| bad_value("an integer"))?);
            }
            "plots.top_n" => {
                raw.top_n = Some(value.parse().map_err(|_| bad_value("an integer"))?);
            }
            "synth.jobs" => {
                raw.synth_jobs = Some(value.parse().map_err(|_| bad_value("an integer"))?);
            }
            "synth.nodes" => {
                raw.synth_nodes = Some(value.parse().map_err(|_| bad_value("an integer"))?);
            }
            "synth.series_min" => {
                raw.synth_series_min =
                    Some(value.parse().map_err(|_| bad_value("an integer"))?);
            }
            "synth.series_max" => {
                raw.synth_series_max =
                    Some(value.parse().map_err(|_| bad_value("an integer"))?);
            }
            _ => bail!("line {lineno}: unknown key {key:?}"),
        }
    }
    Ok(raw)
}
