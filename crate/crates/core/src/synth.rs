//! Synthetic labeled workloads for end-to-end validation.
//!
//! Jobs are assigned round-robin to regimes; each regime fixes, per KPI, a
//! base level, Gaussian noise scale, linear trend, and burst probability.
//! Every (job, node, kpi) series gets its own counter-derived seed, so
//! generation is deterministic and independent of iteration order.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{assemble, ident_ok, Dataset, IngestError, KpiSample};

/// KPI names that appear in real node telemetry; the default fixture uses
/// a subset of these.
pub const KNOWN_KPIS: [&str; 11] = [
    "idle",
    "system",
    "wait",
    "rx",
    "tx",
    "cpu1",
    "cpu2",
    "pw",
    "system_temp",
    "shortterm",
    "memory",
];

const EPOCH: u64 = 1_549_000_000;
const SAMPLE_PERIOD: u64 = 60;
const BURST_SCALE: f64 = 5.0;

/// How one KPI behaves under one regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KpiRegime {
    pub level: f64,
    pub noise: f64,
    pub trend: f64,
    pub burst_probability: f64,
}

/// A synthetic workload description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkloadConfig {
    pub jobs: usize,
    pub nodes: usize,
    pub kpis: Vec<String>,
    /// `regimes[r][k]` controls `kpis[k]` for jobs in regime `r`.
    pub regimes: Vec<Vec<KpiRegime>>,
    pub series_len_min: usize,
    pub series_len_max: usize,
}

/// Generated samples plus the regime each job was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticWorkload {
    pub samples: Vec<KpiSample>,
    /// `(job id, regime index)` in job order.
    pub ground_truth: Vec<(String, usize)>,
}

#[derive(Debug, Error, PartialEq)]
pub enum SynthError {
    #[error("workload needs at least one job, node, and kpi")]
    EmptyDimension,
    #[error("workload needs at least one regime")]
    NoRegimes,
    #[error("regime {index} has {got} kpi entries but the workload lists {want} kpis")]
    RegimeArity {
        index: usize,
        got: usize,
        want: usize,
    },
    #[error("series length range {min}..={max} is invalid")]
    BadSeriesLength { min: usize, max: usize },
    #[error("kpi {kpi} regime {index}: noise must be >= 0 and burst probability within [0, 1]")]
    BadRegimeParams { kpi: String, index: usize },
    #[error("kpi name {name:?} contains characters outside [A-Za-z0-9_.-]")]
    BadKpiName { name: String },
}

/// The stock two-regime fixture: 200 jobs on 5 nodes reporting idle,
/// system, and memory, with regime levels 20 apart, unit noise, no trend,
/// and no bursts.
pub fn default_fixture() -> WorkloadConfig {
    let steady = |level: f64| KpiRegime {
        level,
        noise: 1.0,
        trend: 0.0,
        burst_probability: 0.0,
    };
    WorkloadConfig {
        jobs: 200,
        nodes: 5,
        kpis: vec!["idle".into(), "system".into(), "memory".into()],
        regimes: vec![
            vec![steady(40.0), steady(20.0), steady(50.0)],
            vec![steady(60.0), steady(40.0), steady(70.0)],
        ],
        series_len_min: 80,
        series_len_max: 120,
    }
}

fn validate(config: &WorkloadConfig) -> Result<(), SynthError> {
    if config.jobs == 0 || config.nodes == 0 || config.kpis.is_empty() {
        return Err(SynthError::EmptyDimension);
    }
    if config.regimes.is_empty() {
        return Err(SynthError::NoRegimes);
    }
    for kpi in &config.kpis {
        if !ident_ok(kpi) {
            return Err(SynthError::BadKpiName { name: kpi.clone() });
        }
    }
    for (index, regime) in config.regimes.iter().enumerate() {
        if regime.len() != config.kpis.len() {
            return Err(SynthError::RegimeArity {
                index,
                got: regime.len(),
                want: config.kpis.len(),
            });
        }
        for (kpi, params) in config.kpis.iter().zip(regime) {
            let p_ok = (0.0..=1.0).contains(&params.burst_probability);
            if params.noise < 0.0 || !p_ok {
                return Err(SynthError::BadRegimeParams {
                    kpi: kpi.clone(),
                    index,
                });
            }
        }
    }
    if config.series_len_min == 0 || config.series_len_min > config.series_len_max {
        return Err(SynthError::BadSeriesLength {
            min: config.series_len_min,
            max: config.series_len_max,
        });
    }
    Ok(())
}

/// Derives one independent stream seed per (job, node, kpi) by absorbing
/// the three indices into the master seed, splitmix64-style.
fn series_seed(seed: u64, job: u64, node: u64, kpi: u64) -> u64 {
    let mut z = seed;
    for v in [job, node, kpi] {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(v);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^= z >> 31;
    }
    z
}

/// Generates the workload. Jobs are named `j00000…`, nodes `n000…`, and
/// samples are spaced 60 seconds apart from a fixed epoch. Job `j` belongs
/// to regime `j % regimes.len()`, so regime sizes differ by at most one.
pub fn generate(config: &WorkloadConfig, seed: u64) -> Result<SyntheticWorkload, SynthError> {
    validate(config)?;
    let mut samples = Vec::new();
    let mut ground_truth = Vec::with_capacity(config.jobs);
    for j in 0..config.jobs {
        let regime_index = j % config.regimes.len();
        let regime = &config.regimes[regime_index];
        let job = format!("j{j:05}");
        ground_truth.push((job.clone(), regime_index));
        for m in 0..config.nodes {
            let node = format!("n{m:03}");
            for (k, kpi) in config.kpis.iter().enumerate() {
                let params = &regime[k];
                let mut rng = ChaCha8Rng::seed_from_u64(series_seed(
                    seed, j as u64, m as u64, k as u64,
                ));
                let len = rng.gen_range(config.series_len_min..=config.series_len_max);
                for i in 0..len {
                    let gaussian: f64 = rng.sample(StandardNormal);
                    let uniform: f64 = rng.gen();
                    let mut value =
                        params.level + params.trend * i as f64 + params.noise * gaussian;
                    if uniform < params.burst_probability {
                        value += BURST_SCALE * params.noise.max(1.0);
                    }
                    samples.push(KpiSample {
                        kpi: kpi.clone(),
                        job: job.clone(),
                        node: node.clone(),
                        timestamp: EPOCH + SAMPLE_PERIOD * i as u64,
                        value,
                    });
                }
            }
        }
    }
    Ok(SyntheticWorkload {
        samples,
        ground_truth,
    })
}

impl SyntheticWorkload {
    /// Indexes the samples into a dataset.
    pub fn to_dataset(&self) -> Result<Dataset, IngestError> {
        assemble(self.samples.clone())
    }

    /// Writes `job,regime` rows in job order.
    pub fn write_ground_truth<W: std::io::Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "job,regime")?;
        for (job, regime) in &self.ground_truth {
            writeln!(w, "{job},{regime}")?;
        }
        Ok(())
    }
}
