//! Command-line front end for the job clustering pipeline.
//!
//! The binary is a set of stage subcommands that hand artifacts to each
//! other through a run directory (`--out`), plus `pipeline`, which runs
//! the whole chain, and `synth`, which produces a labeled test fixture.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use config::{FlagOverrides, ModeTarget};

#[derive(Debug, Parser)]
#[command(
    name = "jobclust",
    version = env!("JOBCLUST_BUILD_VERSION"),
    about = "Cluster HPC jobs by the statistical shape of their telemetry"
)]
pub struct Cli {
    /// Plain-text `key = value` configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Seed for workload synthesis and clustering restarts.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// all_kpi or per_kpi; for `select`, the selection rule instead
    /// (variance_threshold or literature_preset).
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// Probability behind the variance threshold p * (1 - p).
    #[arg(long, global = true)]
    pub p: Option<f64>,
    /// Smallest cluster count to try.
    #[arg(long, global = true)]
    pub kmin: Option<usize>,
    /// Largest cluster count to try.
    #[arg(long, global = true)]
    pub kmax: Option<usize>,
    /// Run directory artifacts are written to and read from.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Raw telemetry file or directory (extract and pipeline only).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic telemetry fixture with known regimes.
    Synth,
    /// Parse telemetry and extract the feature matrix.
    Extract,
    /// Scale the matrix to [0, 1] and select feature columns.
    Select,
    /// Sweep cluster counts and keep the best-scoring model.
    Cluster,
    /// Rank features by how far apart the cluster centroids sit.
    Rank,
    /// Draw 2D/3D scatter plots of the top-ranked features.
    Plot,
    /// Run extract through plot, then write a run report.
    Pipeline,
}

pub fn run(cli: Cli) -> Result<()> {
    let mode_target = match cli.command {
        Command::Select => ModeTarget::Selection,
        _ => ModeTarget::Kpi,
    };
    let flags = FlagOverrides {
        seed: cli.seed,
        mode: cli.mode.clone(),
        p: cli.p,
        kmin: cli.kmin,
        kmax: cli.kmax,
    };
    let config = config::resolve_config(cli.config.as_deref(), &flags, mode_target)?;
    std::fs::create_dir_all(&cli.out)
        .with_context(|| format!("creating output directory {}", cli.out.display()))?;
    match cli.command {
        Command::Synth => commands::cmd_synth(&config, &cli.out),
        Command::Extract => {
            let input = cli
                .input
                .as_deref()
                .context("extract needs --input pointing at telemetry")?;
            commands::cmd_extract(input, &cli.out)
        }
        Command::Select => commands::cmd_select(&config, &cli.out),
        Command::Cluster => commands::cmd_cluster(&config, &cli.out),
        Command::Rank => commands::cmd_rank(&cli.out),
        Command::Plot => commands::cmd_plot(&config, &cli.out),
        Command::Pipeline => {
            let input = cli
                .input
                .as_deref()
                .context("pipeline needs --input pointing at telemetry")?;
            commands::cmd_pipeline(&config, input, &cli.out)
        }
    }
}
