use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Options shared by every subcommand. Unset flags fall back to the config
/// file, then to the built-in defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML file with default values for the options below
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub stream: Option<u64>,
    /// Monte Carlo sample count
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Grid steps per path
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Number of chaos weights kept from an infinite sequence
    #[arg(long, global = true)]
    pub truncation: Option<usize>,
    #[arg(long, global = true)]
    pub batch_size: Option<usize>,
    /// Worker threads; never changes results
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    stream: Option<u64>,
    samples: Option<usize>,
    steps: Option<usize>,
    truncation: Option<usize>,
    batch_size: Option<usize>,
    workers: Option<usize>,
    format: Option<Format>,
    output: Option<PathBuf>,
}

/// Effective settings recorded in every output.
#[derive(Debug, Clone, Serialize)]
pub struct Settings {
    pub seed: u64,
    pub stream: u64,
    pub samples: usize,
    pub steps: usize,
    pub truncation: usize,
    pub batch_size: usize,
    #[serde(skip)]
    pub workers: Option<usize>,
    #[serde(skip)]
    pub format: Option<Format>,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

fn load(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::usage(format!("invalid config {}: {e}", path.display())))
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<Settings, CliError> {
        let file = match &self.config {
            Some(p) => load(p)?,
            None => FileConfig::default(),
        };
        Ok(Settings {
            seed: self.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            stream: self.stream.or(file.stream).unwrap_or(0),
            samples: self.samples.or(file.samples).unwrap_or(smallball::DEFAULT_SAMPLES),
            steps: self.steps.or(file.steps).unwrap_or(smallball::DEFAULT_STEPS),
            truncation: self.truncation.or(file.truncation).unwrap_or(smallball::DEFAULT_TRUNCATION),
            batch_size: self.batch_size.or(file.batch_size).unwrap_or(1000),
            workers: self.workers.or(file.workers),
            format: self.format.or(file.format),
            output: self.output.clone().or(file.output),
        })
    }
}

impl Settings {
    pub fn mc(&self) -> smallball::mc::McConfig {
        smallball::mc::McConfig {
            samples: self.samples,
            steps: self.steps,
            seed: self.seed,
            stream_id: self.stream,
            batch_size: self.batch_size,
            ..Default::default()
        }
    }
}
