//! Optional TOML configuration file. Values here sit between command-line
//! flags (which win) and built-in defaults.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    #[serde(default)]
    pub simulate: SimulateSection,
    #[serde(default)]
    pub arch: ArchSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub ebno: Option<String>,
    pub decoder: Option<String>,
    pub schedule: Option<PathBuf>,
    pub min_fe: Option<u64>,
    pub max_frames: Option<u64>,
    pub chunk_frames: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchSection {
    pub cores: Option<u32>,
    pub core_mhz: Option<f64>,
    pub depth: Option<usize>,
    pub theta: Option<f64>,
    pub io_period_ns: Option<f64>,
    pub delay_model: Option<PathBuf>,
    pub calibrate_target: Option<usize>,
    pub reference_mhz: Option<f64>,
}

pub fn load(path: Option<&Path>) -> CliResult<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
