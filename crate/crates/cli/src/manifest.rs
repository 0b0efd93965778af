use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Serialize)]
pub struct OutputDigest {
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Everything needed to rerun a command and check its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub argv: Vec<String>,
    /// Fully resolved settings after flags, config file and defaults.
    pub config: serde_json::Value,
    pub seed: u64,
    pub started_utc: String,
    pub finished_utc: String,
    pub outputs: Vec<OutputDigest>,
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

impl RunManifest {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            argv: std::env::args().collect(),
            config: serde_json::Value::Null,
            seed,
            started_utc: now(),
            finished_utc: String::new(),
            outputs: Vec::new(),
        }
    }

    /// Writes `data` to `path` and records its digest.
    pub fn write_output(&mut self, path: &Path, data: &[u8]) -> CliResult<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        std::fs::write(path, data).map_err(|e| CliError::io(path, e))?;
        self.outputs.push(OutputDigest {
            path: path.display().to_string(),
            bytes: data.len() as u64,
            sha256: sha256_hex(data),
        });
        Ok(())
    }

    pub fn finish(mut self, path: &PathBuf) -> CliResult<()> {
        self.finished_utc = now();
        let text = serde_json::to_string_pretty(&self).expect("manifest serializes");
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        std::fs::write(path, text + "\n").map_err(|e| CliError::io(path, e))
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }
}
