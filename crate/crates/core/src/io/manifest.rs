//! Run manifest written next to every output table.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::config::SystemConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub tool_version: String,
    /// Seconds since the Unix epoch.
    pub started_at: u64,
    pub command: String,
    pub seed: u64,
    pub workers: usize,
    pub snr_grid_db: Vec<f64>,
    pub outputs: Vec<PathBuf>,
    pub config: SystemConfig,
}

impl RunManifest {
    pub fn new(command: &str, config: &SystemConfig, workers: usize, outputs: Vec<PathBuf>) -> Self {
        let started_at = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            started_at,
            command: command.to_string(),
            seed: config.rng_seed,
            workers,
            snr_grid_db: config.snr_grid(),
            outputs,
            config: config.clone(),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let m: RunManifest = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        m.config.validate()?;
        Ok(m)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_toml()?)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trip_keeps_config() {
        let mut c = SystemConfig::desk();
        c.rng_seed = 7;
        let m = RunManifest::new("sweep", &c, 8, vec![PathBuf::from("out/sweep.csv")]);
        let back = RunManifest::from_toml(&m.to_toml().unwrap()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.config, c);
    }
}
