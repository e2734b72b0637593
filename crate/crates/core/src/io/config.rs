//! TOML configuration documents.
//!
//! Keys mirror the fields of [`SystemConfig`]; anything omitted takes its
//! default and unknown keys are rejected.

use crate::config::SystemConfig;
use crate::error::{Error, Result};

pub fn parse_config(text: &str) -> Result<SystemConfig> {
    let config: SystemConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

/// Like [`parse_config`], but keys missing from `text` keep their values
/// from `base` instead of the defaults.
pub fn parse_config_over(base: &SystemConfig, text: &str) -> Result<SystemConfig> {
    let overlay: toml::Table = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut merged = toml::Table::try_from(base).map_err(|e| Error::Parse(e.to_string()))?;
    merged.extend(overlay);
    let config: SystemConfig = merged.try_into().map_err(|e: toml::de::Error| Error::Parse(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

pub fn serialize_config(config: &SystemConfig) -> Result<String> {
    toml::to_string(config).map_err(|e| Error::Parse(e.to_string()))
}
