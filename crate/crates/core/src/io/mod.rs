//! Configuration documents, CSV tables and run manifests.

pub mod config;
pub mod csv;
pub mod manifest;

pub use self::config::{parse_config, parse_config_over, serialize_config};
pub use self::csv::{format_sig, sweep_csv, write_complexity_csv, write_sweep_csv};
pub use self::manifest::RunManifest;
