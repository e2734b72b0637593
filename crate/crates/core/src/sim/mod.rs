//! Seeded Monte Carlo harness and complexity accounting.

pub mod complexity;
pub mod diagnostics;
pub mod oracle;
pub mod seeds;
pub mod stats;
pub mod sweep;
pub mod trial;

pub use complexity::{complexity_closed_form, load_table, verify_counters, ComplexityCount, CounterReport};
pub use sweep::{ser_sweep, PointResult, SweepOptions, SweepResult};
pub use trial::{evaluate, run_trial, Detector, Realization, TrialRecord};
