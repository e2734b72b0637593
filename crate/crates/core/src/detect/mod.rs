//! Multi-user symbol detectors.

pub mod constellation;
pub mod mfb;
pub mod ml;
pub mod posterior;
pub mod vmp;
pub mod zf;

pub use constellation::Constellation;
pub use mfb::{mfb_detect, mfb_detect_all};
pub use ml::ml_detect;
pub use posterior::{damp, SymbolPosterior};
pub use vmp::{mrc_initialize, update_precisions, update_symbol_posteriors, PrecisionState, VmpDetector};
pub use zf::zf_detect;

/// Named multiplication tallies for one detector call.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpCounter {
    terms: Vec<(&'static str, u64)>,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, term: &'static str, count: u64) {
        match self.terms.iter_mut().find(|(n, _)| *n == term) {
            Some((_, c)) => *c += count,
            None => self.terms.push((term, count)),
        }
    }

    pub fn get(&self, term: &str) -> u64 {
        self.terms
            .iter()
            .find(|(n, _)| *n == term)
            .map_or(0, |(_, c)| *c)
    }

    pub fn total(&self) -> u64 {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    pub fn terms(&self) -> &[(&'static str, u64)] {
        &self.terms
    }
}

/// Output of any detector.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionResult {
    /// Decided constellation index per user.
    pub hard_symbols: Vec<usize>,
    /// Final posteriors (VMP only).
    pub posteriors: Option<Vec<SymbolPosterior>>,
    pub iterations_run: usize,
    pub ops: OpCounter,
}

impl DetectionResult {
    pub fn op_count(&self) -> u64 {
        self.ops.total()
    }

    /// Users whose decision differs from `truth`.
    pub fn symbol_errors(&self, truth: &[usize]) -> u64 {
        self.hard_symbols
            .iter()
            .zip(truth)
            .filter(|(a, b)| a != b)
            .count() as u64
    }
}
