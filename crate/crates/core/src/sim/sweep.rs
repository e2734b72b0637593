//! Symbol-error-rate sweeps over an SNR grid.
//!
//! Trials are grouped by drop: each drop fixes user positions, visibility
//! regions and covariances for `trials_per_drop` consecutive trials. Every
//! trial's realization is evaluated at all SNR points that are still
//! active, so the curves share common random numbers. A point retires once
//! every detector has collected `target_errors` symbol errors or its trial
//! budget is spent. Retirement is only checked between drops, which keeps
//! the result independent of the number of workers.

use rayon::prelude::*;

use super::seeds::{drop_seed, stream, trial_seed, TAG_GEOMETRY};
use super::stats::wilson_half_width;
use super::trial::{evaluate, Detector, PerDetector, Realization, TrialRecord};
use crate::channel::ChannelModel;
use crate::config::SystemConfig;
use crate::detect::Constellation;
use crate::error::{Error, Result};

/// Running totals for one SNR point. Merging is order independent.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointAccumulator {
    pub trials: u64,
    pub symbols: u64,
    pub errors: PerDetector<u64>,
    pub ops: PerDetector<u64>,
    pub zf_failures: u64,
}

impl PointAccumulator {
    pub fn add(&mut self, r: &TrialRecord) {
        self.trials += 1;
        self.symbols += r.symbols_tested;
        for d in 0..3 {
            self.errors[d] += r.errors[d];
            self.ops[d] += r.ops[d];
        }
        self.zf_failures += r.zf_failed as u64;
    }

    pub fn merge(&mut self, other: &PointAccumulator) {
        self.trials += other.trials;
        self.symbols += other.symbols;
        for d in 0..3 {
            self.errors[d] += other.errors[d];
            self.ops[d] += other.ops[d];
        }
        self.zf_failures += other.zf_failures;
    }

    pub fn min_errors(&self) -> u64 {
        self.errors.iter().copied().min().unwrap_or(0)
    }

    pub fn finish(&self, snr_db: f64) -> PointResult {
        let ser = self.errors.map(|e| if self.symbols == 0 { 0.0 } else { e as f64 / self.symbols as f64 });
        let ci = self.errors.map(|e| wilson_half_width(e, self.symbols));
        let ops = self.ops.map(|o| o.checked_div(self.trials).unwrap_or(0));
        PointResult {
            snr_db,
            trials: self.trials,
            symbols: self.symbols,
            errors: self.errors,
            ser,
            ci_half_width: ci,
            ops_per_trial: ops,
            zf_failures: self.zf_failures,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub snr_db: f64,
    pub trials: u64,
    pub symbols: u64,
    pub errors: PerDetector<u64>,
    pub ser: PerDetector<f64>,
    /// 95% Wilson half-widths.
    pub ci_half_width: PerDetector<f64>,
    /// Mean multiplications per trial.
    pub ops_per_trial: PerDetector<u64>,
    pub zf_failures: u64,
}

impl PointResult {
    pub fn ser_of(&self, d: Detector) -> f64 {
        self.ser[d.index()]
    }

    pub fn ci_of(&self, d: Detector) -> f64 {
        self.ci_half_width[d.index()]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub snr_grid: Vec<f64>,
    pub points: Vec<PointResult>,
    pub config: SystemConfig,
    pub total_ops: PerDetector<u64>,
}

/// Sweep controls that are not part of the model.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub trials_per_point: usize,
    pub target_errors: u64,
    pub trials_per_drop: usize,
    /// Worker threads; 0 lets the pool choose.
    pub workers: usize,
}

impl SweepOptions {
    pub fn from_config(config: &SystemConfig) -> Self {
        Self {
            trials_per_point: config.trials_per_point,
            target_errors: config.target_errors,
            trials_per_drop: config.trials_per_drop,
            workers: 1,
        }
    }
}

/// Runs the sweep with the given options.
pub fn ser_sweep(config: &SystemConfig, snr_grid: &[f64], options: &SweepOptions) -> Result<SweepResult> {
    config.validate()?;
    if options.trials_per_point < 1 || options.trials_per_drop < 1 {
        return Err(Error::config("trials_per_point", "trial counts must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers)
        .build()
        .map_err(|e| Error::config("workers", e.to_string()))?;
    pool.install(|| sweep_in_pool(config, snr_grid, options))
}

fn sweep_in_pool(config: &SystemConfig, snr_grid: &[f64], options: &SweepOptions) -> Result<SweepResult> {
    let constellation = Constellation::new(config.constellation_order, config.symbol_power)?;
    let per_drop = options.trials_per_drop as u64;
    let budget = options.trials_per_point as u64;
    let mut acc = vec![PointAccumulator::default(); snr_grid.len()];
    let mut active = vec![true; snr_grid.len()];
    let mut next_trial = 0u64;
    let mut drop_index = 0u64;
    while next_trial < budget && active.iter().any(|&a| a) {
        let dseed = drop_seed(config.rng_seed, drop_index);
        let model = ChannelModel::sample(config, &mut stream(dseed, TAG_GEOMETRY))?;
        let end = (next_trial + per_drop).min(budget);
        let live: Vec<usize> = (0..snr_grid.len()).filter(|&p| active[p]).collect();
        let records: Vec<Vec<TrialRecord>> = (next_trial..end)
            .into_par_iter()
            .map(|t| {
                let real = Realization::draw(&model, &constellation, trial_seed(config.rng_seed, t))?;
                live.iter()
                    .map(|&p| evaluate(config, &constellation, &real, snr_grid[p]))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        for per_trial in &records {
            for (&p, r) in live.iter().zip(per_trial) {
                acc[p].add(r);
            }
        }
        for &p in &live {
            if acc[p].min_errors() >= options.target_errors {
                active[p] = false;
            }
        }
        next_trial = end;
        drop_index += 1;
    }
    Ok(finish(config, snr_grid, &acc))
}

/// Builds the result from per-point accumulators.
pub fn finish(config: &SystemConfig, snr_grid: &[f64], acc: &[PointAccumulator]) -> SweepResult {
    let points: Vec<PointResult> = snr_grid.iter().zip(acc).map(|(&s, a)| a.finish(s)).collect();
    let mut total_ops = [0u64; 3];
    for a in acc {
        for d in 0..3 {
            total_ops[d] += a.ops[d];
        }
    }
    SweepResult {
        snr_grid: snr_grid.to_vec(),
        points,
        config: config.clone(),
        total_ops,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::trial::run_trial;

    fn tiny() -> SystemConfig {
        SystemConfig {
            num_antennas: 16,
            num_users: 4,
            rng_seed: 3,
            ..SystemConfig::default()
        }
    }

    #[test]
    fn single_trial_wraps_its_record() {
        let config = tiny();
        let opts = SweepOptions {
            trials_per_point: 1,
            target_errors: 200,
            trials_per_drop: 1,
            workers: 1,
        };
        let r = ser_sweep(&config, &[6.0], &opts).unwrap();
        let p = &r.points[0];
        assert_eq!(p.trials, 1);
        assert_eq!(p.symbols, 4);
        for d in Detector::ALL {
            assert_eq!(p.ser_of(d), p.errors[d.index()] as f64 / 4.0);
        }
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let config = tiny();
        let mut opts = SweepOptions {
            trials_per_point: 40,
            target_errors: 30,
            trials_per_drop: 8,
            workers: 1,
        };
        let a = ser_sweep(&config, &[0.0, 10.0], &opts).unwrap();
        opts.workers = 4;
        let b = ser_sweep(&config, &[0.0, 10.0], &opts).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn merge_is_order_independent() {
        let config = tiny();
        let records: Vec<TrialRecord> = (0..6).map(|s| run_trial(&config, 5.0, s).unwrap()).collect();
        let mut whole = PointAccumulator::default();
        records.iter().for_each(|r| whole.add(r));
        let mut left = PointAccumulator::default();
        let mut right = PointAccumulator::default();
        records[..2].iter().for_each(|r| left.add(r));
        records[2..].iter().rev().for_each(|r| right.add(r));
        let mut merged = right.clone();
        merged.merge(&left);
        assert_eq!(merged, whole);
        left.merge(&right);
        assert_eq!(left, whole);
    }
}
