//! Command-line front end: argument parsing and subcommand dispatch.
//!
//! Exit codes: 0 success, 1 usage or validation error, 2 runtime failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use xlmimo::io::{format_sig, parse_config_over, write_complexity_csv, write_sweep_csv, RunManifest};
use xlmimo::sim::complexity::{complexity_closed_form, load_table, verify_counters};
use xlmimo::sim::diagnostics::channel_stats;
use xlmimo::sim::oracle::{mfb_check, ml_sandwich};
use xlmimo::sim::seeds::{drop_seed, stream, TAG_GEOMETRY};
use xlmimo::sim::{ser_sweep, Detector, SweepOptions};
use xlmimo::channel::ChannelModel;
use xlmimo::detect::Constellation;
use xlmimo::{Error, SystemConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "xlmimo", version, about = "XL-MIMO detection simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// SER against SNR for MFB, VMP and ZF.
    Sweep,
    /// Closed-form multiplication counts and counter verification.
    Complexity,
    /// Covariance and KL diagnostics for one drop.
    ChannelStats,
    /// Small-instance oracle checks.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    /// M = 128, K = 64.
    Desk,
    /// M = 512, K = 256.
    Paper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrRange {
    pub start: f64,
    pub step: f64,
    pub stop: f64,
}

impl FromStr for SnrRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, step, stop] = parts[..] else {
            return Err(format!("expected start:step:stop, got '{s}'"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
        Ok(Self {
            start: num(start)?,
            step: num(step)?,
            stop: num(stop)?,
        })
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML file overriding the scale preset.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// SNR grid in dB as start:step:stop.
    #[arg(long, global = true)]
    pub snr: Option<SnrRange>,
    /// Trial budget per SNR point (sweep) or per check (selftest).
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    #[arg(long, global = true, env = "XLMIMO_OUT_DIR", default_value = "out")]
    pub out: PathBuf,
    #[arg(long, global = true, value_enum, default_value_t = Scale::Desk)]
    pub scale: Scale,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub workers: usize,
}

/// Failure carrying the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Self { code: EXIT_RUNTIME, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig { .. } | Error::Parse(_) | Error::UnsupportedOrder(_) => Self::usage(e.to_string()),
            _ => Self::runtime(e.to_string()),
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            print!("{report}");
            EXIT_OK
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

/// Builds the effective config: scale preset, then the config file, then flags.
pub fn resolve_config(common: &Common) -> Result<SystemConfig, Failure> {
    let base = match common.scale {
        Scale::Desk => SystemConfig::desk(),
        Scale::Paper => SystemConfig::default(),
    };
    let mut config = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
            parse_config_over(&base, &text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?
        }
        None => base,
    };
    if let Some(seed) = common.seed {
        config.rng_seed = seed;
    }
    if let Some(r) = common.snr {
        config.snr_start_db = r.start;
        config.snr_step_db = r.step;
        config.snr_stop_db = r.stop;
    }
    if let Some(t) = common.trials {
        config.trials_per_point = t;
    }
    config.validate()?;
    Ok(config)
}

pub fn execute(cli: &Cli) -> Result<String, Failure> {
    let config = resolve_config(&cli.common)?;
    match cli.command {
        Command::Sweep => sweep(&config, &cli.common),
        Command::Complexity => complexity(&config, &cli.common),
        Command::ChannelStats => channel(&config, &cli.common),
        Command::Selftest => selftest(&config, &cli.common),
    }
}

fn out_dir(common: &Common) -> Result<&Path, Failure> {
    fs::create_dir_all(&common.out)
        .map_err(|e| Failure::runtime(format!("cannot create {}: {e}", common.out.display())))?;
    Ok(&common.out)
}

fn write_manifest(command: &str, config: &SystemConfig, common: &Common, outputs: Vec<PathBuf>, path: &Path) -> Result<(), Failure> {
    RunManifest::new(command, config, common.workers, outputs).write(path)?;
    Ok(())
}

fn sweep(config: &SystemConfig, common: &Common) -> Result<String, Failure> {
    let grid = config.snr_grid();
    let options = SweepOptions {
        workers: common.workers,
        ..SweepOptions::from_config(config)
    };
    let result = ser_sweep(config, &grid, &options)?;
    let dir = out_dir(common)?;
    let csv = dir.join("sweep.csv");
    let manifest = dir.join("sweep.manifest.toml");
    write_sweep_csv(&result, &csv)?;
    write_manifest("sweep", config, common, vec![csv.clone()], &manifest)?;

    let mut s = String::new();
    let _ = writeln!(s, "M={} K={} seed={}", config.num_antennas, config.num_users, config.rng_seed);
    let _ = writeln!(s, "{:>8} {:>8} {:>12} {:>12} {:>12}", "snr_db", "trials", "mfb", "vmp", "zf");
    for p in &result.points {
        let _ = writeln!(
            s,
            "{:>8} {:>8} {:>12} {:>12} {:>12}",
            format_sig(p.snr_db),
            p.trials,
            format_sig(p.ser_of(Detector::Mfb)),
            format_sig(p.ser_of(Detector::Vmp)),
            format_sig(p.ser_of(Detector::Zf)),
        );
    }
    let _ = writeln!(s, "wrote {} and {}", csv.display(), manifest.display());
    Ok(s)
}

const LOAD_MS: [u64; 4] = [64, 128, 256, 512];
const LOAD_RATIOS: [u64; 3] = [2, 10, 20];
const COUNTER_SIZES: [(usize, usize); 3] = [(16, 8), (64, 32), (128, 64)];

fn complexity(config: &SystemConfig, common: &Common) -> Result<String, Failure> {
    let order = config.constellation_order as u64;
    let iters = config.vmp_iterations as u64;
    let rows = load_table(&LOAD_MS, &LOAD_RATIOS, order, iters);
    let dir = out_dir(common)?;
    let csv = dir.join("complexity.csv");
    write_complexity_csv(&rows, &csv)?;
    write_manifest("complexity", config, common, vec![csv.clone()], &dir.join("complexity.manifest.toml"))?;

    let mut s = String::new();
    let (m, k) = (config.num_antennas as u64, config.num_users as u64);
    let c = complexity_closed_form(m, k, order, iters);
    let _ = writeln!(
        s,
        "closed form at M={m} K={k} |A|={order} I={iters}: C_VMP = {} C_ZF = {} (exact {}/{})",
        c.c_vmp,
        c.c_zf,
        c.c_zf_exact.numer(),
        c.c_zf_exact.denom()
    );
    let _ = writeln!(s, "{:>5} {:>5} {:>6} {:>14} {:>14} {:>10}", "M", "K", "M/K", "C_ZF", "C_VMP", "ZF/VMP");
    for r in &rows {
        let _ = writeln!(
            s,
            "{:>5} {:>5} {:>6} {:>14} {:>14} {:>10.4}",
            r.m,
            r.k,
            r.ratio,
            r.count.c_zf,
            r.count.c_vmp,
            r.count.c_zf as f64 / r.count.c_vmp as f64
        );
    }
    let constellation = Constellation::new(config.constellation_order, config.symbol_power)?;
    let mut all_ok = true;
    for (m, k) in COUNTER_SIZES {
        let report = verify_counters(m, k, config.vmp_iterations, &constellation, config.rng_seed)?;
        all_ok &= report.passed();
        let _ = writeln!(
            s,
            "counters M={m} K={k}: {} (vmp {} zf {})",
            if report.passed() { "match" } else { "MISMATCH" },
            report.count.measured_vmp.unwrap_or(0),
            report.count.measured_zf.unwrap_or(0)
        );
        for t in report.mismatches() {
            let _ = writeln!(s, "  {} {}: expected {} measured {}", t.detector, t.term, t.expected, t.measured);
        }
    }
    let _ = writeln!(s, "wrote {}", csv.display());
    if all_ok {
        Ok(s)
    } else {
        Err(Failure::runtime(format!("{s}instrumented counters disagree with closed forms")))
    }
}

fn channel(config: &SystemConfig, common: &Common) -> Result<String, Failure> {
    let model = ChannelModel::sample(config, &mut stream(drop_seed(config.rng_seed, 0), TAG_GEOMETRY))?;
    let stats = channel_stats(&model)?;
    let mut table = String::from(
        "user,vr_start,vr_len,azimuth,angular_spread,reference_distance,retained_fraction,hermitian_error,min_eig_ratio,mean_weight\n",
    );
    for u in &stats {
        let _ = writeln!(
            table,
            "{},{},{},{},{},{},{},{},{},{}",
            u.user,
            u.vr_start,
            u.vr_len,
            format_sig(u.azimuth),
            format_sig(u.angular_spread),
            format_sig(u.reference_distance),
            format_sig(u.retained_fraction),
            format_sig(u.hermitian_error),
            format_sig(u.min_eig_ratio),
            format_sig(u.mean_weight)
        );
    }
    let dir = out_dir(common)?;
    let csv = dir.join("channel_stats.csv");
    fs::write(&csv, &table).map_err(|e| Failure::runtime(format!("{}: {e}", csv.display())))?;
    write_manifest("channel-stats", config, common, vec![csv.clone()], &dir.join("channel_stats.manifest.toml"))?;

    let n = stats.len().max(1) as f64;
    let mean_vr = stats.iter().map(|u| u.vr_len as f64).sum::<f64>() / n;
    let mean_kept = stats.iter().map(|u| u.retained_fraction).sum::<f64>() / n;
    let worst_herm = stats.iter().map(|u| u.hermitian_error).fold(0.0, f64::max);
    let mut s = String::new();
    let _ = writeln!(s, "users {}  mean VR length {:.1} antennas  ζ = {}", stats.len(), mean_vr, config.kl_rank());
    let _ = writeln!(s, "mean retained energy {:.4}  worst ‖R − Rᴴ‖_F {:.3e}", mean_kept, worst_herm);
    let _ = writeln!(s, "wrote {}", csv.display());
    Ok(s)
}

fn selftest(config: &SystemConfig, common: &Common) -> Result<String, Failure> {
    let trials = common.trials.unwrap_or(2000) as u64;
    let pool = rayon_workers(common.workers)?;
    let mut s = String::new();
    let mut failed = Vec::new();

    let small = SystemConfig {
        num_antennas: 8,
        num_users: 2,
        kl_rank: Some(2),
        rng_seed: config.rng_seed,
        ..SystemConfig::default()
    };
    let sandwich = pool.install(|| ml_sandwich(&small, 10.0, trials))?;
    let ok = sandwich.holds(3.0);
    let _ = writeln!(
        s,
        "ml sandwich (M=8 K=2 10 dB, {trials} trials): SER_ML {} SER_VMP {} {}",
        format_sig(sandwich.ser_ml()),
        format_sig(sandwich.ser_vmp()),
        verdict(ok)
    );
    if !ok {
        failed.push("ml sandwich");
    }

    let mfb_config = SystemConfig {
        num_antennas: 16,
        num_users: 4,
        rng_seed: config.rng_seed,
        ..SystemConfig::default()
    };
    let mfb = pool.install(|| mfb_check(&mfb_config, 0.0, trials))?;
    // Loose bound: a few thousand symbols cannot resolve 5%.
    let ok = (mfb.empirical_ser() - mfb.analytic_ser()).abs() <= 3.0 * mfb.ci_half_width();
    let _ = writeln!(
        s,
        "mfb closed form (M=16 K=4 0 dB): empirical {} analytic {} {}",
        format_sig(mfb.empirical_ser()),
        format_sig(mfb.analytic_ser()),
        verdict(ok)
    );
    if !ok {
        failed.push("mfb closed form");
    }

    let constellation = Constellation::qpsk();
    for (m, k) in COUNTER_SIZES {
        let ok = verify_counters(m, k, 3, &constellation, config.rng_seed)?.passed();
        let _ = writeln!(s, "counters M={m} K={k}: {}", verdict(ok));
        if !ok {
            failed.push("counters");
        }
    }
    if failed.is_empty() {
        Ok(s)
    } else {
        Err(Failure::runtime(format!("{s}selftest failed: {}", failed.join(", "))))
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILED"
    }
}

fn rayon_workers(n: usize) -> Result<rayon::ThreadPool, Failure> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| Failure::runtime(e.to_string()))
}
