use xlmimo::io::{parse_config, serialize_config, sweep_csv};
use xlmimo::sim::stats::wilson_half_width;
use xlmimo::sim::{ser_sweep, Detector, SweepOptions};
use xlmimo::SystemConfig;

fn tiny() -> SystemConfig {
    SystemConfig {
        num_antennas: 16,
        num_users: 4,
        trials_per_point: 40,
        trials_per_drop: 8,
        target_errors: 10,
        rng_seed: 3,
        ..SystemConfig::default()
    }
}

#[test]
fn sweep_csv_is_independent_of_workers() {
    let config = tiny();
    let grid = [0.0, 6.0, 12.0];
    let run = |workers| {
        let opts = SweepOptions { workers, ..SweepOptions::from_config(&config) };
        sweep_csv(&ser_sweep(&config, &grid, &opts).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(1));
    assert_eq!(one, run(4));
}

#[test]
fn sweep_reports_consistent_totals() {
    let config = tiny();
    let r = ser_sweep(&config, &[0.0, 20.0], &SweepOptions::from_config(&config)).unwrap();
    for p in &r.points {
        assert!(p.trials <= 40 && p.trials % 8 == 0 || p.trials == 40);
        assert_eq!(p.symbols, p.trials * 4);
        for d in Detector::ALL {
            let e = p.errors[d.index()];
            assert_eq!(p.ser_of(d), e as f64 / p.symbols as f64);
            assert_eq!(p.ci_of(d), wilson_half_width(e, p.symbols));
        }
        assert!(p.ops_per_trial[Detector::Vmp.index()] > 0);
    }
}

#[test]
fn early_stop_only_cuts_whole_drops() {
    let mut config = tiny();
    config.target_errors = 1;
    let r = ser_sweep(&config, &[-10.0], &SweepOptions::from_config(&config)).unwrap();
    assert_eq!(r.points[0].trials % 8, 0);
    assert!(r.points[0].trials < 40);
}

#[test]
fn config_documents_round_trip() {
    let mut c = tiny();
    c.snr_start_db = -3.5;
    let text = serialize_config(&c).unwrap();
    assert_eq!(parse_config(&text).unwrap(), c);
}
