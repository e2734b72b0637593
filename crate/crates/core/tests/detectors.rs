use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use xlmimo::channel::{complex_normal, transmit};
use xlmimo::config::Schedule;
use xlmimo::detect::{ml_detect, mfb_detect_all, zf_detect, Constellation, VmpDetector};
use xlmimo::{CMatrix, C64};

fn problem(seed: u64, m: usize, k: usize, sigma2: f64) -> (CMatrix, Vec<usize>, xlmimo::channel::Observation) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = Constellation::qpsk();
    let h = CMatrix::from_fn(m, k, |_, _| complex_normal(&mut rng));
    let truth: Vec<usize> = (0..k).map(|_| rng.random_range(0..c.len())).collect();
    let x: Vec<C64> = truth.iter().map(|&i| c.point(i)).collect();
    let obs = transmit(&h, &x, sigma2, &mut rng).unwrap();
    (h, truth, obs)
}

#[test]
fn all_detectors_are_exact_without_noise() {
    let c = Constellation::qpsk();
    for seed in 0..5 {
        let (h, truth, obs) = problem(seed, 16, 4, 0.0);
        assert_eq!(zf_detect(&h, &obs.received, &c).unwrap().hard_symbols, truth);
        assert_eq!(ml_detect(&h, &obs.received, &c).unwrap().hard_symbols, truth);
        assert_eq!(mfb_detect_all(&h, &obs, &c).unwrap().hard_symbols, truth);
    }
}

#[test]
fn vmp_matches_ml_on_well_conditioned_channels() {
    let c = Constellation::qpsk();
    let mut disagreements = 0;
    for seed in 0..50 {
        let (h, _, obs) = problem(seed, 32, 4, 0.05);
        let vmp = VmpDetector::default().detect(&h, &obs.received, 0.05, &c).unwrap();
        let ml = ml_detect(&h, &obs.received, &c).unwrap();
        disagreements += vmp.hard_symbols.iter().zip(&ml.hard_symbols).filter(|(a, b)| a != b).count();
    }
    assert!(disagreements <= 2, "{disagreements}");
}

#[test]
fn higher_order_constellations_run() {
    for order in [16, 64] {
        let c = Constellation::new(order, 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(order as u64);
        let h = CMatrix::from_fn(24, 3, |_, _| complex_normal(&mut rng));
        let truth: Vec<usize> = (0..3).map(|_| rng.random_range(0..order)).collect();
        let x: Vec<C64> = truth.iter().map(|&i| c.point(i)).collect();
        let obs = transmit(&h, &x, 0.0, &mut rng).unwrap();
        let vmp = VmpDetector { iterations: 6, ..VmpDetector::default() }
            .detect(&h, &obs.received, 1e-6, &c)
            .unwrap();
        assert_eq!(zf_detect(&h, &obs.received, &c).unwrap().hard_symbols, truth);
        assert_eq!(vmp.posteriors.unwrap().len(), 3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn posteriors_stay_normalized(seed in any::<u64>(), iterations in 0usize..6, damping in 0.0f64..=1.0, gs in any::<bool>()) {
        let c = Constellation::qpsk();
        let (h, _, obs) = problem(seed, 12, 6, 0.3);
        let det = VmpDetector {
            iterations,
            damping,
            schedule: if gs { Schedule::GaussSeidel } else { Schedule::Jacobi },
            ..VmpDetector::default()
        };
        let r = det.detect(&h, &obs.received, 0.3, &c).unwrap();
        for q in r.posteriors.unwrap() {
            let total: f64 = q.pmf().iter().sum();
            prop_assert!((total - 1.0).abs() < 1e-12);
            prop_assert!(q.pmf().iter().all(|p| (0.0..=1.0).contains(p)));
        }
    }

    #[test]
    fn ml_never_loses_to_vmp_in_likelihood(seed in any::<u64>()) {
        let c = Constellation::qpsk();
        let (h, _, obs) = problem(seed, 6, 2, 0.5);
        let residual = |s: &[usize]| -> f64 {
            (0..h.nrows())
                .map(|b| {
                    let hx: C64 = s.iter().enumerate().map(|(k, &i)| h[(b, k)] * c.point(i)).sum();
                    (obs.received[b] - hx).norm_sqr()
                })
                .sum()
        };
        let ml = ml_detect(&h, &obs.received, &c).unwrap().hard_symbols;
        let vmp = VmpDetector::default().detect(&h, &obs.received, 0.5, &c).unwrap().hard_symbols;
        prop_assert!(residual(&ml) <= residual(&vmp) + 1e-9);
    }
}
