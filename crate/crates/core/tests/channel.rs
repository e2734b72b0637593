use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xlmimo::channel::{
    hermitian_eigen, kl_factor, one_ring_covariance, ChannelModel, UniformLinearArray, VisibilityRegion,
};
use xlmimo::{SystemConfig, C64};

fn small_config(seed: u64) -> SystemConfig {
    SystemConfig {
        num_antennas: 32,
        num_users: 6,
        rng_seed: seed,
        ..SystemConfig::default()
    }
}

#[test]
fn sampled_covariances_have_the_required_structure() {
    // 10 drops of 6 users: 60 random visibility regions.
    for seed in 0..10 {
        let config = small_config(seed);
        let model = ChannelModel::sample(&config, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        for user in &model.users {
            let r = user.covariance.to_dense();
            let vr = &user.vr().indices;
            assert!((&r - r.adjoint()).norm() < 1e-10);
            let (eig, _) = hermitian_eigen(&r).unwrap();
            assert!(eig[eig.len() - 1] >= -1e-8 * eig[0]);
            for p in 0..r.nrows() {
                for q in 0..r.ncols() {
                    if !(vr.contains(&p) && vr.contains(&q)) {
                        assert_eq!(r[(p, q)], C64::new(0.0, 0.0));
                    }
                }
                if vr.contains(&p) {
                    assert!((r[(p, p)].re - 1.0).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn kl_error_shrinks_with_rank() {
    let cov = one_ring_covariance(64, 5..60, 1.2, 0.4, 0.5, 1.0).unwrap();
    let r = cov.to_dense();
    let errors: Vec<f64> = [8, 16, 32, 64]
        .iter()
        .map(|&z| (kl_factor(&cov, z).unwrap().reconstruct() - &r).norm())
        .collect();
    for w in errors.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{errors:?}");
    }
    assert!(errors[3] / r.norm() < 1e-8);
}

#[test]
fn kl_basis_is_orthonormal_on_the_full_array() {
    let cov = one_ring_covariance(40, 10..18, 0.7, 0.2, 0.5, 1.0).unwrap();
    // ζ exceeds the 8 in-region antennas: padding columns fill the rest.
    let kl = kl_factor(&cov, 12).unwrap();
    let u = kl.dense_basis();
    let gram = u.adjoint() * &u;
    let eye = nalgebra::DMatrix::<C64>::identity(12, 12);
    assert!((gram - eye).norm() < 1e-8);
    assert!(kl.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    assert!(kl.eigenvalues.iter().all(|&v| v >= 0.0));
}

#[test]
fn pipeline_is_bitwise_deterministic() {
    let config = small_config(3);
    let draw = || {
        let model = ChannelModel::sample(&config, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        model.realize(&mut ChaCha8Rng::seed_from_u64(10)).unwrap().h
    };
    assert_eq!(draw(), draw());
}

#[test]
fn channel_support_is_the_visibility_region() {
    let config = small_config(5);
    let model = ChannelModel::sample(&config, &mut ChaCha8Rng::seed_from_u64(5)).unwrap();
    let h = model.realize(&mut ChaCha8Rng::seed_from_u64(6)).unwrap().h;
    for (k, user) in model.users.iter().enumerate() {
        for m in 0..config.num_antennas {
            let nonzero = h[(m, k)] != C64::new(0.0, 0.0);
            assert_eq!(nonzero, user.vr().contains(m), "user {k} antenna {m}");
        }
    }
}

#[test]
fn array_length_matches_the_table_value() {
    let config = SystemConfig::default();
    assert!((config.array_length() - 29.51).abs() / 29.51 < 0.005);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn masking_preserves_psd(start in 0usize..30, len in 1usize..30, theta in 0.05f64..3.09, spread in 0.01f64..0.8) {
        let m = 32;
        let end = (start + len).min(m);
        prop_assume!(end > start);
        let cov = one_ring_covariance(m, start..end, theta, spread, 0.5, 1.0).unwrap();
        let (eig, _) = hermitian_eigen(&cov.to_dense()).unwrap();
        prop_assert!(eig[eig.len() - 1] >= -1e-8 * eig[0]);
    }

    #[test]
    fn visibility_region_is_contiguous_and_inside(center in 0.0f64..10.0, length in 0.01f64..30.0) {
        let array = UniformLinearArray::new(21, 0.5);
        let vr = VisibilityRegion::from_interval(&array, center, length);
        for m in 0..21 {
            let x = m as f64 * 0.5;
            let (lo, hi) = (center - length / 2.0, center + length / 2.0);
            if (x - lo).abs() < 1e-6 || (x - hi).abs() < 1e-6 {
                continue;
            }
            prop_assert_eq!(vr.contains(m), x >= lo && x <= hi);
        }
    }
}
