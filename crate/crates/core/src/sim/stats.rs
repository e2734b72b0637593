//! Error-rate confidence intervals.

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Half-width of the 95% Wilson score interval for `errors` out of `total`.
pub fn wilson_half_width(errors: u64, total: u64) -> f64 {
    wilson_interval(errors, total).1
}

/// `(center, half_width)` of the 95% Wilson score interval.
pub fn wilson_interval(errors: u64, total: u64) -> (f64, f64) {
    if total == 0 {
        return (0.5, 0.5);
    }
    let n = total as f64;
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    (center, half)
}

/// `[low, high]` bounds of the Wilson interval.
pub fn wilson_bounds(errors: u64, total: u64) -> (f64, f64) {
    let (c, h) = wilson_interval(errors, total);
    ((c - h).max(0.0), (c + h).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_value() {
        // 10 of 100: Wilson interval [0.0552, 0.1744].
        let (lo, hi) = wilson_bounds(10, 100);
        assert!((lo - 0.05523).abs() < 1e-4, "{lo}");
        assert!((hi - 0.17437).abs() < 1e-4, "{hi}");
    }

    #[test]
    fn interval_contains_estimate() {
        for (e, n) in [(0u64, 50u64), (3, 1000), (500, 1000), (1000, 1000)] {
            let (lo, hi) = wilson_bounds(e, n);
            let p = e as f64 / n as f64;
            assert!(lo <= p + 1e-15 && p <= hi + 1e-15);
        }
    }

    #[test]
    fn half_width_scales_with_inverse_root_n() {
        let p = 0.02;
        for n in [10_000u64, 50_000, 200_000] {
            let e = (p * n as f64) as u64;
            let w1 = wilson_half_width(e, n);
            let w2 = wilson_half_width(2 * e, 2 * n);
            let w4 = wilson_half_width(4 * e, 4 * n);
            assert!((w2 / w1 - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.2 * std::f64::consts::FRAC_1_SQRT_2);
            assert!((w4 / w1 - 0.5).abs() < 0.2 * 0.5);
        }
    }
}
