//! One-ring spatial correlation restricted to a visibility region.
//!
//! For a ULA on the x-axis the correlation between antennas `p` and `q`
//! depends only on the lag `p − q`:
//!
//! ```text
//! g(n) = 1/(2Δ) ∫_{-Δ}^{Δ} exp(−j·κ·n·cos(α + θ)) dα,   κ = 2π·d/λ
//! ```
//!
//! so the in-region block is Hermitian Toeplitz and is stored by its first
//! column. Entries touching an antenna outside the region are zero.

use std::f64::consts::PI;
use std::ops::Range;

use super::quadrature::GaussLegendre;
use crate::error::{Error, Result};
use crate::{CMatrix, C64};

/// Largest phase excursion of the integrand handled by a single panel.
const PANEL_PHASE: f64 = 16.0;

/// Masked one-ring covariance of one user.
#[derive(Debug, Clone, PartialEq)]
pub struct OneRingCovariance {
    pub num_antennas: usize,
    pub support: Range<usize>,
    /// `lags[n] = R[p + n, p]` for in-region `p`, `n = 0..support.len()`.
    pub lags: Vec<C64>,
}

impl OneRingCovariance {
    /// Entry `R[p, q]`.
    pub fn entry(&self, p: usize, q: usize) -> C64 {
        if !self.support.contains(&p) || !self.support.contains(&q) {
            return C64::new(0.0, 0.0);
        }
        if p >= q {
            self.lags[p - q]
        } else {
            self.lags[q - p].conj()
        }
    }

    /// Dense block over the support, `n_vr × n_vr`.
    pub fn block(&self) -> CMatrix {
        let n = self.support.len();
        let s = self.support.start;
        CMatrix::from_fn(n, n, |i, j| self.entry(s + i, s + j))
    }

    /// Full `M × M` matrix with the zero mask applied.
    pub fn to_dense(&self) -> CMatrix {
        let m = self.num_antennas;
        CMatrix::from_fn(m, m, |p, q| self.entry(p, q))
    }

    /// Sum of the diagonal, equal to the support size.
    pub fn trace(&self) -> f64 {
        self.support.len() as f64 * self.lags.first().map_or(0.0, |z| z.re)
    }
}

/// Angle average of `exp(−j·phase·cos(α + θ))` over `α ∈ [−Δ, Δ]`.
///
/// Uses composite Gauss-Legendre with enough panels that each one spans at
/// most [`PANEL_PHASE`] radians of integrand phase.
pub fn one_ring_lag(phase: f64, azimuth: f64, spread: f64) -> C64 {
    let rule = GaussLegendre::standard();
    let excursion = 2.0 * spread * phase.abs();
    let panels = ((excursion / PANEL_PHASE).ceil() as usize).max(1);
    let width = 2.0 * spread / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..panels {
        let mid = -spread + (k as f64 + 0.5) * width;
        let mut panel = C64::new(0.0, 0.0);
        for (t, w) in rule.nodes.iter().zip(&rule.weights) {
            let alpha = mid + 0.5 * width * t;
            let arg = -phase * (alpha + azimuth).cos();
            panel += C64::new(arg.cos(), arg.sin()) * *w;
        }
        acc += panel;
    }
    // Σ over panels of (width/2)·Σ w_i f, divided by the interval 2Δ.
    acc * (0.5 / panels as f64)
}

/// Builds `R` for a user with azimuth `θ` and angular spread `Δ` (radians),
/// seen by the antennas in `support` of a ULA with the given spacing.
pub fn one_ring_covariance(
    num_antennas: usize,
    support: Range<usize>,
    azimuth: f64,
    spread: f64,
    spacing: f64,
    wavelength: f64,
) -> Result<OneRingCovariance> {
    if !(spread > 0.0) || support.is_empty() || support.end > num_antennas {
        return Err(Error::BadGeometry { lag: 0 });
    }
    let kappa = 2.0 * PI * spacing / wavelength;
    let lags = (0..support.len())
        .map(|n| {
            let v = if n == 0 {
                C64::new(1.0, 0.0)
            } else {
                one_ring_lag(kappa * n as f64, azimuth, spread)
            };
            if v.re.is_finite() && v.im.is_finite() {
                Ok(v)
            } else {
                Err(Error::BadGeometry { lag: n })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OneRingCovariance {
        num_antennas,
        support,
        lags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    // Adaptive Simpson on the real and imaginary parts, independent of the
    // Gauss-Legendre path.
    fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
        fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                    + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
            }
        }
        let fa = f(a);
        let fb = f(b);
        let fm = f(0.5 * (a + b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(f, a, b, fa, fm, fb, whole, tol, 50)
    }

    fn reference_lag(phase: f64, azimuth: f64, spread: f64) -> C64 {
        // Split into many sub-intervals so each Simpson call sees a smooth piece.
        let pieces = 200;
        let h = 2.0 * spread / pieces as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for i in 0..pieces {
            let a = -spread + i as f64 * h;
            let b = a + h;
            re += adaptive_simpson(&|x: f64| (-phase * (x + azimuth).cos()).cos(), a, b, 1e-13);
            im += adaptive_simpson(&|x: f64| (-phase * (x + azimuth).cos()).sin(), a, b, 1e-13);
        }
        C64::new(re, im) / (2.0 * spread)
    }

    #[test]
    fn quadrature_matches_adaptive_reference() {
        let cases = [
            (PI * 1.0, 0.7, 0.3),
            (PI * 17.0, 1.2, 0.45),
            (PI * 127.0, 2.1, 0.7),
            (PI * 511.0, 0.4, 0.78),
            (PI * 60.0, FRAC_PI_2, 0.05),
        ];
        for (phase, theta, spread) in cases {
            let got = one_ring_lag(phase, theta, spread);
            let want = reference_lag(phase, theta, spread);
            assert!((got - want).norm() < 1e-10, "phase {phase}: {got} vs {want}");
        }
    }

    #[test]
    fn unit_diagonal_and_mask() {
        let r = one_ring_covariance(12, 3..9, 1.0, 0.2, 0.5, 1.0).unwrap();
        let d = r.to_dense();
        for p in 0..12 {
            for q in 0..12 {
                let inside = (3..9).contains(&p) && (3..9).contains(&q);
                if !inside {
                    assert_eq!(d[(p, q)], C64::new(0.0, 0.0));
                } else if p == q {
                    assert_eq!(d[(p, q)], C64::new(1.0, 0.0));
                }
            }
        }
        let herm = (&d - d.adjoint()).norm();
        assert!(herm < 1e-10);
        assert_eq!(r.trace(), 6.0);
    }

    #[test]
    fn zero_spread_broadside_is_all_ones() {
        let r = one_ring_covariance(8, 0..8, FRAC_PI_2, 1e-9, 0.5, 1.0).unwrap();
        let d = r.to_dense();
        for z in d.iter() {
            assert!((z - C64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(one_ring_covariance(8, 0..8, 1.0, 0.0, 0.5, 1.0).is_err());
        assert!(one_ring_covariance(8, 3..3, 1.0, 0.1, 0.5, 1.0).is_err());
    }
}
