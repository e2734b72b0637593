//! Truncated Karhunen-Loeve factors and correlated fast-fading draws.

use std::ops::Range;
use std::sync::Once;

use faer::{Mat, Side};
use rand::Rng;

use super::covariance::OneRingCovariance;
use super::complex_normal;
use crate::error::{Error, Result};
use crate::{CMatrix, C64};

static SEQUENTIAL: Once = Once::new();

/// Eigen-decomposition of a Hermitian matrix: eigenvalues in descending
/// order and the matching unit eigenvectors as columns.
pub fn hermitian_eigen(r: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    // Keep results independent of the caller's thread pool.
    SEQUENTIAL.call_once(|| faer::set_global_parallelism(faer::Par::Seq));
    let n = r.nrows();
    if r.ncols() != n {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", n, r.ncols())));
    }
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zeros(0, 0)));
    }
    let a = Mat::<faer::c64>::from_fn(n, n, |i, j| r[(i, j)]);
    let evd = a
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let s = evd.S();
    let u = evd.U();
    let mut order: Vec<usize> = (0..n).collect();
    let values: Vec<f64> = (0..n).map(|i| s[i].re).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Eigen("non-finite eigenvalue".into()));
    }
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| u[(i, order[j])]);
    Ok((sorted, vectors))
}

/// Rank-ζ Karhunen-Loeve factor `R ≈ U Λ Uᴴ` of a masked covariance.
///
/// Only the rows inside the visibility region are stored; every other row
/// of `U` is zero, except for padding columns (eigenvalue 0) that appear
/// when the region holds fewer than ζ antennas.
#[derive(Debug, Clone, PartialEq)]
pub struct KlFactor {
    pub num_antennas: usize,
    pub support: Range<usize>,
    /// Support rows of the leading eigenvectors, `n_vr × min(ζ, n_vr)`.
    pub basis: CMatrix,
    /// ζ eigenvalues, descending, clamped at zero.
    pub eigenvalues: Vec<f64>,
    /// `basis · diag(√Λ)`.
    coloring: CMatrix,
}

impl KlFactor {
    fn new(num_antennas: usize, support: Range<usize>, basis: CMatrix, eigenvalues: Vec<f64>) -> Self {
        let mut coloring = basis.clone();
        for (j, mut col) in coloring.column_iter_mut().enumerate() {
            col *= C64::new(eigenvalues[j].sqrt(), 0.0);
        }
        Self {
            num_antennas,
            support,
            basis,
            eigenvalues,
            coloring,
        }
    }

    /// ζ
    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Full `M × ζ` eigenvector matrix with orthonormal columns.
    pub fn dense_basis(&self) -> CMatrix {
        let m = self.num_antennas;
        let zeta = self.rank();
        let stored = self.basis.ncols();
        let mut u = CMatrix::zeros(m, zeta);
        for j in 0..stored {
            for (i, p) in self.support.clone().enumerate() {
                u[(p, j)] = self.basis[(i, j)];
            }
        }
        let outside = (0..m).filter(|p| !self.support.contains(p));
        for (j, p) in (stored..zeta).zip(outside) {
            u[(p, j)] = C64::new(1.0, 0.0);
        }
        u
    }

    /// `U Λ Uᴴ` as a dense `M × M` matrix.
    pub fn reconstruct(&self) -> CMatrix {
        let m = self.num_antennas;
        let mut out = CMatrix::zeros(m, m);
        let block = &self.coloring * self.coloring.adjoint();
        let s = self.support.start;
        for i in 0..block.nrows() {
            for j in 0..block.ncols() {
                out[(s + i, s + j)] = block[(i, j)];
            }
        }
        out
    }

    /// Σ Λ over the retained modes.
    pub fn retained_energy(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// `U Λ^{1/2} ω` for a given ζ-vector `ω`.
    pub fn color(&self, omega: &[C64]) -> Result<Vec<C64>> {
        if omega.len() != self.rank() {
            return Err(Error::Dimension(format!(
                "ω has {} entries, factor rank is {}",
                omega.len(),
                self.rank()
            )));
        }
        let mut out = vec![C64::new(0.0, 0.0); self.num_antennas];
        let stored = self.coloring.ncols();
        for (j, w) in omega.iter().take(stored).enumerate() {
            let col = self.coloring.column(j);
            for (i, p) in self.support.clone().enumerate() {
                out[p] += col[i] * w;
            }
        }
        Ok(out)
    }
}

/// Leading-ζ factor of a masked one-ring covariance. Only the in-region
/// block is decomposed; the zero rows and columns contribute eigenvalue 0.
pub fn kl_factor(cov: &OneRingCovariance, zeta: usize) -> Result<KlFactor> {
    let m = cov.num_antennas;
    if zeta < 1 || zeta > m {
        return Err(Error::Dimension(format!("ζ = {zeta} outside [1, {m}]")));
    }
    let (values, vectors) = hermitian_eigen(&cov.block())?;
    let kept = zeta.min(values.len());
    let basis = vectors.columns(0, kept).into_owned();
    let mut eigenvalues: Vec<f64> = values[..kept].iter().map(|v| v.max(0.0)).collect();
    eigenvalues.resize(zeta, 0.0);
    Ok(KlFactor::new(m, cov.support.clone(), basis, eigenvalues))
}

/// Leading-ζ factor of an arbitrary dense Hermitian matrix.
pub fn kl_factor_dense(r: &CMatrix, zeta: usize) -> Result<KlFactor> {
    let m = r.nrows();
    if zeta < 1 || zeta > m {
        return Err(Error::Dimension(format!("ζ = {zeta} outside [1, {m}]")));
    }
    let (values, vectors) = hermitian_eigen(r)?;
    let basis = vectors.columns(0, zeta).into_owned();
    let eigenvalues = values[..zeta].iter().map(|v| v.max(0.0)).collect();
    Ok(KlFactor::new(m, 0..m, basis, eigenvalues))
}

/// Draws `ω ~ CN(0, I_ζ)` and returns `h̄ = U Λ^{1/2} ω`.
pub fn sample_fast_fading<R: Rng + ?Sized>(kl: &KlFactor, rng: &mut R) -> Vec<C64> {
    let omega: Vec<C64> = (0..kl.rank()).map(|_| complex_normal(rng)).collect();
    kl.color(&omega).expect("ω sized to the factor rank")
}
