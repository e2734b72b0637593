//! Square QAM constellations with per-axis Gray labels.

use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    points: Vec<C64>,
    labels: Vec<u32>,
    bits_per_symbol: u32,
    power: f64,
}

impl Constellation {
    /// Order 4 (QPSK), 16 or 64, scaled to mean energy `power`.
    ///
    /// Point `i = li·L + lq` sits at in-phase level `li` and quadrature level
    /// `lq` (both ascending); its label is `gray(li) ‖ gray(lq)`.
    pub fn new(order: usize, power: f64) -> Result<Self> {
        let side = match order {
            4 => 2usize,
            16 => 4,
            64 => 8,
            other => return Err(Error::UnsupportedOrder(other)),
        };
        let half_bits = side.trailing_zeros();
        // Unscaled levels ±1, ±3, ... have mean energy 2(L²−1)/3 per point.
        let raw_energy = 2.0 * ((side * side - 1) as f64) / 3.0;
        let scale = (power / raw_energy).sqrt();
        let level = |l: usize| (2.0 * l as f64 - (side as f64 - 1.0)) * scale;
        let gray = |l: usize| (l ^ (l >> 1)) as u32;
        let mut points = Vec::with_capacity(order);
        let mut labels = Vec::with_capacity(order);
        for li in 0..side {
            for lq in 0..side {
                points.push(C64::new(level(li), level(lq)));
                labels.push((gray(li) << half_bits) | gray(lq));
            }
        }
        Ok(Self {
            points,
            labels,
            bits_per_symbol: 2 * half_bits,
            power,
        })
    }

    pub fn qpsk() -> Self {
        Self::new(4, 1.0).expect("QPSK is supported")
    }

    pub fn points(&self) -> &[C64] {
        &self.points
    }

    pub fn point(&self, i: usize) -> C64 {
        self.points[i]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn bits_per_symbol(&self) -> u32 {
        self.bits_per_symbol
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Mean symbol energy P.
    pub fn power(&self) -> f64 {
        self.power
    }

    /// Nearest point; ties go to the lowest index.
    pub fn slice(&self, z: C64) -> usize {
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for (i, a) in self.points.iter().enumerate() {
            let d = (z - a).norm_sqr();
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn qpsk_points() {
        let c = Constellation::qpsk();
        for a in c.points() {
            assert!((a.re.abs() - FRAC_1_SQRT_2).abs() < 1e-15);
            assert!((a.im.abs() - FRAC_1_SQRT_2).abs() < 1e-15);
        }
        let e: f64 = c.points().iter().map(|a| a.norm_sqr()).sum::<f64>() / 4.0;
        assert!((e - 1.0).abs() < 1e-12);
    }

    #[test]
    fn qpsk_power_two() {
        let c = Constellation::new(4, 2.0).unwrap();
        assert!(c.points().iter().all(|a| (a.norm_sqr() - 2.0).abs() < 1e-12));
    }

    #[test]
    fn gray_neighbours_differ_in_one_bit() {
        for order in [4, 16, 64] {
            let c = Constellation::new(order, 1.0).unwrap();
            let e: f64 = c.points().iter().map(|a| a.norm_sqr()).sum::<f64>() / order as f64;
            assert!((e - 1.0).abs() < 1e-12);
            let dmin = (0..order)
                .flat_map(|i| (0..order).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| (c.point(i) - c.point(j)).norm())
                .fold(f64::INFINITY, f64::min);
            for i in 0..order {
                for j in 0..order {
                    if i != j && ((c.point(i) - c.point(j)).norm() - dmin).abs() < 1e-9 {
                        assert_eq!((c.labels()[i] ^ c.labels()[j]).count_ones(), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn qpsk_angular_neighbours() {
        let c = Constellation::qpsk();
        let mut idx: Vec<usize> = (0..4).collect();
        idx.sort_by(|&a, &b| c.point(a).arg().total_cmp(&c.point(b).arg()));
        for w in 0..4 {
            let (a, b) = (idx[w], idx[(w + 1) % 4]);
            assert_eq!((c.labels()[a] ^ c.labels()[b]).count_ones(), 1);
        }
    }

    #[test]
    fn slicing_and_errors() {
        let c = Constellation::qpsk();
        for (i, a) in c.points().iter().enumerate() {
            assert_eq!(c.slice(*a * 3.0), i);
        }
        assert_eq!(c.slice(C64::new(0.0, 0.0)), 0);
        assert!(matches!(Constellation::new(8, 1.0), Err(Error::UnsupportedOrder(8))));
    }
}
