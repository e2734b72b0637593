//! Closed-form multiplication counts and their check against the
//! instrumented detectors.
//!
//! ```text
//! C_ZF  = K³/3 + MK² + MK
//! C_VMP = I·(M(3 + 2K) + MK|A|) + 3MK
//! ```

use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channel::complex_normal;
use crate::detect::vmp::{TERM_INIT, TERM_POSTERIOR, TERM_PRECISION};
use crate::detect::zf::{cubic_third_rounded, TERM_GRAM, TERM_MATCHED, TERM_SOLVE};
use crate::detect::{zf_detect, Constellation, VmpDetector};
use crate::error::Result;
use crate::{CMatrix, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexityCount {
    /// C_ZF rounded to the nearest integer.
    pub c_zf: u64,
    pub c_zf_exact: Ratio<u64>,
    pub c_vmp: u64,
    /// VMP terms: precision updates, symbol updates, MRC initialization.
    pub vmp_terms: [u64; 3],
    pub measured_vmp: Option<u64>,
    pub measured_zf: Option<u64>,
}

impl ComplexityCount {
    /// C_ZF / C_VMP.
    pub fn zf_to_vmp_ratio(&self) -> Ratio<u64> {
        self.c_zf_exact / Ratio::from_integer(self.c_vmp)
    }
}

pub fn complexity_closed_form(m: u64, k: u64, order: u64, iterations: u64) -> ComplexityCount {
    let precision = iterations * m * (3 + 2 * k);
    let posterior = iterations * m * k * order;
    let init = 3 * m * k;
    let c_zf_exact = Ratio::new(k * k * k, 3) + Ratio::from_integer(m * k * k + m * k);
    ComplexityCount {
        c_zf: cubic_third_rounded(k) + m * k * k + m * k,
        c_zf_exact,
        c_vmp: precision + posterior + init,
        vmp_terms: [precision, posterior, init],
        measured_vmp: None,
        measured_zf: None,
    }
}

/// One row of the load-regime table.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadRow {
    pub m: u64,
    pub k: u64,
    /// Nominal M/K.
    pub ratio: u64,
    pub count: ComplexityCount,
}

/// Closed forms for every `M` and nominal load `M/K`; `K = round(M/ratio)`,
/// at least 1.
pub fn load_table(ms: &[u64], ratios: &[u64], order: u64, iterations: u64) -> Vec<LoadRow> {
    let mut rows = Vec::new();
    for &m in ms {
        for &ratio in ratios {
            let k = ((m + ratio / 2) / ratio).max(1);
            rows.push(LoadRow {
                m,
                k,
                ratio,
                count: complexity_closed_form(m, k, order, iterations),
            });
        }
    }
    rows
}

/// Measured-versus-expected tallies for one term.
#[derive(Debug, Clone, PartialEq)]
pub struct TermCheck {
    pub detector: &'static str,
    pub term: &'static str,
    pub expected: u64,
    pub measured: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterReport {
    pub m: u64,
    pub k: u64,
    pub iterations: u64,
    pub count: ComplexityCount,
    pub terms: Vec<TermCheck>,
}

impl CounterReport {
    pub fn passed(&self) -> bool {
        self.terms.iter().all(|t| t.expected == t.measured)
            && self.count.measured_vmp == Some(self.count.c_vmp)
            && self.count.measured_zf == Some(self.count.c_zf)
    }

    pub fn mismatches(&self) -> Vec<&TermCheck> {
        self.terms.iter().filter(|t| t.expected != t.measured).collect()
    }
}

/// Runs VMP and ZF once on a seeded i.i.d. channel and compares their
/// counters with the closed forms term by term.
pub fn verify_counters(m: usize, k: usize, iterations: usize, constellation: &Constellation, seed: u64) -> Result<CounterReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = CMatrix::from_fn(m, k, |_, _| complex_normal(&mut rng));
    let y: Vec<C64> = (0..m).map(|_| complex_normal(&mut rng)).collect();
    let vmp = VmpDetector {
        iterations,
        ..VmpDetector::default()
    }
    .detect(&h, &y, 0.1, constellation)?;
    let zf = zf_detect(&h, &y, constellation)?;

    let (mu, ku, iu, a) = (m as u64, k as u64, iterations as u64, constellation.len() as u64);
    let mut count = complexity_closed_form(mu, ku, a, iu);
    count.measured_vmp = Some(vmp.op_count());
    count.measured_zf = Some(zf.op_count());
    let [precision, posterior, init] = count.vmp_terms;
    let terms = vec![
        TermCheck { detector: "vmp", term: TERM_PRECISION, expected: precision, measured: vmp.ops.get(TERM_PRECISION) },
        TermCheck { detector: "vmp", term: TERM_POSTERIOR, expected: posterior, measured: vmp.ops.get(TERM_POSTERIOR) },
        TermCheck { detector: "vmp", term: TERM_INIT, expected: init, measured: vmp.ops.get(TERM_INIT) },
        TermCheck { detector: "zf", term: TERM_SOLVE, expected: cubic_third_rounded(ku), measured: zf.ops.get(TERM_SOLVE) },
        TermCheck { detector: "zf", term: TERM_GRAM, expected: mu * ku * ku, measured: zf.ops.get(TERM_GRAM) },
        TermCheck { detector: "zf", term: TERM_MATCHED, expected: mu * ku, measured: zf.ops.get(TERM_MATCHED) },
    ];
    Ok(CounterReport {
        m: mu,
        k: ku,
        iterations: iu,
        count,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_scale_values() {
        let c = complexity_closed_form(512, 256, 4, 3);
        assert_eq!(c.c_vmp, 2_757_120);
        assert_eq!(c.c_zf, 39_277_909);
        assert_eq!(c.c_zf_exact, Ratio::new(117_833_728, 3));
    }

    #[test]
    fn zero_iterations_leave_the_init_term() {
        let c = complexity_closed_form(64, 32, 4, 0);
        assert_eq!(c.c_vmp, 3 * 64 * 32);
    }

    #[test]
    fn small_instance_counters() {
        let r = verify_counters(16, 8, 3, &Constellation::qpsk(), 1).unwrap();
        assert!(r.passed(), "{:?}", r.mismatches());
        assert_eq!(r.count.c_vmp, 2832);
        assert_eq!(r.count.c_zf, 171 + 1024 + 128);
        let r = verify_counters(16, 8, 0, &Constellation::qpsk(), 1).unwrap();
        assert_eq!(r.count.measured_vmp, Some(3 * 16 * 8));
    }

    #[test]
    fn load_table_rounds_user_counts() {
        let rows = load_table(&[64, 512], &[2, 10, 20], 4, 3);
        let ks: Vec<u64> = rows.iter().map(|r| r.k).collect();
        assert_eq!(ks, vec![32, 6, 3, 256, 51, 26]);
    }
}
