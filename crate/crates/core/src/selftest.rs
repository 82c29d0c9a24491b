//! Built-in correctness checks behind the `selftest` subcommand.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alignment::{detect_reference, realign, report_ranges};
use crate::channel::{simulate_received, trial_rng, DelayModel};
use crate::correlator::{
    circular_xcorr_direct, circular_xcorr_fft, to_ascan, AScan, ComplexVector,
};
use crate::error::Result;
use crate::pipeline::reference_code;
use crate::scenario::Scenario;

/// Lengths exercised by the FFT-vs-direct comparison.
pub const ORACLE_SIZES: [usize; 3] = [8, 64, 128];

/// Relative tolerance of the FFT-vs-direct comparison; the absolute bound is
/// `ORACLE_REL_TOL · N · max|x| · max|ref|`.
pub const ORACLE_REL_TOL: f64 = 1e-9;

pub fn oracle_tolerance(received: &ComplexVector, reference: &ComplexVector) -> f64 {
    ORACLE_REL_TOL * received.len() as f64 * received.max_abs() * reference.max_abs()
}

fn max_abs_diff(a: &ComplexVector, b: &ComplexVector) -> f64 {
    a.samples()
        .iter()
        .zip(b.samples())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub pairs: usize,
    pub failures: usize,
    /// Largest observed error divided by its tolerance.
    pub worst_ratio: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Compare the two correlators on `pairs_per_size` random pairs per length.
pub fn oracle_equivalence(seed: u64, pairs_per_size: usize) -> Result<OracleCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = OracleCheck {
        pairs: 0,
        failures: 0,
        worst_ratio: 0.0,
    };
    for n in ORACLE_SIZES {
        for _ in 0..pairs_per_size {
            let scale = 10f64.powf(rng.gen_range(-3.0..3.0));
            let mut draw = || {
                ComplexVector::new(
                    (0..n)
                        .map(|_| {
                            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                                * scale
                        })
                        .collect(),
                )
            };
            let x = draw()?;
            let h = draw()?;
            let err = max_abs_diff(
                &circular_xcorr_fft(&x, &h)?,
                &circular_xcorr_direct(&x, &h)?,
            );
            let ratio = err / oracle_tolerance(&x, &h);
            check.pairs += 1;
            if ratio > 1.0 {
                check.failures += 1;
            }
            check.worst_ratio = check.worst_ratio.max(ratio);
        }
    }
    Ok(check)
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceCheck {
    pub delays: usize,
    /// Delays whose detected reference equalled the applied delay.
    pub reference_matches: usize,
    /// Delays whose aligned peaks were exactly the expected set.
    pub peak_matches: usize,
    pub expected_peaks: Vec<usize>,
    /// Delays whose direct-summation aligned magnitudes equal the `d = 0`
    /// array bit for bit.
    pub direct_bit_identical: usize,
    /// Delays whose FFT aligned magnitudes equal the `d = 0` array bit for bit.
    pub fft_bit_identical: usize,
    /// Largest deviation of FFT aligned magnitudes from the `d = 0` array.
    pub fft_max_deviation: f64,
    /// Oracle tolerance applied to `fft_max_deviation`.
    pub fft_tolerance: f64,
}

impl InvarianceCheck {
    pub fn passed(&self) -> bool {
        self.reference_matches == self.delays
            && self.peak_matches == self.delays
            && self.direct_bit_identical == self.delays
            && self.fft_max_deviation <= self.fft_tolerance
    }
}

fn aligned(scan: AScan) -> Result<AScan> {
    let r = detect_reference(&scan)?;
    realign(&scan, r)
}

/// Sweep every transport delay through a noiseless copy of `scenario`.
pub fn delay_invariance(scenario: &Scenario) -> Result<InvarianceCheck> {
    let params = scenario.radar;
    let mut channel = scenario.channel.clone();
    channel.noise_sigma = 0.0;
    let code = reference_code(&params)?;
    let reference = ComplexVector::new(code.to_complex())?;
    let mut expected_peaks = vec![0];
    expected_peaks.extend(channel.target_bins(&params)?);
    expected_peaks.sort_unstable();
    expected_peaks.dedup();

    let mut check = InvarianceCheck {
        delays: params.n_bins,
        reference_matches: 0,
        peak_matches: 0,
        expected_peaks,
        direct_bit_identical: 0,
        fft_bit_identical: 0,
        fft_max_deviation: 0.0,
        fft_tolerance: 0.0,
    };
    let mut base_fft: Option<Vec<f64>> = None;
    let mut base_direct: Option<Vec<f64>> = None;

    for d in 0..params.n_bins {
        channel.delay = DelayModel::Fixed(d);
        let y = simulate_received(&code, d, &channel, &params, &mut trial_rng(channel.seed, 0))?;
        check.fft_tolerance = check.fft_tolerance.max(oracle_tolerance(&y, &reference));

        let fft_scan = to_ascan(circular_xcorr_fft(&y, &reference)?);
        if detect_reference(&fft_scan)? == d {
            check.reference_matches += 1;
        }
        let fft = aligned(fft_scan)?;
        if report_ranges(&fft, scenario.threshold, &params)?.bins() == check.expected_peaks {
            check.peak_matches += 1;
        }
        let direct = aligned(to_ascan(circular_xcorr_direct(&y, &reference)?))?;

        let base = base_fft.get_or_insert_with(|| fft.magnitudes().to_vec());
        if base.as_slice() == fft.magnitudes() {
            check.fft_bit_identical += 1;
        }
        let dev = base
            .iter()
            .zip(fft.magnitudes())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        check.fft_max_deviation = check.fft_max_deviation.max(dev);

        let base = base_direct.get_or_insert_with(|| direct.magnitudes().to_vec());
        if base.as_slice() == direct.magnitudes() {
            check.direct_bit_identical += 1;
        }
    }
    Ok(check)
}

#[derive(Debug, Clone)]
pub struct SelftestReport {
    pub oracle: OracleCheck,
    pub invariance: InvarianceCheck,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.oracle.passed() && self.invariance.passed()
    }

    pub fn lines(&self) -> Vec<String> {
        let verdict = |ok: bool| if ok { "PASS" } else { "FAIL" };
        let o = &self.oracle;
        let v = &self.invariance;
        vec![
            format!(
                "[{}] fft vs direct correlation: {} pairs at N in {:?}, {} over tolerance, worst error/tolerance {:.3e}",
                verdict(o.passed()),
                o.pairs,
                ORACLE_SIZES,
                o.failures,
                o.worst_ratio
            ),
            format!(
                "[{}] reference detection: {}/{} delays",
                verdict(v.reference_matches == v.delays),
                v.reference_matches,
                v.delays
            ),
            format!(
                "[{}] aligned peaks at {:?}: {}/{} delays",
                verdict(v.peak_matches == v.delays),
                v.expected_peaks,
                v.peak_matches,
                v.delays
            ),
            format!(
                "[{}] aligned magnitudes bit-identical across delays (direct summation): {}/{}",
                verdict(v.direct_bit_identical == v.delays),
                v.direct_bit_identical,
                v.delays
            ),
            format!(
                "[{}] aligned magnitudes across delays (fft): max deviation {:.3e} <= {:.3e}, {}/{} bit-identical",
                verdict(v.fft_max_deviation <= v.fft_tolerance),
                v.fft_max_deviation,
                v.fft_tolerance,
                v.fft_bit_identical,
                v.delays
            ),
        ]
    }
}

pub fn run_selftest(seed: u64) -> Result<SelftestReport> {
    Ok(SelftestReport {
        oracle: oracle_equivalence(seed, 70)?,
        invariance: delay_invariance(&Scenario::fig5())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        let report = run_selftest(1).unwrap();
        assert!(report.passed(), "{:#?}", report.lines());
        assert_eq!(report.oracle.pairs, 210);
        assert_eq!(report.invariance.expected_peaks, vec![0, 16, 32]);
    }
}
