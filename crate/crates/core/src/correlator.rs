//! Circular cross-correlation of a received window against the reference
//! code, in the transform domain and by direct summation, plus A-scan peak
//! utilities.
//!
//! Both correlators compute
//!
//! ```text
//! r[k] = Σₙ received[n] · conj(reference[(n − k) mod N])
//! ```
//!
//! so a received window that is the reference rotated by `d` samples peaks at
//! `k = d`. The forward DFT is unscaled and the inverse carries `1/N`, which
//! makes `r[0]` of an autocorrelation equal to the signal energy.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite, non-empty vector of complex baseband samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(samples: Vec<Complex64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::validation("samples", "vector must be non-empty"));
        }
        if let Some(i) = samples
            .iter()
            .position(|s| !s.re.is_finite() || !s.im.is_finite())
        {
            return Err(Error::NonFinite(i));
        }
        Ok(Self(samples))
    }

    /// Real-valued samples with zero quadrature.
    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); n.max(1)])
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    /// `out[n] = self[(n − shift) mod N]`, so the content moves `shift`
    /// samples later.
    pub fn circshift(&self, shift: usize) -> Self {
        let mut v = self.0.clone();
        let n = v.len();
        v.rotate_right(shift % n);
        Self(v)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|s| s.norm()).fold(0.0, f64::max)
    }
}

fn check_lengths(received: &ComplexVector, reference: &ComplexVector) -> Result<usize> {
    if received.len() != reference.len() {
        return Err(Error::LengthMismatch {
            received: received.len(),
            reference: reference.len(),
        });
    }
    Ok(received.len())
}

/// Transform-domain circular cross-correlation:
/// `IDFT(DFT(received) ⊙ conj(DFT(reference)))`.
///
/// A planner is built per call, so the function holds no shared state and may
/// run concurrently from any thread.
pub fn circular_xcorr_fft(
    received: &ComplexVector,
    reference: &ComplexVector,
) -> Result<ComplexVector> {
    let n = check_lengths(received, reference)?;
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }

    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);

    let mut rx = received.0.clone();
    let mut tx = reference.0.clone();
    forward.process(&mut rx);
    forward.process(&mut tx);

    let mut product: Vec<Complex64> = rx.iter().zip(&tx).map(|(r, t)| r * t.conj()).collect();
    inverse.process(&mut product);

    let scale = 1.0 / n as f64;
    for v in &mut product {
        *v *= scale;
    }
    Ok(ComplexVector(product))
}

/// O(N²) circular cross-correlation by direct summation. Used as the oracle
/// for [`circular_xcorr_fft`]; any length is accepted.
pub fn circular_xcorr_direct(
    received: &ComplexVector,
    reference: &ComplexVector,
) -> Result<ComplexVector> {
    let n = check_lengths(received, reference)?;
    let x = received.samples();
    let h = reference.samples();
    let out = (0..n)
        .map(|k| {
            (0..n)
                .map(|m| x[(m + k) % n] * h[m].conj())
                .fold(Complex64::new(0.0, 0.0), |acc, v| acc + v)
        })
        .collect();
    Ok(ComplexVector(out))
}

/// One correlation window and its magnitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AScan {
    correlation: Vec<Complex64>,
    magnitudes: Vec<f64>,
    aligned: bool,
    reference_bin: Option<usize>,
}

impl AScan {
    pub(crate) fn from_parts(
        correlation: Vec<Complex64>,
        magnitudes: Vec<f64>,
        aligned: bool,
        reference_bin: Option<usize>,
    ) -> Self {
        debug_assert_eq!(correlation.len(), magnitudes.len());
        Self {
            correlation,
            magnitudes,
            aligned,
            reference_bin,
        }
    }

    /// Build an unaligned scan from raw magnitudes (zero phase).
    pub fn from_magnitudes(magnitudes: Vec<f64>) -> Self {
        let correlation = magnitudes.iter().map(|&m| Complex64::new(m, 0.0)).collect();
        Self {
            correlation,
            magnitudes,
            aligned: false,
            reference_bin: None,
        }
    }

    pub fn correlation(&self) -> &[Complex64] {
        &self.correlation
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn n_bins(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_aligned(&self) -> bool {
        self.aligned
    }

    pub fn reference_bin(&self) -> Option<usize> {
        self.reference_bin
    }

    pub fn max_magnitude(&self) -> f64 {
        self.magnitudes.iter().copied().fold(0.0, f64::max)
    }
}

pub fn to_ascan(correlation: ComplexVector) -> AScan {
    let magnitudes = correlation.0.iter().map(|c| c.norm()).collect();
    AScan {
        correlation: correlation.0,
        magnitudes,
        aligned: false,
        reference_bin: None,
    }
}

/// A local maximum of an A-scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub bin: usize,
    pub magnitude: f64,
}

/// Circular local maxima at or above `relative_threshold · max`.
///
/// A bin qualifies when it is `>=` both circular neighbours, so plateau
/// edges are all reported. An all-zero scan yields no peaks.
pub fn find_peaks(scan: &AScan, relative_threshold: f64) -> Result<Vec<Peak>> {
    if !(relative_threshold > 0.0 && relative_threshold <= 1.0) {
        return Err(Error::validation(
            "relative_threshold",
            format!("{relative_threshold} is outside (0, 1]"),
        ));
    }
    let m = scan.magnitudes();
    let n = m.len();
    if n == 0 {
        return Err(Error::validation("scan", "n_bins must be at least 1"));
    }
    let max = scan.max_magnitude();
    if max == 0.0 {
        return Ok(Vec::new());
    }
    let floor = relative_threshold * max;
    Ok((0..n)
        .filter(|&k| {
            let prev = m[(k + n - 1) % n];
            let next = m[(k + 1) % n];
            m[k] >= prev && m[k] >= next && m[k] >= floor
        })
        .map(|k| Peak {
            bin: k,
            magnitude: m[k],
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::build_pnc128;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn pnc() -> ComplexVector {
        ComplexVector::new(build_pnc128().to_complex()).unwrap()
    }

    fn argmax(v: &ComplexVector) -> usize {
        let s = v.samples();
        (0..s.len())
            .max_by(|&a, &b| {
                s[a].norm()
                    .partial_cmp(&s[b].norm())
                    .unwrap()
                    .then(b.cmp(&a))
            })
            .unwrap()
    }

    fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> ComplexVector {
        ComplexVector::new(
            (0..n)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect(),
        )
        .unwrap()
    }

    fn max_diff(a: &ComplexVector, b: &ComplexVector) -> f64 {
        a.samples()
            .iter()
            .zip(b.samples())
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    fn tolerance(x: &ComplexVector, h: &ComplexVector) -> f64 {
        1e-9 * x.len() as f64 * x.max_abs() * h.max_abs()
    }

    #[test]
    fn autocorrelation_peak_is_code_energy() {
        let c = pnc();
        let r = circular_xcorr_fft(&c, &c).unwrap();
        assert!((r.samples()[0] - Complex64::new(121.0, 0.0)).norm() < 1e-9);
        assert_eq!(argmax(&r), 0);
        let d = circular_xcorr_direct(&c, &c).unwrap();
        assert_eq!(d.samples()[0], Complex64::new(121.0, 0.0));
    }

    #[test]
    fn shifted_code_peaks_at_shift() {
        let c = pnc();
        let r = circular_xcorr_fft(&c.circshift(5), &c).unwrap();
        assert_eq!(argmax(&r), 5);
    }

    #[test]
    fn zero_input_gives_zero_output() {
        let r = circular_xcorr_fft(&ComplexVector::zeros(128), &pnc()).unwrap();
        assert!(r.samples().iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn impulse_reference_returns_received() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_vector(&mut rng, 16);
        let mut delta = vec![Complex64::new(0.0, 0.0); 16];
        delta[0] = Complex64::new(1.0, 0.0);
        let r = circular_xcorr_direct(&x, &ComplexVector::new(delta).unwrap()).unwrap();
        assert_eq!(r, x);
    }

    #[test]
    fn four_point_hand_example() {
        // r[k] = x[0]·conj(h[-k mod 4]); h is nonzero only at 1, so k = 3.
        let x = ComplexVector::from_real(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let h = ComplexVector::from_real(&[0.0, 1.0, 0.0, 0.0]).unwrap();
        let direct = circular_xcorr_direct(&x, &h).unwrap();
        assert_eq!(argmax(&direct), 3);
        assert_eq!(direct.samples()[3], Complex64::new(1.0, 0.0));
        assert_eq!(argmax(&circular_xcorr_fft(&x, &h).unwrap()), 3);
    }

    #[test]
    fn direct_accepts_non_power_of_two() {
        let x = ComplexVector::from_real(&[1.0, 2.0, 3.0]).unwrap();
        assert!(circular_xcorr_direct(&x, &x).is_ok());
        assert!(matches!(
            circular_xcorr_fft(&x, &x),
            Err(Error::NotPowerOfTwo(3))
        ));
    }

    #[test]
    fn length_mismatch_rejected() {
        let a = ComplexVector::zeros(8);
        let b = ComplexVector::zeros(16);
        assert!(matches!(
            circular_xcorr_fft(&a, &b),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(
            circular_xcorr_direct(&a, &b),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn non_finite_samples_rejected() {
        let v = vec![Complex64::new(0.0, 0.0), Complex64::new(f64::NAN, 0.0)];
        assert!(matches!(ComplexVector::new(v), Err(Error::NonFinite(1))));
    }

    #[test]
    fn fft_matches_direct_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for n in [8, 64, 128] {
            for _ in 0..70 {
                let x = random_vector(&mut rng, n);
                let h = random_vector(&mut rng, n);
                let fft = circular_xcorr_fft(&x, &h).unwrap();
                let direct = circular_xcorr_direct(&x, &h).unwrap();
                assert!(max_diff(&fft, &direct) <= tolerance(&x, &h));
            }
        }
    }

    #[test]
    fn ascan_magnitudes() {
        let mut v = vec![Complex64::new(0.0, 0.0); 128];
        v[0] = Complex64::new(3.0, 4.0);
        let scan = to_ascan(ComplexVector::new(v).unwrap());
        assert_eq!(scan.n_bins(), 128);
        assert_eq!(scan.magnitudes()[0], 5.0);
        assert!(!scan.is_aligned());
        assert_eq!(scan.reference_bin(), None);
    }

    #[test]
    fn single_impulse_has_one_peak() {
        let mut m = vec![0.0; 64];
        m[37] = 2.0;
        let peaks = find_peaks(&AScan::from_magnitudes(m), 0.5).unwrap();
        assert_eq!(
            peaks,
            vec![Peak {
                bin: 37,
                magnitude: 2.0
            }]
        );
    }

    #[test]
    fn flat_scan_reports_every_bin() {
        let peaks = find_peaks(&AScan::from_magnitudes(vec![1.0; 32]), 1.0).unwrap();
        assert_eq!(peaks.len(), 32);
        assert!(peaks.windows(2).all(|w| w[0].bin < w[1].bin));
    }

    #[test]
    fn zero_scan_has_no_peaks() {
        assert!(find_peaks(&AScan::from_magnitudes(vec![0.0; 8]), 0.1)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn peaks_wrap_circularly() {
        let mut m = vec![0.0; 16];
        m[0] = 1.0;
        m[15] = 3.0;
        let peaks = find_peaks(&AScan::from_magnitudes(m), 0.1).unwrap();
        assert_eq!(peaks.iter().map(|p| p.bin).collect::<Vec<_>>(), vec![15]);
    }

    #[test]
    fn threshold_bounds_checked() {
        let scan = AScan::from_magnitudes(vec![1.0; 4]);
        assert!(find_peaks(&scan, 0.0).is_err());
        assert!(find_peaks(&scan, 1.5).is_err());
        assert!(find_peaks(&scan, f64::NAN).is_err());
    }

    fn vec_strategy(n: usize) -> impl Strategy<Value = ComplexVector> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n).prop_map(|v| {
            ComplexVector::new(
                v.into_iter()
                    .map(|(re, im)| Complex64::new(re, im))
                    .collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn shift_commutes_with_correlation(
            (x, h, d) in (vec_strategy(64), vec_strategy(64), 0usize..64)
        ) {
            let lhs = circular_xcorr_fft(&x.circshift(d), &h).unwrap();
            let rhs = circular_xcorr_fft(&x, &h).unwrap().circshift(d);
            prop_assert!(max_diff(&lhs, &rhs) <= tolerance(&x, &h));
        }

        #[test]
        fn correlation_is_linear(
            (x, y, h) in (vec_strategy(32), vec_strategy(32), vec_strategy(32)),
            a in -2.0f64..2.0,
            b in -2.0f64..2.0,
        ) {
            let mix = ComplexVector::new(
                x.samples().iter().zip(y.samples()).map(|(p, q)| p * a + q * b).collect(),
            ).unwrap();
            let lhs = circular_xcorr_fft(&mix, &h).unwrap();
            let rx = circular_xcorr_fft(&x, &h).unwrap();
            let ry = circular_xcorr_fft(&y, &h).unwrap();
            let rhs = ComplexVector::new(
                rx.samples().iter().zip(ry.samples()).map(|(p, q)| p * a + q * b).collect(),
            ).unwrap();
            let tol = 1e-9 * 32.0 * (a.abs() + b.abs() + 1.0) * 2.0 * h.max_abs();
            prop_assert!(max_diff(&lhs, &rhs) <= tol);
        }

        #[test]
        fn zero_lag_is_energy(h in vec_strategy(128)) {
            let r = circular_xcorr_fft(&h, &h).unwrap();
            let energy: f64 = h.samples().iter().map(|s| s.norm_sqr()).sum();
            prop_assert!((r.samples()[0] - Complex64::new(energy, 0.0)).norm() <= tolerance(&h, &h));
        }
    }
}
