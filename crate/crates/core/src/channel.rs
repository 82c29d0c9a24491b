//! Baseband model of the single-receiver radar channel.
//!
//! Every sweep sees an unknown transport delay on the transmit side. The
//! receiver gets the code back along the direct antenna-to-antenna path plus
//! one attenuated copy per target, each further delayed by its round-trip
//! time. Because the code is sent back to back, any delay shows up as a
//! circular shift of the 128-sample receive window.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::codes::PaddedCode;
use crate::correlator::ComplexVector;
use crate::error::{Error, Result};

/// Per-trial random stream.
pub type TrialRng = ChaCha8Rng;

/// Independent stream for trial `trial` under `seed`.
///
/// ChaCha's 64-bit stream id carries the trial index, so streams for
/// different trials never overlap and can be generated in any order.
pub fn trial_rng(seed: u64, trial: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn default_wave_speed() -> f64 {
    3e8
}
fn default_n_bins() -> usize {
    128
}
fn default_samples_per_symbol() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadarParams {
    /// Samples per second.
    pub sample_rate: f64,
    /// Propagation speed in m/s.
    #[serde(default = "default_wave_speed")]
    pub wave_speed: f64,
    /// Correlation window length in samples.
    #[serde(default = "default_n_bins")]
    pub n_bins: usize,
    #[serde(default = "default_samples_per_symbol")]
    pub samples_per_symbol: usize,
}

impl Default for RadarParams {
    /// 10 MSPS, c = 3e8 m/s, 128 bins, one sample per symbol.
    fn default() -> Self {
        Self {
            sample_rate: 10e6,
            wave_speed: default_wave_speed(),
            n_bins: default_n_bins(),
            samples_per_symbol: default_samples_per_symbol(),
        }
    }
}

impl RadarParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.sample_rate.is_finite() && self.sample_rate > 0.0) {
            return Err(Error::validation(
                "radar.sample_rate",
                "must be a positive finite number",
            ));
        }
        if !(self.wave_speed.is_finite() && self.wave_speed > 0.0) {
            return Err(Error::validation(
                "radar.wave_speed",
                "must be a positive finite number",
            ));
        }
        if self.n_bins == 0 || !self.n_bins.is_power_of_two() {
            return Err(Error::validation(
                "radar.n_bins",
                format!("{} is not a power of two", self.n_bins),
            ));
        }
        if self.samples_per_symbol == 0 {
            return Err(Error::validation(
                "radar.samples_per_symbol",
                "must be at least 1",
            ));
        }
        Ok(())
    }

    /// Round-trip range spanned by one bin, `c / (2 fs)`.
    pub fn bin_resolution_m(&self) -> f64 {
        self.wave_speed / (2.0 * self.sample_rate)
    }

    pub fn max_unambiguous_range_m(&self) -> f64 {
        self.n_bins as f64 * self.bin_resolution_m()
    }
}

/// Result of quantizing a range onto the bin grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeBin {
    pub bin: usize,
    /// Exact bin position minus `bin`, in bins.
    pub residual: f64,
}

pub fn range_to_bin(range_m: f64, params: &RadarParams) -> Result<RangeBin> {
    if !(range_m.is_finite() && range_m >= 0.0) {
        return Err(Error::validation(
            "range_m",
            format!("{range_m} must be non-negative"),
        ));
    }
    let exact = 2.0 * range_m * params.sample_rate / params.wave_speed;
    let rounded = exact.round();
    if rounded >= params.n_bins as f64 {
        return Err(Error::RangeOutOfBounds {
            range_m,
            bin: rounded as usize,
            max_range_m: params.max_unambiguous_range_m(),
        });
    }
    Ok(RangeBin {
        bin: rounded as usize,
        residual: exact - rounded,
    })
}

pub fn bin_to_range(bin: usize, params: &RadarParams) -> Result<f64> {
    if bin >= params.n_bins {
        return Err(Error::BinOutOfRange {
            bin,
            n_bins: params.n_bins,
        });
    }
    Ok(bin as f64 * params.wave_speed / (2.0 * params.sample_rate))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Target {
    /// One-way range in meters.
    pub range_m: f64,
    pub amplitude: f64,
}

/// Transport delay per sweep, in bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayModel {
    Fixed(usize),
    UniformOverBins,
}

fn default_direct_amplitude() -> f64 {
    1.0
}
fn default_smoothing_window() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    #[serde(default = "default_direct_amplitude")]
    pub direct_amplitude: f64,
    #[serde(default)]
    pub targets: Vec<Target>,
    pub delay: DelayModel,
    /// Standard deviation of each of the I and Q noise components.
    #[serde(default)]
    pub noise_sigma: f64,
    /// Circular moving-average width; 1 disables smoothing.
    #[serde(default = "default_smoothing_window")]
    pub smoothing_window: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for ChannelConfig {
    /// Direct path 1.0, targets at 240 m / 0.6 and 480 m / 0.4, uniform delay.
    fn default() -> Self {
        Self {
            direct_amplitude: 1.0,
            targets: vec![
                Target {
                    range_m: 240.0,
                    amplitude: 0.6,
                },
                Target {
                    range_m: 480.0,
                    amplitude: 0.4,
                },
            ],
            delay: DelayModel::UniformOverBins,
            noise_sigma: 0.0,
            smoothing_window: 1,
            seed: 0,
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self, params: &RadarParams) -> Result<()> {
        if !(self.direct_amplitude.is_finite() && self.direct_amplitude > 0.0) {
            return Err(Error::validation(
                "channel.direct_amplitude",
                "must be positive",
            ));
        }
        for (i, t) in self.targets.iter().enumerate() {
            if !(t.amplitude > 0.0 && t.amplitude <= 1.0) {
                return Err(Error::validation(
                    format!("channel.targets[{i}].amplitude"),
                    format!("{} is outside (0, 1]", t.amplitude),
                ));
            }
            if t.amplitude >= self.direct_amplitude {
                return Err(Error::validation(
                    format!("channel.targets[{i}].amplitude"),
                    format!(
                        "{} must be below the direct-path amplitude {}; the direct return has to be the strongest peak",
                        t.amplitude, self.direct_amplitude
                    ),
                ));
            }
            range_to_bin(t.range_m, params).map_err(|e| {
                Error::validation(format!("channel.targets[{i}].range_m"), e.to_string())
            })?;
        }
        if let DelayModel::Fixed(d) = self.delay {
            if d >= params.n_bins {
                return Err(Error::validation(
                    "channel.delay.fixed",
                    format!("{d} is outside [0, {})", params.n_bins),
                ));
            }
        }
        if !(self.noise_sigma.is_finite() && self.noise_sigma >= 0.0) {
            return Err(Error::validation(
                "channel.noise_sigma",
                "must be non-negative",
            ));
        }
        if self.smoothing_window == 0 || self.smoothing_window > params.n_bins {
            return Err(Error::validation(
                "channel.smoothing_window",
                format!("must be in [1, {}]", params.n_bins),
            ));
        }
        Ok(())
    }

    /// Round-trip bin of every target, in declaration order.
    pub fn target_bins(&self, params: &RadarParams) -> Result<Vec<usize>> {
        self.targets
            .iter()
            .map(|t| range_to_bin(t.range_m, params).map(|rb| rb.bin))
            .collect()
    }
}

/// Transport delay for one trial.
pub fn draw_delay(config: &ChannelConfig, params: &RadarParams, rng: &mut TrialRng) -> usize {
    match config.delay {
        DelayModel::Fixed(d) => d,
        DelayModel::UniformOverBins => rng.gen_range(0..params.n_bins),
    }
}

fn circular_moving_average(x: &[Complex64], width: usize) -> Vec<Complex64> {
    let n = x.len();
    let scale = 1.0 / width as f64;
    (0..n)
        .map(|i| {
            (0..width)
                .map(|j| x[(i + n - j) % n])
                .fold(Complex64::new(0.0, 0.0), |acc, v| acc + v)
                * scale
        })
        .collect()
}

/// One receive window.
///
/// The delay-free echo profile (direct path plus targets, optionally
/// smoothed) is rotated by `delay`, then complex Gaussian noise is added.
/// Noise is drawn only when `noise_sigma > 0`.
pub fn simulate_received(
    code: &PaddedCode,
    delay: usize,
    config: &ChannelConfig,
    params: &RadarParams,
    rng: &mut TrialRng,
) -> Result<ComplexVector> {
    let n = params.n_bins;
    if code.len() != n {
        return Err(Error::LengthMismatch {
            received: n,
            reference: code.len(),
        });
    }
    if delay >= n {
        return Err(Error::BinOutOfRange {
            bin: delay,
            n_bins: n,
        });
    }
    let target_bins = config.target_bins(params)?;

    let c = code.symbols();
    let mut profile: Vec<Complex64> = (0..n)
        .map(|i| {
            let mut v = config.direct_amplitude * f64::from(c[i]);
            for (t, &b) in config.targets.iter().zip(&target_bins) {
                v += t.amplitude * f64::from(c[(i + n - b) % n]);
            }
            Complex64::new(v, 0.0)
        })
        .collect();

    if config.smoothing_window > 1 {
        profile = circular_moving_average(&profile, config.smoothing_window);
    }
    profile.rotate_right(delay);

    if config.noise_sigma > 0.0 {
        let normal = Normal::new(0.0, config.noise_sigma)
            .map_err(|e| Error::validation("channel.noise_sigma", e.to_string()))?;
        for s in &mut profile {
            s.re += normal.sample(rng);
            s.im += normal.sample(rng);
        }
    }
    ComplexVector::new(profile)
}
