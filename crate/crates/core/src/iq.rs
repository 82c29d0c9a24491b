//! Raw IQ captures: interleaved little-endian `f32` pairs, in-phase first.

use std::io::Write;
use std::path::Path;

use num_complex::{Complex32, Complex64};

use crate::channel::RadarParams;
use crate::correlator::ComplexVector;
use crate::error::{Error, Result};

/// Bytes per complex sample.
pub const SAMPLE_BYTES: usize = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct IqCapture {
    /// Consecutive windows of `n_bins` samples.
    pub windows: Vec<ComplexVector>,
    /// Samples past the last full window.
    pub dropped_samples: usize,
}

pub fn decode_iq(bytes: &[u8], origin: &Path) -> Result<Vec<Complex32>> {
    let err = |message: String| Error::IqFormat {
        path: origin.to_path_buf(),
        message,
    };
    if !bytes.len().is_multiple_of(SAMPLE_BYTES) {
        let whole = bytes.len() - bytes.len() % SAMPLE_BYTES;
        return Err(err(format!(
            "size {} is not a multiple of {SAMPLE_BYTES} bytes; {} stray bytes at offsets {whole}..{}",
            bytes.len(),
            bytes.len() - whole,
            bytes.len()
        )));
    }
    bytes
        .chunks_exact(SAMPLE_BYTES)
        .enumerate()
        .map(|(i, rec)| {
            let re = f32::from_le_bytes([rec[0], rec[1], rec[2], rec[3]]);
            let im = f32::from_le_bytes([rec[4], rec[5], rec[6], rec[7]]);
            if re.is_finite() && im.is_finite() {
                Ok(Complex32::new(re, im))
            } else {
                Err(err(format!(
                    "non-finite sample {i} at byte offset {}",
                    i * SAMPLE_BYTES
                )))
            }
        })
        .collect()
}

pub fn encode_iq(samples: &[Complex32]) -> Vec<u8> {
    let mut out = Vec::with_capacity(samples.len() * SAMPLE_BYTES);
    for s in samples {
        out.extend_from_slice(&s.re.to_le_bytes());
        out.extend_from_slice(&s.im.to_le_bytes());
    }
    out
}

pub fn read_iq(path: &Path) -> Result<Vec<Complex32>> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_iq(&bytes, path)
}

pub fn write_iq(path: &Path, samples: &[Complex32]) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(&encode_iq(samples))
        .map_err(|e| Error::io(path, e))
}

/// Narrow to the on-disk sample type.
pub fn to_iq32(samples: &[Complex64]) -> Vec<Complex32> {
    samples
        .iter()
        .map(|s| Complex32::new(s.re as f32, s.im as f32))
        .collect()
}

/// Split a sample stream into windows of `n_bins`.
pub fn segment(samples: &[Complex32], n_bins: usize, origin: &Path) -> Result<IqCapture> {
    if samples.len() < n_bins {
        return Err(Error::IqFormat {
            path: origin.to_path_buf(),
            message: format!(
                "short file: {} samples ({} bytes), need at least {n_bins} ({} bytes)",
                samples.len(),
                samples.len() * SAMPLE_BYTES,
                n_bins * SAMPLE_BYTES
            ),
        });
    }
    let windows = samples
        .chunks_exact(n_bins)
        .map(|w| {
            ComplexVector::new(
                w.iter()
                    .map(|s| Complex64::new(f64::from(s.re), f64::from(s.im)))
                    .collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IqCapture {
        windows,
        dropped_samples: samples.len() % n_bins,
    })
}

pub fn ingest_iq(path: &Path, params: &RadarParams) -> Result<IqCapture> {
    let samples = read_iq(path)?;
    segment(&samples, params.n_bins, path)
}
