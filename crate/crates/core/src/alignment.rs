//! Direct-path referencing.
//!
//! The strongest correlation peak is the direct antenna-to-antenna return,
//! which carries the unknown transport delay but no target delay. Rotating
//! the A-scan so that peak lands in bin 0 removes the transport delay from
//! every echo at once, leaving each target at its true round-trip bin.

use serde::{Deserialize, Serialize};

use crate::channel::{bin_to_range, RadarParams};
use crate::correlator::{find_peaks, AScan};
use crate::error::{Error, Result};

/// Bin of the largest magnitude; ties go to the lowest bin.
pub fn detect_reference(scan: &AScan) -> Result<usize> {
    let m = scan.magnitudes();
    let mut best = 0;
    for (k, &v) in m.iter().enumerate().skip(1) {
        if v > m[best] {
            best = k;
        }
    }
    if m.is_empty() || m[best] <= 0.0 {
        return Err(Error::NoReference);
    }
    Ok(best)
}

/// Rotate the scan so `reference_bin` becomes bin 0:
/// `out[k] = in[(k + reference_bin) mod N]`.
///
/// Pure permutation of both the complex and magnitude arrays.
pub fn realign(scan: &AScan, reference_bin: usize) -> Result<AScan> {
    if scan.is_aligned() {
        return Err(Error::AlreadyAligned);
    }
    let n = scan.n_bins();
    if reference_bin >= n {
        return Err(Error::BinOutOfRange {
            bin: reference_bin,
            n_bins: n,
        });
    }
    let mut correlation = scan.correlation().to_vec();
    let mut magnitudes = scan.magnitudes().to_vec();
    correlation.rotate_left(reference_bin);
    magnitudes.rotate_left(reference_bin);
    Ok(AScan::from_parts(
        correlation,
        magnitudes,
        true,
        Some(reference_bin),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RangeEntry {
    pub bin: usize,
    pub range_m: f64,
    pub magnitude: f64,
}

/// Echoes found in an aligned scan. Bin 0 is always the direct-path
/// reference.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeReport {
    pub entries: Vec<RangeEntry>,
    pub reference_bin_pre_alignment: usize,
    pub params: RadarParams,
}

impl RangeReport {
    pub fn bins(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.bin).collect()
    }

    /// Entries other than the direct-path reference.
    pub fn echoes(&self) -> impl Iterator<Item = &RangeEntry> {
        self.entries.iter().filter(|e| e.bin != 0)
    }
}

pub fn report_ranges(
    scan: &AScan,
    relative_threshold: f64,
    params: &RadarParams,
) -> Result<RangeReport> {
    if !scan.is_aligned() {
        return Err(Error::NotAligned);
    }
    if scan.n_bins() != params.n_bins {
        return Err(Error::validation(
            "scan",
            format!(
                "has {} bins but radar expects {}",
                scan.n_bins(),
                params.n_bins
            ),
        ));
    }
    let mut peaks = find_peaks(scan, relative_threshold)?;
    if peaks.first().is_none_or(|p| p.bin != 0) {
        peaks.insert(
            0,
            crate::correlator::Peak {
                bin: 0,
                magnitude: scan.magnitudes()[0],
            },
        );
    }
    let entries = peaks
        .into_iter()
        .map(|p| {
            Ok(RangeEntry {
                bin: p.bin,
                range_m: bin_to_range(p.bin, params)?,
                magnitude: p.magnitude,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RangeReport {
        entries,
        reference_bin_pre_alignment: scan.reference_bin().unwrap_or(0),
        params: *params,
    })
}
