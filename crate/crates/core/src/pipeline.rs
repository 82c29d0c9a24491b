//! Correlate → detect reference → realign → report, for one receive window.

use crate::alignment::{detect_reference, realign, report_ranges, RangeReport};
use crate::channel::RadarParams;
use crate::codes::{build_pnc128, repeat_symbols, PaddedCode};
use crate::correlator::{circular_xcorr_fft, to_ascan, AScan, ComplexVector};
use crate::error::{Error, Result};

/// The transmitted code at the sample rate implied by `params`.
pub fn reference_code(params: &RadarParams) -> Result<PaddedCode> {
    let code = repeat_symbols(&build_pnc128(), params.samples_per_symbol)?;
    if code.len() != params.n_bins {
        return Err(Error::validation(
            "radar.n_bins",
            format!(
                "{} does not match the code length {} at {} samples per symbol",
                params.n_bins,
                code.len(),
                params.samples_per_symbol
            ),
        ));
    }
    Ok(code)
}

#[derive(Debug, Clone)]
pub struct WindowResult {
    pub reference_bin: usize,
    pub aligned: AScan,
    pub report: RangeReport,
}

pub fn process_window(
    received: &ComplexVector,
    reference: &ComplexVector,
    params: &RadarParams,
    threshold: f64,
) -> Result<WindowResult> {
    let scan = to_ascan(circular_xcorr_fft(received, reference)?);
    let reference_bin = detect_reference(&scan)?;
    let aligned = realign(&scan, reference_bin)?;
    let report = report_ranges(&aligned, threshold, params)?;
    Ok(WindowResult {
        reference_bin,
        aligned,
        report,
    })
}
