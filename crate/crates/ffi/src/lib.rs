//! C ABI over `sdradar`.
//!
//! Scenarios and Monte Carlo runs are exposed as opaque handles that the
//! caller frees with the matching `*_free` function. Every fallible call
//! returns an [`SdrStatus`]; the message for the most recent failure on the
//! calling thread is available from [`sdr_last_error`]. Complex buffers are
//! interleaved `double` pairs, in-phase first.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use num_complex::Complex64;
use sdradar::alignment::{detect_reference, realign};
use sdradar::channel::{range_to_bin, RadarParams};
use sdradar::codes::{barker, build_pnc128};
use sdradar::correlator::{circular_xcorr_direct, circular_xcorr_fft, to_ascan, ComplexVector};
use sdradar::export::{export_magnitudes, export_results, Format};
use sdradar::pipeline::{process_window, reference_code};
use sdradar::scenario::{resolve_scenario, Scenario};
use sdradar::simulation::{run_monte_carlo, RunOutput};
use sdradar::{Error, ErrorCategory};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdrStatus {
    Ok = 0,
    NullPointer = 1,
    Parse = 2,
    Validation = 3,
    Runtime = 4,
    BufferTooSmall = 5,
    InvalidUtf8 = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdrFormat {
    Csv = 0,
    Json = 1,
}

/// One Monte Carlo trial. Peak bins are fetched with [`sdr_run_peak_bins`].
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SdrTrialRecord {
    pub trial_index: usize,
    pub delay_drawn: usize,
    pub reference_detected: usize,
    pub n_peaks: usize,
    pub success: bool,
}

/// Opaque scenario handle.
pub struct SdrScenario(Scenario);

/// Opaque Monte Carlo result handle.
pub struct SdrRun(RunOutput);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: SdrStatus, msg: impl Into<String>) -> SdrStatus {
    set_last_error(msg);
    status
}

fn from_error(e: Error) -> SdrStatus {
    let status = match e.category() {
        ErrorCategory::Parse => SdrStatus::Parse,
        ErrorCategory::Validation => SdrStatus::Validation,
        ErrorCategory::Runtime => SdrStatus::Runtime,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> SdrStatus) -> SdrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(SdrStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, SdrStatus> {
    if p.is_null() {
        return Err(fail(SdrStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(SdrStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn complex_arg(p: *const f64, n: usize) -> Result<ComplexVector, SdrStatus> {
    if p.is_null() {
        return Err(fail(SdrStatus::NullPointer, "null sample buffer"));
    }
    let raw = std::slice::from_raw_parts(p, 2 * n);
    let samples = raw
        .chunks_exact(2)
        .map(|c| Complex64::new(c[0], c[1]))
        .collect();
    ComplexVector::new(samples).map_err(from_error)
}

unsafe fn write_out<T: Copy>(
    src: &[T],
    out: *mut T,
    capacity: usize,
    out_len: *mut usize,
) -> SdrStatus {
    if !out_len.is_null() {
        *out_len = src.len();
    }
    if src.len() > capacity {
        return fail(
            SdrStatus::BufferTooSmall,
            format!("need {} elements, buffer holds {capacity}", src.len()),
        );
    }
    if src.is_empty() {
        return SdrStatus::Ok;
    }
    if out.is_null() {
        return fail(SdrStatus::NullPointer, "null output buffer");
    }
    ptr::copy_nonoverlapping(src.as_ptr(), out, src.len());
    SdrStatus::Ok
}

unsafe fn params_of(
    scenario: *const SdrScenario,
    fallback: &RadarParams,
) -> &RadarParams {
    if scenario.is_null() {
        fallback
    } else {
        &(*scenario).0.radar
    }
}

/// Copy the last error message on this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length excluding the NUL,
/// or 0 when there is no error.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sdr_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Write the 128 symbols of the reference code.
///
/// # Safety
/// `out` must point to `capacity` writable `int8_t`; `out_len` may be null.
#[no_mangle]
pub unsafe extern "C" fn sdr_pnc128(
    out: *mut i8,
    capacity: usize,
    out_len: *mut usize,
) -> SdrStatus {
    guard(|| write_out(build_pnc128().symbols(), out, capacity, out_len))
}

/// Write the Barker sequence of length `n`.
///
/// # Safety
/// `out` must point to `capacity` writable `int8_t`; `out_len` may be null.
#[no_mangle]
pub unsafe extern "C" fn sdr_barker(
    n: usize,
    out: *mut i8,
    capacity: usize,
    out_len: *mut usize,
) -> SdrStatus {
    guard(|| match barker(n) {
        Ok(seq) => write_out(seq.symbols(), out, capacity, out_len),
        Err(e) => from_error(e),
    })
}

unsafe fn xcorr(
    received: *const f64,
    reference: *const f64,
    n: usize,
    out: *mut f64,
    f: fn(&ComplexVector, &ComplexVector) -> sdradar::Result<ComplexVector>,
) -> SdrStatus {
    guard(|| {
        let x = match complex_arg(received, n) {
            Ok(v) => v,
            Err(s) => return s,
        };
        let h = match complex_arg(reference, n) {
            Ok(v) => v,
            Err(s) => return s,
        };
        if out.is_null() {
            return fail(SdrStatus::NullPointer, "null output buffer");
        }
        match f(&x, &h) {
            Ok(r) => {
                let flat: Vec<f64> = r.samples().iter().flat_map(|c| [c.re, c.im]).collect();
                ptr::copy_nonoverlapping(flat.as_ptr(), out, flat.len());
                SdrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Transform-domain circular cross-correlation of `n` complex samples
/// (`n` a power of two).
///
/// # Safety
/// `received`, `reference` and `out` must each point to `2 * n` doubles.
#[no_mangle]
pub unsafe extern "C" fn sdr_xcorr_fft(
    received: *const f64,
    reference: *const f64,
    n: usize,
    out: *mut f64,
) -> SdrStatus {
    xcorr(received, reference, n, out, circular_xcorr_fft)
}

/// Direct-summation circular cross-correlation; any `n >= 1`.
///
/// # Safety
/// `received`, `reference` and `out` must each point to `2 * n` doubles.
#[no_mangle]
pub unsafe extern "C" fn sdr_xcorr_direct(
    received: *const f64,
    reference: *const f64,
    n: usize,
    out: *mut f64,
) -> SdrStatus {
    xcorr(received, reference, n, out, circular_xcorr_direct)
}

/// Rotate `magnitudes` in place so its largest entry moves to index 0.
/// The pre-rotation index of that entry is written to `reference_bin`.
///
/// # Safety
/// `magnitudes` must point to `n` doubles; `reference_bin` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sdr_align_magnitudes(
    magnitudes: *mut f64,
    n: usize,
    reference_bin: *mut usize,
) -> SdrStatus {
    guard(|| {
        if magnitudes.is_null() || reference_bin.is_null() {
            return fail(SdrStatus::NullPointer, "null argument");
        }
        let m = std::slice::from_raw_parts_mut(magnitudes, n);
        let scan = sdradar::correlator::AScan::from_magnitudes(m.to_vec());
        let r = match detect_reference(&scan) {
            Ok(r) => r,
            Err(e) => return from_error(e),
        };
        match realign(&scan, r) {
            Ok(a) => {
                m.copy_from_slice(a.magnitudes());
                *reference_bin = r;
                SdrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Correlate one receive window against the reference code, realign on the
/// direct path and report the aligned peak bins (bin 0 first).
///
/// `scenario` may be null for the default radar (10 MSPS, 128 bins); the
/// threshold is relative to the direct-path peak.
///
/// # Safety
/// `samples` must point to `2 * n` doubles, `bins` to `capacity` writable
/// `size_t`; `reference_bin` and `out_len` may be null.
#[no_mangle]
pub unsafe extern "C" fn sdr_process_window(
    scenario: *const SdrScenario,
    samples: *const f64,
    n: usize,
    threshold: f64,
    reference_bin: *mut usize,
    bins: *mut usize,
    capacity: usize,
    out_len: *mut usize,
) -> SdrStatus {
    guard(|| {
        let default = RadarParams::default();
        let params = params_of(scenario, &default);
        if n != params.n_bins {
            return fail(
                SdrStatus::Validation,
                format!("window has {n} samples, radar expects {}", params.n_bins),
            );
        }
        let received = match complex_arg(samples, n) {
            Ok(v) => v,
            Err(s) => return s,
        };
        let result = reference_code(params)
            .and_then(|c| ComplexVector::new(c.to_complex()))
            .and_then(|reference| process_window(&received, &reference, params, threshold));
        match result {
            Ok(w) => {
                if !reference_bin.is_null() {
                    *reference_bin = w.reference_bin;
                }
                write_out(&w.report.bins(), bins, capacity, out_len)
            }
            Err(e) => from_error(e),
        }
    })
}

/// Magnitudes of the aligned correlation of one window, written to
/// `magnitudes` (`n` doubles).
///
/// # Safety
/// `samples` must point to `2 * n` doubles and `magnitudes` to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn sdr_aligned_ascan(
    scenario: *const SdrScenario,
    samples: *const f64,
    n: usize,
    magnitudes: *mut f64,
) -> SdrStatus {
    guard(|| {
        let default = RadarParams::default();
        let params = params_of(scenario, &default);
        if magnitudes.is_null() {
            return fail(SdrStatus::NullPointer, "null output buffer");
        }
        let received = match complex_arg(samples, n) {
            Ok(v) => v,
            Err(s) => return s,
        };
        let result = reference_code(params)
            .and_then(|c| ComplexVector::new(c.to_complex()))
            .and_then(|reference| circular_xcorr_fft(&received, &reference))
            .map(to_ascan)
            .and_then(|scan| realign(&scan, detect_reference(&scan)?));
        match result {
            Ok(a) => {
                ptr::copy_nonoverlapping(a.magnitudes().as_ptr(), magnitudes, n);
                SdrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Round-trip bin of a one-way range.
///
/// # Safety
/// `bin` must be writable; `scenario` may be null for the default radar.
#[no_mangle]
pub unsafe extern "C" fn sdr_range_to_bin(
    scenario: *const SdrScenario,
    range_m: f64,
    bin: *mut usize,
) -> SdrStatus {
    guard(|| {
        if bin.is_null() {
            return fail(SdrStatus::NullPointer, "null output");
        }
        let default = RadarParams::default();
        match range_to_bin(range_m, params_of(scenario, &default)) {
            Ok(rb) => {
                *bin = rb.bin;
                SdrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Load a scenario from a file path, or the bundled `"fig5"` scenario.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sdr_scenario_load(
    path: *const c_char,
    out: *mut *mut SdrScenario,
) -> SdrStatus {
    guard(|| {
        if out.is_null() {
            return fail(SdrStatus::NullPointer, "null output handle");
        }
        let spec = match str_arg(path) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match resolve_scenario(spec) {
            Ok(sc) => {
                *out = Box::into_raw(Box::new(SdrScenario(sc)));
                SdrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Parse a scenario from TOML text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sdr_scenario_parse(
    text: *const c_char,
    out: *mut *mut SdrScenario,
) -> SdrStatus {
    guard(|| {
        if out.is_null() {
            return fail(SdrStatus::NullPointer, "null output handle");
        }
        let text = match str_arg(text) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match Scenario::from_toml_str(text, Path::new("<string>")) {
            Ok(sc) => {
                *out = Box::into_raw(Box::new(SdrScenario(sc)));
                SdrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `scenario` must be null or a handle from `sdr_scenario_load`/`_parse`
/// that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn sdr_scenario_free(scenario: *mut SdrScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Override trial count and seed. Pass 0 trials to keep the file's value.
///
/// # Safety
/// `scenario` must be a live scenario handle.
#[no_mangle]
pub unsafe extern "C" fn sdr_scenario_configure(
    scenario: *mut SdrScenario,
    trials: usize,
    seed: u64,
) -> SdrStatus {
    guard(|| {
        if scenario.is_null() {
            return fail(SdrStatus::NullPointer, "null scenario");
        }
        let sc = &mut (*scenario).0;
        if trials > 0 {
            sc.trials = trials;
        }
        sc.channel.seed = seed;
        SdrStatus::Ok
    })
}

/// # Safety
/// `scenario` must be a live scenario handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sdr_run_monte_carlo(
    scenario: *const SdrScenario,
    out: *mut *mut SdrRun,
) -> SdrStatus {
    guard(|| {
        if scenario.is_null() || out.is_null() {
            return fail(SdrStatus::NullPointer, "null argument");
        }
        match run_monte_carlo(&(*scenario).0) {
            Ok(run) => {
                *out = Box::into_raw(Box::new(SdrRun(run)));
                SdrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `run` must be null or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn sdr_run_free(run: *mut SdrRun) {
    if !run.is_null() {
        drop(Box::from_raw(run));
    }
}

/// Number of trials in a run; 0 for a null handle.
///
/// # Safety
/// `run` must be null or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn sdr_run_trials(run: *const SdrRun) -> usize {
    if run.is_null() {
        0
    } else {
        (*run).0.records.len()
    }
}

/// Fraction of trials recovering every target; NaN for a null handle.
///
/// # Safety
/// `run` must be null or a live run handle.
#[no_mangle]
pub unsafe extern "C" fn sdr_run_success_rate(run: *const SdrRun) -> f64 {
    if run.is_null() {
        f64::NAN
    } else {
        (*run).0.summary.success_rate
    }
}

/// # Safety
/// `run` must be a live run handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sdr_run_record(
    run: *const SdrRun,
    index: usize,
    out: *mut SdrTrialRecord,
) -> SdrStatus {
    guard(|| {
        if run.is_null() || out.is_null() {
            return fail(SdrStatus::NullPointer, "null argument");
        }
        let Some(r) = (&*run).0.records.get(index) else {
            return fail(SdrStatus::Validation, format!("trial {index} out of range"));
        };
        *out = SdrTrialRecord {
            trial_index: r.trial_index,
            delay_drawn: r.delay_drawn,
            reference_detected: r.reference_detected,
            n_peaks: r.aligned_peak_bins.len(),
            success: r.success,
        };
        SdrStatus::Ok
    })
}

/// # Safety
/// `run` must be a live run handle; `bins` must point to `capacity`
/// writable `size_t`; `out_len` may be null.
#[no_mangle]
pub unsafe extern "C" fn sdr_run_peak_bins(
    run: *const SdrRun,
    index: usize,
    bins: *mut usize,
    capacity: usize,
    out_len: *mut usize,
) -> SdrStatus {
    guard(|| {
        if run.is_null() {
            return fail(SdrStatus::NullPointer, "null run");
        }
        let Some(r) = (&*run).0.records.get(index) else {
            return fail(SdrStatus::Validation, format!("trial {index} out of range"));
        };
        write_out(&r.aligned_peak_bins, bins, capacity, out_len)
    })
}

/// Hex SHA-256 reproducibility hash, NUL-terminated (65 bytes).
///
/// # Safety
/// `run` must be a live run handle; `buf` must point to `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn sdr_run_hash(
    run: *const SdrRun,
    buf: *mut c_char,
    len: usize,
) -> SdrStatus {
    guard(|| {
        if run.is_null() || buf.is_null() {
            return fail(SdrStatus::NullPointer, "null argument");
        }
        let hash = (*run).0.summary.reproducibility_hash.as_bytes();
        if len < hash.len() + 1 {
            return fail(
                SdrStatus::BufferTooSmall,
                format!("need {} bytes", hash.len() + 1),
            );
        }
        ptr::copy_nonoverlapping(hash.as_ptr().cast::<c_char>(), buf, hash.len());
        *buf.add(hash.len()) = 0;
        SdrStatus::Ok
    })
}

/// Write per-trial records as CSV or JSON.
///
/// # Safety
/// `run` must be a live run handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sdr_run_export(
    run: *const SdrRun,
    path: *const c_char,
    format: SdrFormat,
) -> SdrStatus {
    guard(|| {
        if run.is_null() {
            return fail(SdrStatus::NullPointer, "null run");
        }
        let path = match str_arg(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        let fmt = match format {
            SdrFormat::Csv => Format::Csv,
            SdrFormat::Json => Format::Json,
        };
        let run = &(*run).0;
        match export_results(&run.records, &run.summary, fmt, Path::new(path)) {
            Ok(()) => SdrStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}

/// Write aligned A-scan magnitudes, one row per trial, as CSV.
///
/// # Safety
/// `run` must be a live run handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sdr_run_export_ascans(
    run: *const SdrRun,
    path: *const c_char,
) -> SdrStatus {
    guard(|| {
        if run.is_null() {
            return fail(SdrStatus::NullPointer, "null run");
        }
        let path = match str_arg(path) {
            Ok(p) => p,
            Err(s) => return s,
        };
        match export_magnitudes(&(*run).0.aligned_magnitudes, Path::new(path)) {
            Ok(()) => SdrStatus::Ok,
            Err(e) => from_error(e),
        }
    })
}
