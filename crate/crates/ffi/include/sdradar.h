#ifndef SDRADAR_H
#define SDRADAR_H

/* Generated by cbindgen from crates/ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SdrFormat {
  SDR_FORMAT_CSV = 0,
  SDR_FORMAT_JSON = 1,
} SdrFormat;

typedef enum SdrStatus {
  SDR_STATUS_OK = 0,
  SDR_STATUS_NULL_POINTER = 1,
  SDR_STATUS_PARSE = 2,
  SDR_STATUS_VALIDATION = 3,
  SDR_STATUS_RUNTIME = 4,
  SDR_STATUS_BUFFER_TOO_SMALL = 5,
  SDR_STATUS_INVALID_UTF8 = 6,
  SDR_STATUS_PANIC = 7,
} SdrStatus;

/**
 * Opaque Monte Carlo result handle.
 */
typedef struct SdrRun SdrRun;

/**
 * Opaque scenario handle.
 */
typedef struct SdrScenario SdrScenario;

/**
 * One Monte Carlo trial. Peak bins are fetched with [`sdr_run_peak_bins`].
 */
typedef struct SdrTrialRecord {
  size_t trial_index;
  size_t delay_drawn;
  size_t reference_detected;
  size_t n_peaks;
  bool success;
} SdrTrialRecord;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy the last error message on this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length excluding the NUL,
 * or 0 when there is no error.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t sdr_last_error(char *buf, size_t len);

/**
 * Write the 128 symbols of the reference code.
 *
 * # Safety
 * `out` must point to `capacity` writable `int8_t`; `out_len` may be null.
 */
enum SdrStatus sdr_pnc128(int8_t *out, size_t capacity, size_t *out_len);

/**
 * Write the Barker sequence of length `n`.
 *
 * # Safety
 * `out` must point to `capacity` writable `int8_t`; `out_len` may be null.
 */
enum SdrStatus sdr_barker(size_t n, int8_t *out, size_t capacity, size_t *out_len);

/**
 * Transform-domain circular cross-correlation of `n` complex samples
 * (`n` a power of two).
 *
 * # Safety
 * `received`, `reference` and `out` must each point to `2 * n` doubles.
 */
enum SdrStatus sdr_xcorr_fft(const double *received,
                             const double *reference,
                             size_t n,
                             double *out);

/**
 * Direct-summation circular cross-correlation; any `n >= 1`.
 *
 * # Safety
 * `received`, `reference` and `out` must each point to `2 * n` doubles.
 */
enum SdrStatus sdr_xcorr_direct(const double *received,
                                const double *reference,
                                size_t n,
                                double *out);

/**
 * Rotate `magnitudes` in place so its largest entry moves to index 0.
 * The pre-rotation index of that entry is written to `reference_bin`.
 *
 * # Safety
 * `magnitudes` must point to `n` doubles; `reference_bin` must be writable.
 */
enum SdrStatus sdr_align_magnitudes(double *magnitudes, size_t n, size_t *reference_bin);

/**
 * Correlate one receive window against the reference code, realign on the
 * direct path and report the aligned peak bins (bin 0 first).
 *
 * `scenario` may be null for the default radar (10 MSPS, 128 bins); the
 * threshold is relative to the direct-path peak.
 *
 * # Safety
 * `samples` must point to `2 * n` doubles, `bins` to `capacity` writable
 * `size_t`; `reference_bin` and `out_len` may be null.
 */
enum SdrStatus sdr_process_window(const struct SdrScenario *scenario,
                                  const double *samples,
                                  size_t n,
                                  double threshold,
                                  size_t *reference_bin,
                                  size_t *bins,
                                  size_t capacity,
                                  size_t *out_len);

/**
 * Magnitudes of the aligned correlation of one window, written to
 * `magnitudes` (`n` doubles).
 *
 * # Safety
 * `samples` must point to `2 * n` doubles and `magnitudes` to `n` doubles.
 */
enum SdrStatus sdr_aligned_ascan(const struct SdrScenario *scenario,
                                 const double *samples,
                                 size_t n,
                                 double *magnitudes);

/**
 * Round-trip bin of a one-way range.
 *
 * # Safety
 * `bin` must be writable; `scenario` may be null for the default radar.
 */
enum SdrStatus sdr_range_to_bin(const struct SdrScenario *scenario, double range_m, size_t *bin);

/**
 * Load a scenario from a file path, or the bundled `"fig5"` scenario.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be writable.
 */
enum SdrStatus sdr_scenario_load(const char *path, struct SdrScenario **out);

/**
 * Parse a scenario from TOML text.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum SdrStatus sdr_scenario_parse(const char *text, struct SdrScenario **out);

/**
 * # Safety
 * `scenario` must be null or a handle from `sdr_scenario_load`/`_parse`
 * that has not been freed.
 */
void sdr_scenario_free(struct SdrScenario *scenario);

/**
 * Override trial count and seed. Pass 0 trials to keep the file's value.
 *
 * # Safety
 * `scenario` must be a live scenario handle.
 */
enum SdrStatus sdr_scenario_configure(struct SdrScenario *scenario, size_t trials, uint64_t seed);

/**
 * # Safety
 * `scenario` must be a live scenario handle; `out` must be writable.
 */
enum SdrStatus sdr_run_monte_carlo(const struct SdrScenario *scenario, struct SdrRun **out);

/**
 * # Safety
 * `run` must be null or a live run handle.
 */
void sdr_run_free(struct SdrRun *run);

/**
 * Number of trials in a run; 0 for a null handle.
 *
 * # Safety
 * `run` must be null or a live run handle.
 */
size_t sdr_run_trials(const struct SdrRun *run);

/**
 * Fraction of trials recovering every target; NaN for a null handle.
 *
 * # Safety
 * `run` must be null or a live run handle.
 */
double sdr_run_success_rate(const struct SdrRun *run);

/**
 * # Safety
 * `run` must be a live run handle and `out` writable.
 */
enum SdrStatus sdr_run_record(const struct SdrRun *run, size_t index, struct SdrTrialRecord *out);

/**
 * # Safety
 * `run` must be a live run handle; `bins` must point to `capacity`
 * writable `size_t`; `out_len` may be null.
 */
enum SdrStatus sdr_run_peak_bins(const struct SdrRun *run,
                                 size_t index,
                                 size_t *bins,
                                 size_t capacity,
                                 size_t *out_len);

/**
 * Hex SHA-256 reproducibility hash, NUL-terminated (65 bytes).
 *
 * # Safety
 * `run` must be a live run handle; `buf` must point to `len` bytes.
 */
enum SdrStatus sdr_run_hash(const struct SdrRun *run, char *buf, size_t len);

/**
 * Write per-trial records as CSV or JSON.
 *
 * # Safety
 * `run` must be a live run handle; `path` a NUL-terminated string.
 */
enum SdrStatus sdr_run_export(const struct SdrRun *run, const char *path, enum SdrFormat format);

/**
 * Write aligned A-scan magnitudes, one row per trial, as CSV.
 *
 * # Safety
 * `run` must be a live run handle; `path` a NUL-terminated string.
 */
enum SdrStatus sdr_run_export_ascans(const struct SdrRun *run, const char *path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SDRADAR_H */
