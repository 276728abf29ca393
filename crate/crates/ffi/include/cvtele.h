/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef CVTELE_H
#define CVTELE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CvtStatus {
  CVT_STATUS_OK = 0,
  CVT_STATUS_NULL_POINTER = 1,
  CVT_STATUS_INVALID_UTF8 = 2,
  CVT_STATUS_PARSE = 3,
  CVT_STATUS_CIRCUIT = 4,
  CVT_STATUS_UNKNOWN_MODE = 5,
  CVT_STATUS_ORACLE = 6,
  CVT_STATUS_PANIC = 7,
} CvtStatus;

/**
 * Opaque circuit handle.
 */
typedef struct CvtCircuit CvtCircuit;

typedef struct CvtReport {
  double signal_gain;
  double added_noise_plus;
  double added_noise_minus;
  double fidelity;
  double transfer_plus;
  double transfer_minus;
  double conditional_variance_plus;
  double conditional_variance_minus;
  bool classical_channel_flag;
  bool fidelity_flag;
  bool transfer_flag;
} CvtReport;

typedef struct CvtQuadratureStats {
  double mean_plus;
  double mean_minus;
  double var_plus;
  double var_minus;
  double cov_plus_minus;
  double mean_photons;
} CvtQuadratureStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *cvt_last_error(void);

/**
 * Library version as a static string.
 */
const char *cvt_version(void);

/**
 * Parses `.qot` source into a new circuit.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum CvtStatus cvt_circuit_parse(const char *source, struct CvtCircuit **out);

/**
 * Electro-optic classical teleporter.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CvtStatus cvt_circuit_eo_classical(double k, double lambda, struct CvtCircuit **out);

/**
 * All-optical classical teleporter.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CvtStatus cvt_circuit_ao_classical(double gain, struct CvtCircuit **out);

/**
 * All-optical quantum teleporter; `composite` selects the two-amplifier build.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CvtStatus cvt_circuit_ao_quantum(double gain,
                                      double h,
                                      bool composite,
                                      struct CvtCircuit **out);

/**
 * Releases a circuit. NULL is ignored.
 *
 * # Safety
 * `circuit` must be NULL or a handle not yet freed.
 */
void cvt_circuit_free(struct CvtCircuit *circuit);

/**
 * Sets the coherent amplitude of the signal input.
 *
 * # Safety
 * `circuit` must be a live handle.
 */
enum CvtStatus cvt_circuit_set_alpha(struct CvtCircuit *circuit, double re, double im);

/**
 * Canonical `.qot` text; free the result with `cvt_string_free`.
 *
 * # Safety
 * `circuit` must be a live handle; `out` must be valid for writes.
 */
enum CvtStatus cvt_circuit_format(const struct CvtCircuit *circuit, char **out);

/**
 * Releases a string returned by this library. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string from this library not yet freed.
 */
void cvt_string_free(char *s);

/**
 * Teleportation figures of merit. `channel` may be NULL; it names the mode
 * whose variances decide the classical-channel flag.
 *
 * # Safety
 * `circuit` must be a live handle, `channel` NULL or a NUL-terminated
 * string, and `out` valid for writes.
 */
enum CvtStatus cvt_circuit_report(const struct CvtCircuit *circuit,
                                  const char *channel,
                                  struct CvtReport *out);

/**
 * Quadrature moments of the named mode.
 *
 * # Safety
 * `circuit` must be a live handle, `mode` a NUL-terminated string, `out`
 * valid for writes.
 */
enum CvtStatus cvt_circuit_mode_stats(const struct CvtCircuit *circuit,
                                      const char *mode,
                                      struct CvtQuadratureStats *out);

/**
 * Simulates the circuit in a number basis truncated at `cutoff` and reports
 * the output mode's moments and its fidelity with the input coherent state.
 * A `tail_threshold` of 0 selects the default.
 *
 * # Safety
 * `circuit` must be a live handle; `stats` and `fidelity` valid for writes.
 */
enum CvtStatus cvt_circuit_oracle(const struct CvtCircuit *circuit,
                                  size_t cutoff,
                                  double tail_threshold,
                                  struct CvtQuadratureStats *stats,
                                  double *fidelity);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CVTELE_H */
