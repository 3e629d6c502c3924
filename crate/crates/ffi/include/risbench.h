#ifndef RISBENCH_H
#define RISBENCH_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RbSeries {
  RB_SERIES_COHERENT = 0,
  RB_SERIES_POWER_SUM = 1,
} RbSeries;

typedef enum RbStatus {
  RB_STATUS_OK = 0,
  RB_STATUS_NULL_POINTER = 1,
  RB_STATUS_INVALID_ARGUMENT = 2,
  RB_STATUS_CONFIG = 3,
  RB_STATUS_GEOMETRY = 4,
  RB_STATUS_NUMERIC = 5,
  RB_STATUS_CALIBRATION = 6,
  RB_STATUS_PANIC = 7,
} RbStatus;

/**
 * Opaque empirical distribution.
 */
typedef struct RbCdf RbCdf;

/**
 * Opaque wall material.
 */
typedef struct RbMaterial RbMaterial;

/**
 * Opaque study configuration.
 */
typedef struct RbStudy RbStudy;

typedef struct RbComplex {
  double re;
  double im;
} RbComplex;

typedef struct RbPoint {
  double x;
  double z;
} RbPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread (empty if none). Owned by the
 * library.
 */
const char *rb_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rb_version(void);

/**
 * Hankel function of the first kind, order 0 or 1, at x > 0.
 *
 * # Safety
 * `result` must be a valid pointer or null.
 */
enum RbStatus rb_hankel1(uint32_t order, double x, struct RbComplex *result);

/**
 * 2D Green's function between `r` and `s` at carrier `fc` (Hz).
 *
 * # Safety
 * `result` must be a valid pointer or null.
 */
enum RbStatus rb_green2d(struct RbPoint r, struct RbPoint s, double fc, struct RbComplex *result);

/**
 * Material from the built-in ITU table. `sqrt_permittivity` selects
 * n = sqrt(eps_r) instead of using the tabulated value as the index.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `material` a valid pointer.
 */
enum RbStatus rb_material_from_table(const char *name,
                                     double fc,
                                     bool sqrt_permittivity,
                                     struct RbMaterial **material);

/**
 * Non-magnetic material with complex index `n`.
 *
 * # Safety
 * `material` must be a valid pointer.
 */
enum RbStatus rb_material_from_index(struct RbComplex n, struct RbMaterial **material);

/**
 * # Safety
 * `material` must come from an `rb_material_*` constructor, or be null.
 */
void rb_material_free(struct RbMaterial *material);

/**
 * Complex index of `material`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RbStatus rb_material_index(const struct RbMaterial *material, struct RbComplex *result);

/**
 * Plane-wave reflection coefficient at tangential wavenumber `kx` (rad/m).
 *
 * # Safety
 * Pointers must be valid.
 */
enum RbStatus rb_fresnel_spectrum(const struct RbMaterial *material,
                                  double fc,
                                  double kx,
                                  struct RbComplex *result);

/**
 * Fitted surface normalization constant at carrier `fc`; fails with
 * `Calibration` beyond 5% from -mu0.
 *
 * # Safety
 * `result` must be a valid pointer.
 */
enum RbStatus rb_calibrate(double fc, struct RbComplex *result);

/**
 * Study configuration from TOML text (same schema as the command line tool).
 *
 * # Safety
 * `toml` must be a NUL-terminated string; `study` a valid pointer.
 */
enum RbStatus rb_study_from_toml(const char *toml, struct RbStudy **study);

/**
 * # Safety
 * `study` must come from `rb_study_from_toml`, or be null.
 */
void rb_study_free(struct RbStudy *study);

/**
 * # Safety
 * `study` must be a valid handle.
 */
enum RbStatus rb_study_set_seed(struct RbStudy *study, uint64_t seed);

/**
 * Worker threads for the study (0 means the global pool). Results do not
 * depend on it.
 *
 * # Safety
 * `study` must be a valid handle.
 */
enum RbStatus rb_study_set_workers(struct RbStudy *study, uint32_t workers);

/**
 * Ambient channel of the configured room between `tx` and `rx`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RbStatus rb_room_channel(const struct RbStudy *study,
                              struct RbPoint rx,
                              struct RbPoint tx,
                              struct RbComplex *h_coherent,
                              double *gain_power_sum);

/**
 * Normalized optimal gain (linear) of a centered surface of `length` m
 * with the configured pitch.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RbStatus rb_ris_optimal_gain(const struct RbStudy *study,
                                  double length,
                                  struct RbPoint rx,
                                  struct RbPoint tx,
                                  double *gain);

/**
 * Ambient gain distribution (dB) of one series.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RbStatus rb_study_ambient_cdf(const struct RbStudy *study,
                                   enum RbSeries series,
                                   struct RbCdf **cdf);

/**
 * Equivalent surface size distribution (m) of one series; `saturated`
 * receives the number of samples censored at L = W.
 *
 * # Safety
 * Pointers must be valid; `saturated` may be null.
 */
enum RbStatus rb_study_equivalent_size_cdf(const struct RbStudy *study,
                                           enum RbSeries series,
                                           struct RbCdf **cdf,
                                           uint64_t *saturated);

/**
 * # Safety
 * `cdf` must come from an `rb_study_*_cdf` call, or be null.
 */
void rb_cdf_free(struct RbCdf *cdf);

/**
 * Number of samples, or 0 for a null handle.
 *
 * # Safety
 * `cdf` must be a valid handle or null.
 */
size_t rb_cdf_len(const struct RbCdf *cdf);

/**
 * Smallest sample whose CDF reaches `p`.
 *
 * # Safety
 * Pointers must be valid.
 */
enum RbStatus rb_cdf_quantile(const struct RbCdf *cdf, double p, double *result);

/**
 * Copies up to `capacity` sorted samples into `values`; `written` receives
 * the count.
 *
 * # Safety
 * `values` must have room for `capacity` doubles.
 */
enum RbStatus rb_cdf_samples(const struct RbCdf *cdf,
                             double *values,
                             size_t capacity,
                             size_t *written);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RISBENCH_H */
