#ifndef STEREO_UNCERTAINTY_H
#define STEREO_UNCERTAINTY_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum SuStatus {
  SU_STATUS_OK = 0,
  SU_STATUS_NULL_POINTER = 1,
  SU_STATUS_INVALID_ARGUMENT = 2,
  SU_STATUS_MISSING_RESOURCE = 3,
  SU_STATUS_IO = 4,
  SU_STATUS_MALFORMED_DATA = 5,
  SU_STATUS_NUMERICAL = 6,
  SU_STATUS_PANIC = 7,
} SuStatus;

/**
 * Opaque free-field dictionary.
 */
typedef struct SuDictionary SuDictionary;

/**
 * Opaque HRIR set.
 */
typedef struct SuHrirSet SuHrirSet;

/**
 * Relative panning point seen from an off-centre listener.
 */
typedef struct SuRelativePanning {
  double rictd_s;
  double ricld_db;
} SuRelativePanning;

typedef struct SuPsrDesign {
  double d_m;
  double base_angle_deg;
  double ictd_max_s;
  double icld_w_db;
  double beta_deg;
} SuPsrDesign;

typedef struct SuUncertainty {
  /**
   * Raw circular spread, 1 - |resultant|.
   */
  double h;
  /**
   * Spread rescaled so that the best free-field source scores 0.
   */
  double h_bar;
  /**
   * Likelihood maximum on the dictionary grid.
   */
  double peak_deg;
} SuUncertainty;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *su_last_error(void);

/**
 * Closed-form interaural delay at which the two loudspeaker arrivals
 * overlap for a centred listener.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SuStatus su_tau_overlap(double head_radius_m,
                             double ear_angle_deg,
                             double base_angle_deg,
                             double speed_of_sound,
                             double *out_s);

/**
 * Relative ICTD/ICLD for a listener at `(x_m, y_m)`, default head.
 * `exact` selects exact ear paths over the small-offset approximation.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SuStatus su_relative_panning(double ictd_s,
                                  double icld_db,
                                  double x_m,
                                  double y_m,
                                  double base_angle_deg,
                                  double distance_m,
                                  bool exact,
                                  struct SuRelativePanning *out);

/**
 * Designs a PSR arrangement for microphone distance `d_m` using the
 * built-in Williams curves and 343 m/s.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SuStatus su_psr_design(double d_m, double base_angle_deg, struct SuPsrDesign *out);

/**
 * Built-in spherical-head HRIR set.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum SuStatus su_hrir_set_analytic(struct SuHrirSet **out);

/**
 * Loads an HRIR set from a JSON file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum SuStatus su_hrir_set_load(const char *path, struct SuHrirSet **out);

/**
 * # Safety
 * `set` must be NULL or a handle from this library not yet freed.
 */
void su_hrir_set_free(struct SuHrirSet *set);

/**
 * Builds the free-field dictionary with default settings.
 *
 * # Safety
 * `hrirs` must be a live handle; `out` must be valid for writes.
 */
enum SuStatus su_dictionary_build(const struct SuHrirSet *hrirs, struct SuDictionary **out);

/**
 * # Safety
 * `path` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum SuStatus su_dictionary_load(const char *path, struct SuDictionary **out);

/**
 * # Safety
 * `dict` must be a live handle; `path` a NUL-terminated string.
 */
enum SuStatus su_dictionary_save(const struct SuDictionary *dict, const char *path);

/**
 * Lowest free-field self-score, used to rescale h.
 *
 * # Safety
 * `dict` must be a live handle; `out` must be valid for writes.
 */
enum SuStatus su_dictionary_h_min(const struct SuDictionary *dict, double *out);

/**
 * # Safety
 * `dict` must be NULL or a handle from this library not yet freed.
 */
void su_dictionary_free(struct SuDictionary *dict);

/**
 * Uncertainty of a loudspeaker-pair panning point for a listener at
 * `(x_m, y_m)`: 60 degree base, 2 m, default stimulus and model.
 *
 * # Safety
 * Handles must be live; `out` must be valid for writes.
 */
enum SuStatus su_analyze_stereo(const struct SuHrirSet *hrirs,
                                const struct SuDictionary *dict,
                                double ictd_s,
                                double icld_db,
                                double x_m,
                                double y_m,
                                struct SuUncertainty *out);

/**
 * Uncertainty of arbitrary ear signals of `len` samples each, sampled at
 * the dictionary's rate.
 *
 * # Safety
 * `left` and `right` must each point to `len` readable doubles; `dict`
 * must be a live handle; `out` must be valid for writes.
 */
enum SuStatus su_localization_uncertainty(const struct SuDictionary *dict,
                                          const double *left,
                                          const double *right,
                                          size_t len,
                                          struct SuUncertainty *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STEREO_UNCERTAINTY_H */
