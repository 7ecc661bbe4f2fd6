#ifndef FRLIM_H
#define FRLIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FrlimStatus {
  FRLIM_STATUS_OK = 0,
  FRLIM_STATUS_NULL_ARGUMENT = 1,
  FRLIM_STATUS_INVALID_UTF8 = 2,
  FRLIM_STATUS_SYNTAX = 3,
  FRLIM_STATUS_INVALID_GROUP = 4,
  FRLIM_STATUS_CAP_EXCEEDED = 5,
  FRLIM_STATUS_OUT_OF_RANGE = 6,
  FRLIM_STATUS_MALFORMED = 7,
  FRLIM_STATUS_PRECONDITION = 8,
  FRLIM_STATUS_INTERNAL = 9,
  FRLIM_STATUS_PANIC = 10,
} FrlimStatus;

/**
 * A parsed fr-code.
 */
typedef struct FrlimCode FrlimCode;

/**
 * A finite permutation group with its presentation.
 */
typedef struct FrlimGroup FrlimGroup;

/**
 * The result of a higher-limit computation.
 */
typedef struct FrlimReport FrlimReport;

/**
 * Options for [`frlim_limits`]. Zero in `top_degree` or `truncation` selects
 * the default for the code.
 */
typedef struct FrlimOptions {
  size_t top_degree;
  size_t truncation;
  size_t cap_elements;
  size_t cap_rank;
  uint64_t cap_seconds;
  uint64_t seed;
  bool checks;
} FrlimOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty if none. Valid until the
 * next failing call on the same thread.
 */
const char *frlim_last_error(void);

/**
 * Library version as a static string.
 */
const char *frlim_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void frlim_string_free(char *s);

/**
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum FrlimStatus frlim_code_parse(const char *text, struct FrlimCode **out);

/**
 * Canonical rendering of a code.
 *
 * # Safety
 * `code` must be a live handle and `out` a valid pointer.
 */
enum FrlimStatus frlim_code_render(const struct FrlimCode *code, char **out);

/**
 * Smallest faithful truncation depth, or 0 for a null handle.
 *
 * # Safety
 * `code` must be null or a live handle.
 */
size_t frlim_code_faithful_depth(const struct FrlimCode *code);

/**
 * # Safety
 * `code` must be null or a handle from [`frlim_code_parse`], not yet freed.
 */
void frlim_code_free(struct FrlimCode *code);

/**
 * Opens a group from a spec file path or a bundled name such as `"z4"`.
 * `cap_elements` of 0 selects the default cap.
 *
 * # Safety
 * `spec` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum FrlimStatus frlim_group_open(const char *spec, size_t cap_elements, struct FrlimGroup **out);

/**
 * Builds a group from the text of a JSON spec.
 *
 * # Safety
 * `json` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum FrlimStatus frlim_group_from_json(const char *json,
                                       size_t cap_elements,
                                       struct FrlimGroup **out);

/**
 * Group order, or 0 for a null handle.
 *
 * # Safety
 * `group` must be null or a live handle.
 */
size_t frlim_group_order(const struct FrlimGroup *group);

/**
 * Number of generators, or 0 for a null handle.
 *
 * # Safety
 * `group` must be null or a live handle.
 */
size_t frlim_group_rank(const struct FrlimGroup *group);

/**
 * # Safety
 * `group` must be null or a handle from this library, not yet freed.
 */
void frlim_group_free(struct FrlimGroup *group);

struct FrlimOptions frlim_options_default(void);

/**
 * Computes `lim^0..lim^T`. `options` may be null for the defaults.
 *
 * # Safety
 * `code` and `group` must be live handles, `options` null or valid, and `out` a valid pointer.
 */
enum FrlimStatus frlim_limits(const struct FrlimCode *code,
                              const struct FrlimGroup *group,
                              const struct FrlimOptions *options,
                              struct FrlimReport **out);

/**
 * Highest computed degree, or 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t frlim_report_top_degree(const struct FrlimReport *report);

/**
 * Truncation depth used, or 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle.
 */
size_t frlim_report_truncation(const struct FrlimReport *report);

/**
 * `lim^degree` in the notation `Z^2 + Z/2 + Z/4`.
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum FrlimStatus frlim_report_lim(const struct FrlimReport *report, size_t degree, char **out);

/**
 * Free rank of `lim^degree`.
 *
 * # Safety
 * `report` must be a live handle and `rank` a valid pointer.
 */
enum FrlimStatus frlim_report_lim_rank(const struct FrlimReport *report,
                                       size_t degree,
                                       size_t *rank);

/**
 * Torsion invariant factors of `lim^degree`. Writes up to `capacity` values
 * to `factors` (which may be null when `capacity` is 0) and the total count
 * to `count`.
 *
 * # Safety
 * `report` must be a live handle, `factors` valid for `capacity` writes, and `count` a valid pointer.
 */
enum FrlimStatus frlim_report_lim_torsion(const struct FrlimReport *report,
                                          size_t degree,
                                          uint64_t *factors,
                                          size_t capacity,
                                          size_t *count);

/**
 * The report as pretty-printed JSON.
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum FrlimStatus frlim_report_json(const struct FrlimReport *report, char **out);

/**
 * # Safety
 * `report` must be null or a handle from [`frlim_limits`], not yet freed.
 */
void frlim_report_free(struct FrlimReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRLIM_H */
