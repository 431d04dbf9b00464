#ifndef CONLEY_H
#define CONLEY_H

/* Generated by cbindgen from the conley-capi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes mirroring the CLI exit codes.
 */
typedef enum ConleyStatus {
  /**
   * The call succeeded.
   */
  CONLEY_STATUS_OK = 0,
  /**
   * Internal error or failed audit property.
   */
  CONLEY_STATUS_INTERNAL = 1,
  /**
   * Configuration or input parsing error.
   */
  CONLEY_STATUS_CONFIG = 2,
  /**
   * The neighbourhood fails to isolate.
   */
  CONLEY_STATUS_ISOLATION = 3,
  /**
   * No admissible index pair exists at the current resolution.
   */
  CONLEY_STATUS_PAIR = 4,
  /**
   * The excision isomorphism could not be inverted.
   */
  CONLEY_STATUS_EXCISION = 5,
  /**
   * A required pointer argument was null.
   */
  CONLEY_STATUS_NULL_POINTER = 6,
  /**
   * A string argument was not valid UTF-8.
   */
  CONLEY_STATUS_UTF8 = 7,
} ConleyStatus;

/**
 * An analysis session: parsed configuration, grid, samples and the
 * induced multivalued map. Opaque to C callers.
 */
typedef struct ConleySystem ConleySystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Build a system from a JSON run-configuration file.
 *
 * On success writes a new handle to `out` and returns OK. On failure
 * returns the matching status; the message is available through
 * `conley_last_error` on the same thread.
 *
 * # Safety
 * `config_path` must point to a nul-terminated string and `out` to a
 * writable pointer slot; both stay borrowed only for the duration of the
 * call.
 */
enum ConleyStatus conley_system_new_from_config(const char *config_path, struct ConleySystem **out);

/**
 * Release a handle created by `conley_system_new_from_config`.
 * Passing null is a no-op.
 *
 * # Safety
 * `sys` must be null or a pointer previously returned by the constructor
 * and not freed before.
 */
void conley_system_free(struct ConleySystem *sys);

/**
 * Release a string returned by this library. Passing null is a no-op.
 *
 * # Safety
 * `s` must be null or a pointer previously returned by a `*_json`,
 * `*_svg` or error accessor of this library, and not freed before.
 */
void conley_string_free(char *s);

/**
 * Run the full analysis of every configured neighbourhood and write the
 * JSON report to `out_json` (caller frees with `conley_string_free`).
 *
 * The report is produced even when individual neighbourhoods fail; the
 * returned status reflects the first per-neighbourhood error, OK when
 * every neighbourhood succeeded.
 *
 * # Safety
 * `sys` must be a live handle; `out_json` a writable pointer slot.
 */
enum ConleyStatus conley_system_analyze_json(struct ConleySystem *sys, char **out_json);

/**
 * Render the sampling figure as an SVG document in `out_svg` (caller
 * frees with `conley_string_free`). The first explicit neighbourhood of
 * the configuration, its invariant part and the image of that part are
 * overlaid when available.
 *
 * # Safety
 * `sys` must be a live handle; `out_svg` a writable pointer slot.
 */
enum ConleyStatus conley_system_figure_svg(struct ConleySystem *sys, char **out_svg);

/**
 * Copy the message of the last failure recorded on this handle to `out`
 * (caller frees with `conley_string_free`). Writes null when no failure
 * has been recorded.
 *
 * # Safety
 * `sys` must be a live handle; `out` a writable pointer slot.
 */
enum ConleyStatus conley_system_last_error(const struct ConleySystem *sys, char **out);

/**
 * Copy the message of the last constructor failure on this thread to
 * `out` (caller frees with `conley_string_free`). Writes null when no
 * failure has been recorded.
 *
 * # Safety
 * `out` must be a writable pointer slot.
 */
enum ConleyStatus conley_last_error(char **out);

/**
 * A static description of a status code. Never null; do not free.
 */
const char *conley_status_message(enum ConleyStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CONLEY_H */
