#ifndef FLATCHECK_H
#define FLATCHECK_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result code of every fallible call.
 */
typedef enum FlatcheckStatus {
  FLATCHECK_STATUS_OK = 0,
  FLATCHECK_STATUS_NULL_ARGUMENT = 1,
  FLATCHECK_STATUS_INVALID_UTF8 = 2,
  /*
   Malformed or semantically invalid input document or name.
   */
  FLATCHECK_STATUS_INVALID_INPUT = 3,
  /*
   The computation ran but an identity residual or the sign calibration failed.
   */
  FLATCHECK_STATUS_CHECK_FAILED = 4,
  /*
   An exact result does not fit the fixed-width output type.
   */
  FLATCHECK_STATUS_OVERFLOW = 5,
  /*
   The jet or group element is not invertible.
   */
  FLATCHECK_STATUS_NOT_INVERTIBLE = 6,
  FLATCHECK_STATUS_PANIC = 7,
} FlatcheckStatus;

/*
 Opaque parsed chart.
 */
typedef struct FlatcheckChart FlatcheckChart;

/*
 Report parameters; pass `NULL` for the defaults.
 */
typedef struct FlatcheckReportOptions {
  double tol;
  double tol2;
  uint32_t grid;
  double fd_step;
  double fd_step2;
  /*
   0 = automatic, 1 = exact, 2 = numeric.
   */
  uint32_t backend;
} FlatcheckReportOptions;

/*
 `num / den` with `den > 0`.
 */
typedef struct FlatcheckRational {
  int64_t num;
  int64_t den;
} FlatcheckRational;

/*
 Element `(a1, a2, a3)` of the order-three jet group of the line.
 */
typedef struct FlatcheckG3 {
  struct FlatcheckRational a1;
  struct FlatcheckRational a2;
  struct FlatcheckRational a3;
} FlatcheckG3;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message describing the last failure on this thread; empty after a success.
 The pointer stays valid until the next library call on the same thread.
 */
const char *flatcheck_last_error_message(void);

/*
 Releases a string produced by this library. `NULL` is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void flatcheck_string_free(char *s);

/*
 Looks up a built-in chart by name.

 # Safety
 `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FlatcheckStatus flatcheck_chart_builtin(const char *name, struct FlatcheckChart **out);

/*
 Parses a chart document (explicit frame or `{"builtin": …}`).

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FlatcheckStatus flatcheck_chart_from_json(const char *json, struct FlatcheckChart **out);

/*
 Releases a chart handle. `NULL` is ignored.

 # Safety
 `chart` must come from this library and not have been freed.
 */
void flatcheck_chart_free(struct FlatcheckChart *chart);

/*
 Dimension of the chart, or 0 for `NULL`.

 # Safety
 `chart` must be `NULL` or a live handle.
 */
size_t flatcheck_chart_dim(const struct FlatcheckChart *chart);

/*
 Writes the residual report as JSON. Returns `CheckFailed` (with the JSON
 still written) when an identity residual exceeds its tolerance, and also
 `CheckFailed` (with a calibration document) when the sign calibration fails.

 # Safety
 `chart` must be a live handle, `options` `NULL` or valid, `out_json` valid.
 */
enum FlatcheckStatus flatcheck_report_json(const struct FlatcheckChart *chart,
                                           const struct FlatcheckReportOptions *options,
                                           char **out_json);

/*
 Composes two jet documents, `outer ∘ inner`, and writes the result as JSON.

 # Safety
 Both inputs must be NUL-terminated strings and `out_json` valid.
 */
enum FlatcheckStatus flatcheck_jet_compose_json(const char *outer,
                                                const char *inner,
                                                char **out_json);

/*
 Inverts a jet document.

 # Safety
 `jet` must be a NUL-terminated string and `out_json` valid.
 */
enum FlatcheckStatus flatcheck_jet_invert_json(const char *jet, char **out_json);

/*
 `out = a · b`, the jet of `a ∘ b`.

 # Safety
 All pointers must be valid.
 */
enum FlatcheckStatus flatcheck_g3_compose(const struct FlatcheckG3 *a,
                                          const struct FlatcheckG3 *b,
                                          struct FlatcheckG3 *out);

/*
 Group inverse in G3(1).

 # Safety
 All pointers must be valid.
 */
enum FlatcheckStatus flatcheck_g3_invert(const struct FlatcheckG3 *a, struct FlatcheckG3 *out);

/*
 Schwarzian defect of `a`: zero exactly on jets of Möbius maps.

 # Safety
 All pointers must be valid.
 */
enum FlatcheckStatus flatcheck_g3_schwarzian(const struct FlatcheckG3 *a,
                                             struct FlatcheckRational *out);

/*
 Order of a Lie pair document; `-1` when the pair is ineffective.

 # Safety
 `json` must be a NUL-terminated string and `out_order` valid.
 */
enum FlatcheckStatus flatcheck_liepair_order_json(const char *json, int64_t *out_order);

/*
 Order of a built-in Lie pair; `-1` when the pair is ineffective.

 # Safety
 `name` must be a NUL-terminated string and `out_order` valid.
 */
enum FlatcheckStatus flatcheck_liepair_builtin_order(const char *name, int64_t *out_order);

/*
 Library version as a static NUL-terminated string.
 */
const char *flatcheck_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLATCHECK_H */
