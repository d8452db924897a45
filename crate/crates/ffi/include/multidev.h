#ifndef MULTIDEV_H
#define MULTIDEV_H

/* Generated by cbindgen from multidev-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes mirroring the CLI exit codes.
typedef enum MdvStatus {
  // Computation succeeded and the checked property (if any) holds.
  MDV_STATUS_OK = 0,
  // Computation succeeded but the checked property is false.
  MDV_STATUS_PROPERTY_FALSE = 1,
  // Domain or precondition error from the library.
  MDV_STATUS_DOMAIN_ERROR = 2,
  // Null pointer, invalid UTF-8, or otherwise unusable argument.
  MDV_STATUS_INVALID_ARGUMENT = 3,
  // Malformed JSON payload.
  MDV_STATUS_PARSE_ERROR = 4,
} MdvStatus;

// Opaque event-space handle.
typedef struct MdvSpace MdvSpace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message of the current thread, or null if none. The caller
// owns the returned string and must release it with `mdv_string_free`.
char *mdv_last_error(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be a pointer previously returned by a `mdv_*` function and not
// yet freed.
void mdv_string_free(char *s);

// The binary space 2_V for the given number of observers.
struct MdvSpace *mdv_space_binary(size_t observers);

// Parses an event space from its JSON form. Null on error.
//
// # Safety
// `text` must be a valid NUL-terminated string.
struct MdvSpace *mdv_space_from_json(const char *text);

// Serializes a space handle back to JSON.
//
// # Safety
// `space` must be a live handle from `mdv_space_binary`/`mdv_space_from_json`.
enum MdvStatus mdv_space_to_json(const struct MdvSpace *space, char **out_json);

// Releases a space handle. Null is ignored.
//
// # Safety
// `space` must be a live handle or null; it is invalid afterwards.
void mdv_space_free(struct MdvSpace *space);

// Total and top-level pioneer-set counts for one observer number.
//
// # Safety
// `total` and `top_level` must point to writable u64 storage.
enum MdvStatus mdv_pioneer_count(size_t observers, uint64_t *total, uint64_t *top_level);

// Inequality of a pioneer spec (JSON in, inequality JSON out).
//
// # Safety
// `spec_json` must be NUL-terminated; the output string must be freed with
// `mdv_string_free`.
enum MdvStatus mdv_pioneer_inequality(const char *spec_json, char **out_json);

// Tightness check for a Γ given as gamma JSON. Returns `Ok` when tight,
// `PropertyFalse` otherwise; the verdict JSON lands in `out_json` either
// way.
//
// # Safety
// `space` must be a live handle, `gamma_json` NUL-terminated, and the
// output freed with `mdv_string_free`.
enum MdvStatus mdv_tbic_check(const struct MdvSpace *space,
                              const char *gamma_json,
                              char **out_json);

// Evaluates an inequality (JSON, space embedded) against a distribution
// (JSON over the same space). Returns `Ok` when the value is nonnegative,
// `PropertyFalse` when violated; the exact value string lands in
// `out_value` as `"num/den"`.
//
// # Safety
// Strings must be NUL-terminated; the output is freed with
// `mdv_string_free`.
enum MdvStatus mdv_ineq_eval(const char *ineq_json, const char *dist_json, char **out_value);

// Every facet of the 2x2x2 Bell polytope as a JSON array of inequalities.
//
// # Safety
// The output string must be freed with `mdv_string_free`.
enum MdvStatus mdv_facets(char **out_json);

// Projects an omni-joint distribution (sizes/values JSON over the space's
// observables) onto its multiple-context statistics.
//
// # Safety
// `space` must be a live handle, `dist_json` NUL-terminated, and the
// output freed with `mdv_string_free`.
enum MdvStatus mdv_project(const struct MdvSpace *space, const char *dist_json, char **out_json);

// Maximal quantum violation of the simplest even/odd inequality for one
// observer count: the optimizing d (radians) and the minimal value.
//
// # Safety
// `d_out` and `value_out` must point to writable f64 storage.
enum MdvStatus mdv_max_violation(size_t observers, double *d_out, double *value_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MULTIDEV_H */
