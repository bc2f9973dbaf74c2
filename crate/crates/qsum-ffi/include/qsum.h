/*
 * C interface for the qsum identity verification engine.
 *
 * Generated by cbindgen from the qsum-ffi crate; do not edit by hand.
 */

#ifndef QSUM_H
#define QSUM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code returned by every fallible entry point.
//
// `qsum_status_name` maps a code to a short static name.
typedef enum QsumStatus {
  // The call succeeded.
  QSUM_STATUS_OK = 0,
  // A required pointer argument was null.
  QSUM_STATUS_NULL_POINTER = 1,
  // A string argument was not valid UTF-8.
  QSUM_STATUS_INVALID_UTF8 = 2,
  // The requested precision is below the supported minimum (20).
  QSUM_STATUS_INVALID_DIGITS = 3,
  // No identity is registered under the given name.
  QSUM_STATUS_UNKNOWN_IDENTITY = 4,
  // No limit edge is registered under the given name.
  QSUM_STATUS_UNKNOWN_EDGE = 5,
  // A parameter was missing, malformed, duplicated, or not in an
  // identity's schema.
  QSUM_STATUS_INVALID_PARAM = 6,
  // The parameter point hits a pole of a series term or closed form.
  QSUM_STATUS_POLE = 7,
  // The parameter point violates the identity's domain.
  QSUM_STATUS_DOMAIN = 8,
  // Rejection sampling could not produce the requested cases.
  QSUM_STATUS_SAMPLING = 9,
  // The library panicked internally; free the context and report a
  // bug.
  QSUM_STATUS_PANIC = 10,
} QsumStatus;

// Opaque evaluation context fixing the working precision. Create with
// `qsum_context_new`, release with `qsum_context_free`. Immutable
// after creation and safe to share across threads.
typedef struct QsumContext QsumContext;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates an evaluation context with the given working precision in
// decimal digits (minimum 20) and writes the handle to `out`.
//
// # Safety
// `out` must be valid for writing one pointer.
enum QsumStatus qsum_context_new(uint32_t digits, struct QsumContext **out);

// Releases a context created by `qsum_context_new`. `ctx` may be null.
//
// # Safety
// `ctx` must be null or a handle from `qsum_context_new` that has not
// been freed already, with no other thread still using it.
void qsum_context_free(struct QsumContext *ctx);

// Returns the context's working precision in decimal digits, or 0 when
// `ctx` is null.
//
// # Safety
// `ctx` must be null or a live handle from `qsum_context_new`.
uint32_t qsum_context_digits(const struct QsumContext *ctx);

// Writes the JSON catalog of every identity — an array of
// `{"name", "title"}` objects — to `out`.
//
// # Safety
// `out` must be valid for writing one pointer.
enum QsumStatus qsum_identities_json(char **out);

// Writes the JSON description of one identity — both sides, parameter
// schema, domain conditions — to `out`.
//
// # Safety
// `identity` must be a NUL-terminated string; `out` must be valid for
// writing one pointer.
enum QsumStatus qsum_describe_json(const char *identity, char **out);

// Evaluates both sides of `identity` at one parameter point and writes
// the evaluation report to `out` — the same JSON object the CLI's
// `eval --json` prints (series value, status, terms used, tail
// estimate, closed form, residual).
//
// `params_json` is a JSON object mapping each schema parameter to a
// decimal string, e.g. `{"q":"0.3","a":"0.2+0.1i"}`. Values must be
// strings, not JSON numbers — numbers would pass through machine
// floating point and silently limit the attainable precision.
//
// Divergence is not an error status: the call returns `Ok` and the
// report's `"status"` field says `"diverging"`.
//
// # Safety
// `ctx` must be a live handle from `qsum_context_new`; `identity` and
// `params_json` must be NUL-terminated strings; `out` must be valid
// for writing one pointer.
enum QsumStatus qsum_eval_json(const struct QsumContext *ctx,
                               const char *identity,
                               const char *params_json,
                               char **out);

// Runs a seeded verification sweep and writes the report JSON to
// `out`. `identity` is a catalog name, or `"all"` for every identity
// (the output is then a JSON array, one report per identity, each with
// its own derived seed). `complex_profile` draws parameters with small
// imaginary parts instead of real values. Output is byte-identical
// across calls with identical arguments.
//
// # Safety
// `ctx` must be a live handle from `qsum_context_new`; `identity` must
// be a NUL-terminated string; `out` must be valid for writing one
// pointer.
enum QsumStatus qsum_verify_json(const struct QsumContext *ctx,
                                 const char *identity,
                                 size_t count,
                                 uint64_t seed,
                                 bool complex_profile,
                                 char **out);

// Runs a limit study along `edge` (for example `"thm2:prop41"`) and
// writes the report JSON to `out`. `schedule` is an optional
// comma-separated list of values for the edge's varying parameter;
// pass null for the edge's default schedule.
//
// # Safety
// `ctx` must be a live handle from `qsum_context_new`; `edge` must be
// a NUL-terminated string and `schedule` null or NUL-terminated; `out`
// must be valid for writing one pointer.
enum QsumStatus qsum_limits_json(const struct QsumContext *ctx,
                                 const char *edge,
                                 const char *schedule,
                                 char **out);

// Frees a string returned by this library. `s` may be null.
//
// # Safety
// `s` must be null or a string obtained from this library that has not
// been freed already.
void qsum_string_free(char *s);

// Returns the detail message recorded by the most recent failing call
// on this thread, or null when the most recent call succeeded. The
// caller owns the returned copy and must release it with
// `qsum_string_free`.
char *qsum_last_error_message(void);

// Returns a short static name for a status code (`"ok"`,
// `"unknown-identity"`, ...), or `"unknown-status"` for values outside
// the enum. Never free the result.
const char *qsum_status_name(uint32_t status);

// Returns the library version as a static string. Never free the
// result.
const char *qsum_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QSUM_H */
